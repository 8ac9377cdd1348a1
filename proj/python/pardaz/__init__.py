"""Colloquial-to-standard Persian text conversion."""

from ._pardaz import (
    MODEL_FORMAT_VERSION,
    Error,
    FormatError,
    IoError,
    Model,
    ParseError,
    __version__,
    apply_rules,
    break_sentence,
    corpus_bleu,
    default_rules_text,
    detokenize,
    normalize,
    rule_standardize,
    tokenize,
)

__all__ = [
    "MODEL_FORMAT_VERSION",
    "Error",
    "FormatError",
    "IoError",
    "Model",
    "ParseError",
    "__version__",
    "apply_rules",
    "break_sentence",
    "corpus_bleu",
    "default_rules_text",
    "detokenize",
    "normalize",
    "rule_standardize",
    "tokenize",
]
