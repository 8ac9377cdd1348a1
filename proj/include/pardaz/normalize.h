// Copyright 2026 The Pardaz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARDAZ_NORMALIZE_H_
#define PARDAZ_NORMALIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace pardaz {

// Ordered tokens of one sentence. No token is empty or contains whitespace,
// and after normalization no token starts or ends with ZWNJ.
using TokenSequence = std::vector<std::string>;

struct NormalizationConfig {
  // Arabic Kaf/Yeh/Heh variants to Persian forms; drops tatweel.
  bool map_arabic_variants = true;
  // Harakat, tanwin, shadda, sukun and superscript alef.
  bool strip_diacritics = false;
  // ASCII and Arabic-Indic digits to Persian digits U+06F0..U+06F9.
  bool normalize_digits = true;
  // Whitespace runs to one space, trimmed; drops zero-width spaces, BOM and
  // bidi controls.
  bool collapse_whitespace = true;
  // Keeps ZWNJ inside words (collapsing runs and dropping it at word
  // boundaries). When false every ZWNJ is removed.
  bool preserve_zwnj = true;
};

std::string normalize_text(std::string_view raw,
                           const NormalizationConfig& cfg = {});

TokenSequence tokenize(std::string_view text);
std::string detokenize(const TokenSequence& seq);

// Shorthand for tokenize(normalize_text(raw, cfg)).
TokenSequence normalize_and_tokenize(std::string_view raw,
                                     const NormalizationConfig& cfg = {});

// True for codepoints the tokenizer detaches as standalone tokens.
bool is_punctuation(char32_t cp);

// Checks the TokenSequence invariants.
bool is_well_formed(const TokenSequence& seq);

// Joins tokens with single spaces, no punctuation handling. This is the
// line format of corpus, hypothesis and reference files.
std::string join_tokens(const TokenSequence& seq);

// Parses `key=value` flags into a config. Keys are the field names above;
// values are 1/0/true/false/on/off. Throws Error on unknown keys.
void apply_normalization_flag(NormalizationConfig& cfg, std::string_view flag);

}  // namespace pardaz

#endif  // PARDAZ_NORMALIZE_H_
