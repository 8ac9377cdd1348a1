import pytest

import pardaz


def test_normalize_and_tokenize():
    assert pardaz.normalize("كتاب 12") == "کتاب ۱۲"
    assert pardaz.tokenize("خواندم، تا!") == ["خواندم", "،", "تا", "!"]
    assert pardaz.detokenize(["a", "b"]) == "a b"


def test_apply_rules_and_trace():
    out, trace = pardaz.apply_rules(["تو", "را", "دیدم"])
    assert out == ["تورو", "دیدم"]
    rule_id, src, tgt = trace[0]
    assert src == (0, 2)
    assert tgt == (0, 1)
    assert rule_id


def test_break_sentence_is_deterministic():
    toks = pardaz.tokenize("به تهران می‌روم")
    a = pardaz.break_sentence(toks, p=0.5, seed=3, index=9)
    b = pardaz.break_sentence(toks, p=0.5, seed=3, index=9)
    assert a == b
    assert pardaz.break_sentence(toks, p=1.0)[0] == toks
    with pytest.raises(pardaz.Error):
        pardaz.break_sentence(toks, p=2.0)


def test_rule_baseline():
    assert pardaz.rule_standardize(["تهرون"]) == ["تهران"]
    assert pardaz.rule_standardize(["کمه"], {"کم": 3, "است": 9}) == ["کم", "است"]


def test_train_standardize_save_load(tmp_path):
    std = [pardaz.tokenize(s) for s in ["تو را دیدم", "کم است", "به تهران رفتم"]] * 50
    pairs = [(pardaz.apply_rules(s)[0], s) for s in std]
    model = pardaz.Model.train(pairs)
    assert model.phrases > 0
    out, score = model.standardize(["تورو", "دیدم"], beam=4)
    assert out == ["تو", "را", "دیدم"]
    assert score < 0
    path = tmp_path / "m.model"
    model.save(path)
    again = pardaz.Model.load(path)
    assert again.standardize(["کمه"]) == model.standardize(["کمه"])
    with pytest.raises(pardaz.IoError):
        pardaz.Model.load(tmp_path / "missing.model")


def test_bleu():
    ref = [["the", "cat", "sat", "on", "a", "mat"]]
    assert pardaz.corpus_bleu(ref, ref) == pytest.approx(100.0)
    hyp = [s.split() for s in ["the cat sat on the mat today", "a quick brown fox jumps",
                               "من به خانه رفتم ."]]
    ref = [s.split() for s in ["the cat sat on a mat", "the quick brown fox jumped over",
                               "من به خانه رفتم ."]]
    assert pardaz.corpus_bleu(hyp, ref) == pytest.approx(56.31183561528123, abs=1e-9)
    with pytest.raises(pardaz.Error):
        pardaz.corpus_bleu([], [])


def test_version():
    assert pardaz.__version__
    assert pardaz.MODEL_FORMAT_VERSION == 1
    assert "\t" in pardaz.default_rules_text()
