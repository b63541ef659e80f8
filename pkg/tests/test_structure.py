import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from storyarcs.structure import (
    DEFAULT_CATEGORIES,
    LabeledSegment,
    ModelFormatError,
    evaluate,
    load_labeled,
    load_model,
    make_synthetic_corpus,
    model_from_json,
    model_to_json,
    predict,
    save_model,
    split,
    train,
)

L = LabeledSegment


def test_single_category_prior_is_one():
    m = train([L("a b c", "tension"), L("d", "tension")])
    assert m.categories == ("tension",)
    assert math.exp(m.log_priors[0]) == pytest.approx(1.0)


def test_hand_computed_likelihoods():
    m = train([L("gold", "reward"), L("prison", "punishment")], alpha=1.0)
    # vocabulary {gold, prison}; each class saw one token: (count + 1) / (1 + 2)
    g, p = m.vocabulary["gold"], m.vocabulary["prison"]
    r = m.categories.index("reward")
    assert math.exp(m.log_likelihoods[r, g]) == pytest.approx(2 / 3, abs=1e-12)
    assert math.exp(m.log_likelihoods[r, p]) == pytest.approx(1 / 3, abs=1e-12)
    assert np.exp(m.log_priors).tolist() == pytest.approx([0.5, 0.5])


def test_duplicated_training_set_same_likelihood_ratios():
    data = [L("gold gold win", "reward"), L("prison exile", "punishment"), L("gold prison", "reward")]
    m1, m2 = train(data), train(data * 2)
    assert m1.vocabulary == m2.vocabulary
    np.testing.assert_allclose(m1.log_priors, m2.log_priors, atol=1e-12)
    for text in ("gold", "prison exile", "win win prison", ""):
        assert predict(m1, text).label == predict(m2, text).label


def test_train_errors():
    with pytest.raises(ValueError, match="alpha"):
        train([L("x", "a")], alpha=0)
    with pytest.raises(ValueError, match="category coverage"):
        train([L("x", "a")], categories=["a", "b"])
    with pytest.raises(ValueError, match="declared"):
        train([L("x", "c")], categories=["a"])
    with pytest.raises(ValueError, match="category coverage"):
        train([])


def test_empty_and_oov_text_use_priors():
    m = train([L("gold", "reward"), L("gold win", "reward"), L("prison", "punishment")])
    assert predict(m, "").label == "reward"
    assert predict(m, "zzz qqq").label == "reward"
    assert predict(m, "").log_scores == pytest.approx(dict(zip(m.categories, m.log_priors)))


def test_victory_by_hand():
    data = [L("triumph parade", "victory"), L("triumph crowd", "victory"), L("storm dark", "tension")]
    m = train(data, categories=["tension", "victory"])
    pred = predict(m, "triumph triumph")
    # |V| = 5; victory saw 4 tokens (triumph x2), tension saw 2 (triumph x0)
    victory = math.log(2 / 3) + 2 * math.log((2 + 1) / (4 + 5))
    tension = math.log(1 / 3) + 2 * math.log((0 + 1) / (2 + 5))
    assert pred.label == "victory"
    assert pred.log_scores["victory"] == pytest.approx(victory, abs=1e-12)
    assert pred.log_scores["tension"] == pytest.approx(tension, abs=1e-12)


def test_tie_break_by_category_order():
    m = train([L("a", "x"), L("b", "y")], categories=["y", "x"])
    assert predict(m, "").label == "y"


def test_model_round_trip(tmp_path):
    data = make_synthetic_corpus(per_class=10, seed=3)
    m = train(data, categories=DEFAULT_CATEGORIES)
    path = tmp_path / "model.json"
    save_model(m, path)
    back = load_model(path)
    assert back == m
    for d in data[:20]:
        assert predict(back, d.text) == predict(m, d.text)


def test_truncated_model_file(tmp_path):
    m = train([L("a", "x"), L("b", "y")])
    path = tmp_path / "model.json"
    path.write_text(model_to_json(m)[:40])
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_reordered_categories_rejected():
    doc = json.loads(model_to_json(train([L("a", "x"), L("b", "y")])))
    doc["categories"] = doc["categories"][::-1]
    with pytest.raises(ModelFormatError):
        model_from_json(json.dumps(doc))


def test_version_mismatch():
    doc = json.loads(model_to_json(train([L("a", "x")])))
    doc["version"] = 99
    with pytest.raises(ModelFormatError, match="version"):
        model_from_json(json.dumps(doc))


def test_split_is_stratified_and_seeded():
    data = make_synthetic_corpus(per_class=10, seed=1)
    tr, te = split(data, 0.8, seed=5)
    assert len(tr) == 32 and len(te) == 8
    assert {d.label for d in te} == set(DEFAULT_CATEGORIES)
    assert split(data, 0.8, seed=5) == (tr, te)
    with pytest.raises(ValueError, match="category coverage"):
        split([L("only one", "x")])


def test_load_labeled(tmp_path):
    p = tmp_path / "data.tsv"
    p.write_text("label\ttext\nreward\tgold, and more gold\ntension\tdark\n")
    rows = load_labeled(p)
    assert rows == [L("gold, and more gold", "reward"), L("dark", "tension")]


def test_evaluate_report():
    m = train([L("gold", "reward"), L("prison", "punishment")])
    report = evaluate(m, [L("gold", "reward"), L("prison", "reward")])
    assert report["accuracy"] == 0.5
    assert report["per_class"]["reward"]["precision"] == 1.0
    assert report["per_class"]["reward"]["recall"] == 0.5


def test_bundled_demo_corpus(data_dir):
    data = load_labeled(data_dir / "structure_demo.tsv")
    tr, te = split(data, 0.8, seed=0)
    assert evaluate(train(tr, categories=DEFAULT_CATEGORIES), te)["accuracy"] == 1.0


labeled = st.lists(
    st.tuples(st.sampled_from(["x", "y", "z"]), st.lists(st.sampled_from(list("abcdefg")), max_size=8)),
    min_size=1,
    max_size=20,
)


@given(labeled, st.floats(0.01, 5))
@settings(max_examples=60)
def test_likelihoods_are_distributions(rows, alpha):
    m = train([L(" ".join(ws), c) for c, ws in rows], alpha)
    if m.log_likelihoods.shape[1]:
        np.testing.assert_allclose(np.exp(m.log_likelihoods).sum(axis=1), 1.0, atol=1e-9)
    assert np.exp(m.log_priors).sum() == pytest.approx(1.0, abs=1e-9)


@given(labeled, st.lists(st.sampled_from(list("abcdefgh")), max_size=10), st.randoms())
@settings(max_examples=60)
def test_word_order_does_not_matter(rows, words, random):
    m = train([L(" ".join(ws), c) for c, ws in rows])
    shuffled = words[:]
    random.shuffle(shuffled)
    a, b = predict(m, " ".join(words)), predict(m, " ".join(shuffled))
    assert a.label == b.label
    assert a.log_scores == pytest.approx(b.log_scores, abs=1e-9)


@given(labeled, st.integers(2, 4), st.floats(0.1, 3))
@settings(max_examples=60)
def test_replication_with_scaled_alpha_is_the_same_model(rows, k, alpha):
    # (k*c + k*alpha) / (k*n + k*alpha*|V|) == (c + alpha) / (n + alpha*|V|)
    data = [L(" ".join(ws), c) for c, ws in rows]
    m1, mk = train(data, alpha), train(data * k, alpha * k)
    assert m1.vocabulary == mk.vocabulary
    np.testing.assert_allclose(m1.log_priors, mk.log_priors, atol=1e-12)
    np.testing.assert_allclose(m1.log_likelihoods, mk.log_likelihoods, atol=1e-12)
