import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from storyarcs.corpus import FreqVector, SegmentMatrix
from storyarcs.sentiment import (
    NO_SIGNAL,
    SentimentArc,
    arc,
    emotion_score,
    interpolate_gaps,
    load_arc,
    save_arc,
)
from storyarcs.lexicon import score_vector, stop_mask


def _matrix(rows, doc="d"):
    return SegmentMatrix(doc, tuple(FreqVector.from_counts(r, doc=doc) for r in rows), window_size=10)


def test_single_word_score(sample_lex):
    s = score_vector(sample_lex, "arousal")
    assert emotion_score({sample_lex.index["aardvark"]: 1}, s) == 0.490


def test_two_word_mean(sample_lex):
    s = score_vector(sample_lex, "arousal")
    counts = {sample_lex.index["aaaaaaah"]: 1, sample_lex.index["aaaah"]: 1}
    expected = oracles.weighted_mean(counts, s.values)
    assert expected == pytest.approx(0.621, abs=1e-12)
    assert emotion_score(counts, s) == pytest.approx(expected, abs=1e-15)


def test_empty_is_no_signal(sample_lex):
    assert emotion_score({}, score_vector(sample_lex)) is NO_SIGNAL


def test_masked_words_do_not_count(sample_lex):
    s = score_vector(sample_lex, "arousal")
    mask = stop_mask(sample_lex, "arousal", 0.0, {"aardvark"})
    counts = {sample_lex.index["aardvark"]: 5, sample_lex.index["zoo"]: 1}
    assert emotion_score(counts, s, mask) == 0.520
    assert emotion_score({sample_lex.index["aardvark"]: 5}, s, mask) is NO_SIGNAL


def test_misaligned_rejected(sample_lex):
    s = score_vector(sample_lex)
    with pytest.raises(ValueError):
        emotion_score({len(s): 1}, s)
    with pytest.raises(ValueError):
        emotion_score(np.ones(3, dtype=int), s)
    with pytest.raises(ValueError):
        emotion_score({0: 1}, s, np.zeros(3, dtype=bool))


def test_arc_single_row(sample_lex):
    s = score_vector(sample_lex)
    row = {0: 2, 5: 1}
    a = arc(_matrix([row]), s)
    assert len(a) == 1
    assert a.scores[0] == emotion_score(row, s)


def test_arc_identical_rows_constant(sample_lex):
    s = score_vector(sample_lex)
    a = arc(_matrix([{1: 3, 4: 2, 9: 1}] * 25), s)
    assert np.allclose(a.scores, a.scores[0], atol=1e-15)


def test_arc_matches_batch_recompute(rng):
    size = 400
    values = rng.uniform(0, 1, size)
    rows = []
    for _ in range(30):
        pos = rng.choice(size, size=rng.integers(0, 15), replace=False)
        rows.append({int(p): int(rng.integers(1, 5)) for p in pos})
    a = arc(_matrix(rows), values, context=10)
    expected = oracles.batch_arc(rows, values, 10)
    for got, want in zip(a.scores, expected):
        if want is None:
            assert np.isnan(got)
        else:
            assert abs(got - want) < 1e-9


def test_arc_rejects_bad_context(sample_lex):
    with pytest.raises(ValueError):
        arc(_matrix([{0: 1}]), score_vector(sample_lex), context=0)


def test_arc_empty_matrix(sample_lex):
    assert len(arc(_matrix([]), score_vector(sample_lex))) == 0


def _arc(values):
    return SentimentArc("d", np.array([np.nan if v is None else v for v in values], dtype=float))


def test_interpolate_gaps():
    assert interpolate_gaps(_arc([0.4, None, 0.6])).scores.tolist() == pytest.approx([0.4, 0.5, 0.6])
    assert interpolate_gaps(_arc([None, 0.7])).scores.tolist() == [0.7, 0.7]
    out = interpolate_gaps(_arc([None, None]))
    assert out.gap_warning and np.isnan(out.scores).all()


def test_arc_file_round_trip(tmp_path):
    a = SentimentArc("doc", np.array([0.5, np.nan, 0.25]), context=10, window_size=500, coverage=np.array([1.0, 0.0, 0.5]))
    for suffix in ("csv", "json"):
        p = tmp_path / f"doc.arc.{suffix}"
        save_arc(a, p, "arousal")
        b = load_arc(p)
        assert b.doc == "doc"
        np.testing.assert_array_equal(b.scores, a.scores)
        np.testing.assert_array_equal(b.coverage, a.coverage)


sparse_row = st.dictionaries(st.integers(0, 49), st.integers(1, 6), max_size=8)


@given(st.lists(sparse_row, min_size=1, max_size=40), st.integers(1, 15), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_incremental_equals_batch(rows, context, seed):
    values = np.random.default_rng(seed).uniform(0, 1, 50)
    excluded = frozenset(range(0, 50, 7))
    mask = np.zeros(50, dtype=bool)
    mask[list(excluded)] = True
    a = arc(_matrix(rows), values, mask, context)
    for got, want in zip(a.scores, oracles.batch_arc(rows, values, context, excluded)):
        assert (want is None and np.isnan(got)) or abs(got - want) < 1e-9


@given(st.lists(sparse_row, min_size=1, max_size=25), st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_scores_bounded_by_contributing_words(rows, context, seed):
    values = np.random.default_rng(seed).uniform(0, 1, 50)
    a = arc(_matrix(rows), values, context=context)
    for t, s in enumerate(a.scores):
        if np.isnan(s):
            continue
        present = {p for r in rows[max(0, t - context + 1): t + 1] for p in r}
        lo, hi = min(values[p] for p in present), max(values[p] for p in present)
        assert lo - 1e-12 <= s <= hi + 1e-12


@given(sparse_row.filter(bool), st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_ratio_invariance(row, k, seed):
    values = np.random.default_rng(seed).uniform(0, 1, 50)
    scaled = {p: c * k for p, c in row.items()}
    assert emotion_score(scaled, values) == pytest.approx(emotion_score(row, values), abs=1e-12)


@given(st.lists(sparse_row, min_size=1, max_size=20), st.integers(0, 2**32 - 1))
def test_context_one_is_per_row(rows, seed):
    values = np.random.default_rng(seed).uniform(0, 1, 50)
    a = arc(_matrix(rows), values, context=1)
    for got, row in zip(a.scores, rows):
        want = emotion_score(row, values)
        assert (want is None and np.isnan(got)) or got == want
