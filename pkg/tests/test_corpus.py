import pytest
from hypothesis import given
from hypothesis import strategies as st

from storyarcs.corpus import (
    FreqVector,
    Segment,
    frequency_vector,
    load_manifest,
    segment,
    segment_matrix,
    stack,
    tokenize,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("The zoo. The ZOO!", ["the", "zoo", "the", "zoo"]),
        ("", []),
        ("Tony's suit—fly!!", ["tony", "s", "suit", "fly"]),
        ("INT. ROOM 101 - NIGHT", ["int", "room", "night"]),
        ("café ÉTÉ", ["café", "été"]),
        ("snake_case x2y", ["snake", "case", "x", "y"]),
        ("İstanbul", ["istanbul"]),
    ],
)
def test_tokenize(text, expected):
    assert list(tokenize(text).words) == expected


def test_tokenize_invalid_utf8():
    assert list(tokenize(b"good\xff\xfebad").words) == ["good", "bad"]


@pytest.mark.parametrize("n, window, n_seg, discarded", [(10, 3, 3, 1), (6, 6, 1, 0), (5, 10, 0, 5)])
def test_segment_counts(n, window, n_seg, discarded):
    words = [f"w{'a' * i}" for i in range(n)]
    seg = segment(words, window)
    assert len(seg.segments) == n_seg
    assert seg.discarded == discarded
    assert all(len(s.words) == window for s in seg.segments)
    assert [s.index for s in seg.segments] == list(range(n_seg))


def test_segment_rejects_zero_window():
    with pytest.raises(ValueError):
        segment(["a"], 0)


def test_frequency_vector_examples(sample_lex):
    zoo = sample_lex.index["zoo"]
    aard = sample_lex.index["aardvark"]
    fv = frequency_vector(Segment("d", 0, ("zoo", "zoo", "xylophoneabsent")), sample_lex)
    assert dict(fv.counts) == {zoo: 2}
    assert fv.coverage == pytest.approx(2 / 3)
    assert dict(frequency_vector(["nothing", "here"], sample_lex).counts) == {}
    assert dict(frequency_vector(["aardvark", "zoo", "aardvark"], sample_lex).counts) == {aard: 2, zoo: 1}


def test_stack():
    vs = [FreqVector({0: 1}, 1, 1, "a") for _ in range(3)]
    assert len(stack(vs, 5)) == 3
    assert len(stack([], 5)) == 0
    with pytest.raises(ValueError):
        stack([FreqVector({}, 0, 0, "a"), FreqVector({}, 0, 0, "b")], 5)


def test_segment_matrix_pipeline(sample_lex):
    m = segment_matrix("zoo aardvark zoo xx zoom", sample_lex, window_size=2, doc="d")
    assert len(m) == 2 and m.discarded == 1
    assert m.doc == "d"


def test_manifest(tmp_path):
    (tmp_path / "a.txt").write_text("x")
    p = tmp_path / "manifest.csv"
    p.write_text("doc_id,title,path\nA,Alpha,a.txt\n")
    (entry,) = load_manifest(p)
    assert entry.doc_id == "A" and entry.title == "Alpha" and entry.path == tmp_path / "a.txt"
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert load_manifest(empty) == []


alpha_text = st.text(alphabet=st.characters(codec="utf-8"), max_size=200)


@given(alpha_text)
def test_tokenize_idempotent(text):
    words = tokenize(text).words
    assert tokenize(" ".join(words)).words == words
    assert all(w.isalpha() for w in words)


@given(st.lists(st.sampled_from(["zoo", "zoom", "aback", "other", "aardvark"]), max_size=60), st.integers(1, 12))
def test_segment_deterministic_and_counts_bounded(words, window):
    from collections import Counter

    from storyarcs.lexicon import Lexicon, LexiconEntry

    lex = Lexicon([LexiconEntry(w, i + 1, 0.5, 0.5, 0.5) for i, w in enumerate(["zoo", "zoom", "aback", "aardvark"])])
    s1, s2 = segment(words, window), segment(words, window)
    assert s1 == s2
    total = Counter()
    for s in s1.segments:
        for pos, c in frequency_vector(s, lex).counts.items():
            total[lex.words[pos]] += c
    occurrences = Counter(words)
    for w, c in total.items():
        assert c <= occurrences[w]
        if s1.discarded == 0:
            assert c == occurrences[w]
