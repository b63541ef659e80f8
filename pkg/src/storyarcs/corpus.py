"""Tokenizing, fixed-window segmentation and per-segment frequency vectors."""

from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .io import read_rows
from .lexicon import Lexicon, lower

DEFAULT_WINDOW = 500

# maximal runs of Unicode letters (no digits, no underscore)
_LETTERS = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class WordList:
    words: tuple[str, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


@dataclass(frozen=True)
class Segment:
    doc: str
    index: int
    words: tuple[str, ...]


@dataclass(frozen=True)
class Segmentation:
    segments: list[Segment]
    discarded: int


@dataclass(frozen=True)
class FreqVector:
    counts: Mapping[int, int]
    total_in_vocab: int
    n_tokens: int = 0
    doc: str = ""

    @property
    def coverage(self) -> float:
        """Share of the segment's tokens found in the lexicon."""
        if self.n_tokens == 0:
            return 0.0
        return self.total_in_vocab / self.n_tokens

    def dense(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=np.int64)
        for pos, c in self.counts.items():
            out[pos] = c
        return out

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], n_tokens: int | None = None, doc: str = "") -> "FreqVector":
        clean = {int(p): int(c) for p, c in counts.items() if c > 0}
        total = sum(clean.values())
        return cls(clean, total, total if n_tokens is None else n_tokens, doc)


@dataclass(frozen=True)
class SegmentMatrix:
    doc: str
    rows: tuple[FreqVector, ...]
    window_size: int
    discarded: int = 0

    def __len__(self) -> int:
        return len(self.rows)

    def dense(self, size: int) -> np.ndarray:
        out = np.zeros((len(self.rows), size), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for pos, c in row.counts.items():
                out[i, pos] = c
        return out

    @property
    def coverage(self) -> np.ndarray:
        return np.array([r.coverage for r in self.rows], dtype=float)


def tokenize(text: str | bytes, source_id: str = "") -> WordList:
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    words = []
    for run in _LETTERS.findall(lower(text)):
        if run.isalpha():
            words.append(run)
        else:
            # \w also admits non-decimal numerals such as superscripts
            words.extend("".join(c if c.isalpha() else " " for c in run).split())
    return WordList(tuple(words), source_id)


def segment(words: WordList | Sequence[str], window_size: int = DEFAULT_WINDOW) -> Segmentation:
    """Split into consecutive non-overlapping windows; the short tail is dropped."""
    if window_size < 1:
        raise ValueError(f"window_size must be >= 1, got {window_size}")
    doc = words.source_id if isinstance(words, WordList) else ""
    seq = tuple(words)
    n = len(seq) // window_size
    segments = [Segment(doc, i, seq[i * window_size : (i + 1) * window_size]) for i in range(n)]
    return Segmentation(segments, len(seq) - n * window_size)


def frequency_vector(seg: Segment | Sequence[str], lex: Lexicon) -> FreqVector:
    words = seg.words if isinstance(seg, Segment) else tuple(seg)
    index = lex.index
    counts = Counter(index[w] for w in words if w in index)
    return FreqVector(dict(counts), sum(counts.values()), len(words), seg.doc if isinstance(seg, Segment) else "")


def stack(vectors: Sequence[FreqVector], window_size: int = DEFAULT_WINDOW, doc: str | None = None, discarded: int = 0) -> SegmentMatrix:
    docs = {v.doc for v in vectors}
    if len(docs) > 1:
        raise ValueError(f"cannot stack vectors from different documents: {sorted(docs)}")
    if doc is None:
        doc = docs.pop() if docs else ""
    elif docs and docs != {doc}:
        raise ValueError(f"vectors belong to {docs.pop()!r}, not {doc!r}")
    return SegmentMatrix(doc, tuple(vectors), window_size, discarded)


def segment_matrix(text: str, lex: Lexicon, window_size: int = DEFAULT_WINDOW, doc: str = "") -> SegmentMatrix:
    """tokenize -> segment -> frequency_vector -> stack for one document."""
    seg = segment(tokenize(text, doc), window_size)
    return stack([frequency_vector(s, lex) for s in seg.segments], window_size, doc=doc, discarded=seg.discarded)


@dataclass(frozen=True)
class ManifestEntry:
    doc_id: str
    title: str
    path: Path


def load_manifest(path: str | os.PathLike) -> list[ManifestEntry]:
    """Read ``doc_id, title, path`` rows; relative paths resolve against the manifest's directory."""
    path = Path(path)
    header, rows = read_rows(path)
    if not header:
        return []
    lowered = [h.lower() for h in header]
    if {"doc_id", "path"} <= set(lowered):
        id_col, path_col = lowered.index("doc_id"), lowered.index("path")
        title_col = lowered.index("title") if "title" in lowered else None
    else:
        # headerless three-column file
        rows = [header] + rows
        id_col, title_col, path_col = 0, 1, 2
    entries = []
    for lineno, row in enumerate(rows, start=2):
        if len(row) <= max(id_col, path_col):
            raise ValueError(f"{path}:{lineno}: manifest row needs doc_id and path")
        p = Path(row[path_col])
        if not p.is_absolute():
            p = path.parent / p
        title = row[title_col] if title_col is not None and title_col < len(row) else row[id_col]
        entries.append(ManifestEntry(row[id_col], title, p))
    return entries


def read_text(path: str | os.PathLike) -> str:
    with open(path, encoding="utf-8", errors="replace") as fh:
        return fh.read()
