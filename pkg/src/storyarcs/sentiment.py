"""Sliding-context emotion scoring of segment frequency matrices."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import FreqVector, SegmentMatrix
from .io import format_float, parse_float, read_rows, write_json, write_rows
from .lexicon import ScoreVector, StopMask

log = logging.getLogger(__name__)

DEFAULT_CONTEXT = 10

# A segment whose (masked) accumulated frequencies sum to zero has no score.
# emotion_score returns NO_SIGNAL; arrays carry it as NaN.
NO_SIGNAL = None


@dataclass(frozen=True)
class SentimentArc:
    doc: str
    scores: np.ndarray  # NaN where no signal
    context: int = DEFAULT_CONTEXT
    window_size: int | None = None
    coverage: np.ndarray | None = None
    gap_warning: bool = False

    def __len__(self) -> int:
        return len(self.scores)

    @property
    def segment_index(self) -> np.ndarray:
        return np.arange(len(self.scores))

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.scores)

    def points(self) -> list[tuple[int, float | None]]:
        return [(i, None if np.isnan(s) else float(s)) for i, s in enumerate(self.scores)]


def _as_dense(freq, size: int) -> np.ndarray:
    if isinstance(freq, FreqVector):
        freq = freq.counts
    if isinstance(freq, Mapping):
        out = np.zeros(size, dtype=np.int64)
        for pos, c in freq.items():
            if not 0 <= pos < size:
                raise ValueError(f"frequency position {pos} outside vocabulary of size {size}")
            out[pos] = c
        return out
    arr = np.asarray(freq)
    if arr.shape != (size,):
        raise ValueError(f"frequency vector length {arr.shape} does not match score vector length {size}")
    return arr


def _values(scores: ScoreVector | np.ndarray) -> np.ndarray:
    return np.asarray(scores.values if isinstance(scores, ScoreVector) else scores, dtype=float)


def _keep(mask: StopMask | np.ndarray | None, size: int) -> np.ndarray | None:
    if mask is None:
        return None
    excluded = np.asarray(mask.excluded if isinstance(mask, StopMask) else mask, dtype=bool)
    if excluded.shape != (size,):
        raise ValueError(f"stop mask length {excluded.shape} does not match score vector length {size}")
    return ~excluded


def _score_dense(acc: np.ndarray, values: np.ndarray, keep: np.ndarray | None) -> float | None:
    f = acc if keep is None else np.where(keep, acc, 0)
    total = f.sum()
    if total == 0:
        return NO_SIGNAL
    return float(np.dot(values, f) / total)


def emotion_score(freq, scores: ScoreVector | np.ndarray, mask: StopMask | np.ndarray | None = None) -> float | None:
    """Frequency-weighted mean score of the unmasked words, or NO_SIGNAL."""
    values = _values(scores)
    return _score_dense(_as_dense(freq, len(values)), values, _keep(mask, len(values)))


def arc(
    matrix: SegmentMatrix,
    scores: ScoreVector | np.ndarray,
    mask: StopMask | np.ndarray | None = None,
    context: int = DEFAULT_CONTEXT,
) -> SentimentArc:
    """Score each segment on the running sum of itself and the previous ``context - 1`` rows.

    The accumulator is updated incrementally: add the current row, score,
    then subtract the row that falls out of the window. Counts are integers
    so the running sum never drifts. Early segments use however many rows
    exist so far.
    """
    if context < 1:
        raise ValueError(f"context must be >= 1, got {context}")
    values = _values(scores)
    size = len(values)
    keep = _keep(mask, size)
    acc = np.zeros(size, dtype=np.int64)
    rows = matrix.rows
    out = np.full(len(rows), np.nan)
    for t, row in enumerate(rows):
        _add(acc, row, size, +1)
        s = _score_dense(acc, values, keep)
        if s is not None:
            out[t] = s
        oldest = t - context + 1
        if oldest >= 0:
            _add(acc, rows[oldest], size, -1)
    return SentimentArc(matrix.doc, out, context, matrix.window_size, matrix.coverage)


def _add(acc: np.ndarray, row: FreqVector, size: int, sign: int) -> None:
    if not row.counts:
        return
    pos = np.fromiter(row.counts.keys(), dtype=np.int64, count=len(row.counts))
    if pos.min() < 0 or pos.max() >= size:
        raise ValueError(f"frequency position outside vocabulary of size {size}")
    acc[pos] += sign * np.fromiter(row.counts.values(), dtype=np.int64, count=len(row.counts))


def interpolate_gaps(a: SentimentArc) -> SentimentArc:
    """Fill NO_SIGNAL points linearly between defined neighbours; hold the ends."""
    defined = a.defined
    if not defined.any():
        if len(a):
            log.warning("arc %r has no defined scores; left unchanged", a.doc)
        return replace(a, gap_warning=True)
    if defined.all():
        return a
    idx = np.arange(len(a))
    filled = np.interp(idx, idx[defined], a.scores[defined])
    return replace(a, scores=filled)


ARC_COLUMNS = ("doc_id", "segment_index", "score", "coverage")


def save_arc(a: SentimentArc, path, dimension: str | None = None) -> None:
    """Write ``<path>`` as CSV rows, or JSON with run metadata when the suffix is ``.json``."""
    path = Path(path)
    cov = a.coverage if a.coverage is not None else np.full(len(a), np.nan)
    if path.suffix == ".json":
        write_json(path, {
            "doc_id": a.doc,
            "context": a.context,
            "window_size": a.window_size,
            "dimension": dimension,
            "scores": [None if np.isnan(s) else float(s) for s in a.scores],
            "coverage": [None if np.isnan(c) else float(c) for c in cov],
        })
    else:
        rows = ((a.doc, i, format_float(s), format_float(c)) for i, (s, c) in enumerate(zip(a.scores, cov)))
        write_rows(path, ARC_COLUMNS, rows)


def load_arc(path) -> SentimentArc:
    path = Path(path)
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        scores = np.array([np.nan if s is None else s for s in doc["scores"]], dtype=float)
        cov = np.array([np.nan if c is None else c for c in doc.get("coverage", [None] * len(scores))], dtype=float)
        return SentimentArc(doc["doc_id"], scores, doc.get("context") or DEFAULT_CONTEXT, doc.get("window_size"), cov)
    header, rows = read_rows(path)
    lowered = [h.lower() for h in header]
    if "score" not in lowered:
        raise ValueError(f"{path}: arc file needs a 'score' column")
    si = lowered.index("score")
    di = lowered.index("doc_id") if "doc_id" in lowered else None
    ci = lowered.index("coverage") if "coverage" in lowered else None
    if "segment_index" in lowered:
        ii = lowered.index("segment_index")
        rows = sorted(rows, key=lambda r: int(r[ii]))
    doc = rows[0][di] if rows and di is not None else path.name.split(".")[0]
    scores = np.array([parse_float(r[si]) for r in rows], dtype=float)
    cov = np.array([parse_float(r[ci]) for r in rows], dtype=float) if ci is not None else None
    return SentimentArc(doc, scores, coverage=cov)
