"""VAD lexicon loading, score vectors and stop-word masks.

The default file layout is the ranked table used for LabMT-style scoring::

    Word    Ranking  Arousal  Valence  Dominance
    aaaaaaah  1      0.606    0.479    0.291

Raw NRC-VAD files (word, valence, arousal, dominance; no ranking) load with
``column_map=NRC_VAD_COLUMNS``.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .io import atomic_write_text

log = logging.getLogger(__name__)

DIMENSIONS = ("valence", "arousal", "dominance")
ROLES = ("word", "rank") + DIMENSIONS

# positional layouts, used when the file has no header row
TABLE_COLUMNS: dict[str, int] = {"word": 0, "rank": 1, "arousal": 2, "valence": 3, "dominance": 4}
NRC_VAD_COLUMNS: dict[str, int] = {"word": 0, "valence": 1, "arousal": 2, "dominance": 3}

# header spellings recognised per role (matched case-insensitively)
HEADER_ALIASES = {
    "word": ("word", "term"),
    "rank": ("ranking", "rank"),
    "arousal": ("arousal",),
    "valence": ("valence",),
    "dominance": ("dominance",),
}


class LexiconError(ValueError):
    """Malformed lexicon input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, path: str | os.PathLike | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def lower(text: str) -> str:
    # str.lower applies the full case mapping; U+0130 is the one letter whose
    # full lowercase (i + combining dot) differs from its simple mapping
    return text.replace("\u0130", "i").lower()


def normalize_word(word: str) -> str:
    return lower(word.strip())


def is_word(token: str) -> bool:
    return bool(token) and token.isalpha()


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    rank: int
    arousal: float
    valence: float
    dominance: float

    def __post_init__(self):
        if not is_word(self.word):
            raise LexiconError(f"invalid word {self.word!r}: must be non-empty letters only")
        if self.rank < 1:
            raise LexiconError(f"rank must be a positive integer, got {self.rank}")
        for dim in DIMENSIONS:
            value = getattr(self, dim)
            if not (0.0 <= value <= 1.0):
                raise LexiconError(f"{dim} score {value} for {self.word!r} outside [0, 1]")

    def score(self, dimension: str) -> float:
        return getattr(self, _check_dimension(dimension))


class Lexicon:
    """Immutable ordered word table; vocabulary position = index in rank order."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        ordered = sorted(entries, key=lambda e: e.rank)
        index: dict[str, int] = {}
        ranks: set[int] = set()
        for i, entry in enumerate(ordered):
            word = entry.word.lower()
            if word in index:
                raise LexiconError(f"duplicate word {word!r}")
            if entry.rank in ranks:
                raise LexiconError(f"duplicate rank {entry.rank}")
            index[word] = i
            ranks.add(entry.rank)
        self._entries = tuple(ordered)
        self._index = index
        self._vectors: dict[str, np.ndarray] = {}

    @property
    def entries(self) -> tuple[LexiconEntry, ...]:
        return self._entries

    @property
    def index(self) -> Mapping[str, int]:
        return self._index

    @property
    def words(self) -> list[str]:
        return [e.word for e in self._entries]

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def __getitem__(self, word: str) -> LexiconEntry:
        return self._entries[self._index[word]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"Lexicon({len(self)} words)"

    def position(self, word: str) -> int:
        return self._index[word]

    def column(self, dimension: str) -> np.ndarray:
        dimension = _check_dimension(dimension)
        if dimension not in self._vectors:
            values = np.array([getattr(e, dimension) for e in self._entries], dtype=float)
            values.setflags(write=False)
            self._vectors[dimension] = values
        return self._vectors[dimension]


@dataclass(frozen=True)
class ScoreVector:
    dimension: str
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class StopMask:
    excluded: np.ndarray
    band_delta: float = 0.0
    explicit_list: frozenset[str] = field(default_factory=frozenset)
    dimension: str = "arousal"

    def __len__(self) -> int:
        return len(self.excluded)

    @property
    def n_excluded(self) -> int:
        return int(self.excluded.sum())


def _check_dimension(dimension: str) -> str:
    d = dimension.lower()
    if d not in DIMENSIONS:
        raise ValueError(f"unknown dimension {dimension!r}; expected one of {DIMENSIONS}")
    return d


def _detect_delimiter(line: str) -> str | None:
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    return None


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return line.split()
    return [f.strip() for f in line.split(delimiter)]


def _looks_like_header(fields: Sequence[str]) -> bool:
    # data rows carry at least three numeric scores
    numeric = 0
    for f in fields:
        try:
            float(f)
            numeric += 1
        except ValueError:
            pass
    return numeric < 2


def _resolve_columns(
    header: Sequence[str] | None, column_map: Mapping[str, int | str] | None
) -> dict[str, int]:
    lowered = [h.lower() for h in header] if header is not None else None
    if column_map is None:
        if lowered is None:
            return dict(TABLE_COLUMNS)
        columns = {}
        for role, aliases in HEADER_ALIASES.items():
            for alias in aliases:
                if alias in lowered:
                    columns[role] = lowered.index(alias)
                    break
    else:
        columns = {}
        for role, col in column_map.items():
            if role not in ROLES:
                raise LexiconError(f"unknown column role {role!r}; expected one of {ROLES}")
            if isinstance(col, str):
                if lowered is None or col.lower() not in lowered:
                    raise LexiconError(f"declared column {col!r} not found in header")
                columns[role] = lowered.index(col.lower())
            else:
                columns[role] = int(col)
    missing = [r for r in ("word",) + DIMENSIONS if r not in columns]
    if missing:
        raise LexiconError(f"missing required columns: {', '.join(missing)}", line=1 if header else None)
    return columns


def parse_lexicon(
    lines: Iterable[str],
    column_map: Mapping[str, int | str] | None = None,
    header: bool | None = None,
    skip_nonwords: bool = False,
    source: str | os.PathLike | None = None,
) -> Lexicon:
    """Parse lexicon rows from an iterable of text lines.

    ``header=None`` auto-detects a header row by its column names. Rows
    without a rank column are ranked by file order. ``skip_nonwords`` drops
    entries whose word is not letters-only (multi-word and hyphenated
    entries in upstream NRC-VAD files) instead of failing.
    """
    delimiter: str | None = None
    columns: dict[str, int] | None = None
    entries: list[LexiconEntry] = []
    seen: dict[str, int] = {}
    seen_ranks: dict[int, int] = {}
    first = True
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if first:
            first = False
            delimiter = _detect_delimiter(line)
            fields = _split(line, delimiter)
            has_header = _looks_like_header(fields) if header is None else header
            columns = _resolve_columns(fields if has_header else None, column_map)
            if has_header:
                continue
        assert columns is not None
        fields = _split(line, delimiter)
        arity = max(columns.values()) + 1
        if len(fields) < arity:
            raise LexiconError(f"expected at least {arity} fields, got {len(fields)}", lineno, source)
        word = normalize_word(fields[columns["word"]])
        if not is_word(word):
            if skip_nonwords:
                log.debug("skipping non-word entry %r at line %d", word, lineno)
                continue
            raise LexiconError(f"invalid word {word!r}: must be non-empty letters only", lineno, source)
        scores = {}
        for dim in DIMENSIONS:
            text = fields[columns[dim]]
            try:
                value = float(text)
            except ValueError:
                raise LexiconError(f"non-numeric {dim} score {text!r}", lineno, source) from None
            if not math.isfinite(value) or not (0.0 <= value <= 1.0):
                raise LexiconError(f"{dim} score {text} outside [0, 1]", lineno, source)
            scores[dim] = value
        if "rank" in columns:
            text = fields[columns["rank"]]
            try:
                rank = int(text)
            except ValueError:
                raise LexiconError(f"non-integer rank {text!r}", lineno, source) from None
            if rank < 1:
                raise LexiconError(f"rank must be positive, got {rank}", lineno, source)
        else:
            rank = len(entries) + 1
        if word in seen:
            raise LexiconError(f"duplicate word {word!r} (first seen at line {seen[word]})", lineno, source)
        if rank in seen_ranks:
            raise LexiconError(f"duplicate rank {rank} (first seen at line {seen_ranks[rank]})", lineno, source)
        seen[word] = lineno
        seen_ranks[rank] = lineno
        entries.append(LexiconEntry(word, rank, **scores))
    if not entries:
        raise LexiconError("no entries", path=source)
    return Lexicon(entries)


def load_lexicon(
    path: str | os.PathLike,
    column_map: Mapping[str, int | str] | None = None,
    header: bool | None = None,
    skip_nonwords: bool = False,
) -> Lexicon:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"lexicon file not found: {path}")
    with open(path, encoding="utf-8", errors="replace") as fh:
        return parse_lexicon(fh, column_map, header=header, skip_nonwords=skip_nonwords, source=path)


def format_lexicon(lex: Lexicon, delimiter: str = "\t") -> str:
    rows = [delimiter.join(["Word", "Ranking", "Arousal", "Valence", "Dominance"])]
    for e in lex.entries:
        rows.append(delimiter.join([e.word, str(e.rank), repr(e.arousal), repr(e.valence), repr(e.dominance)]))
    return "\n".join(rows) + "\n"


def dump_lexicon(lex: Lexicon, path: str | os.PathLike, delimiter: str = "\t") -> None:
    atomic_write_text(path, format_lexicon(lex, delimiter))


def score_vector(lex: Lexicon, dimension: str = "arousal") -> ScoreVector:
    if len(lex) == 0:
        raise LexiconError("empty lexicon")
    dimension = _check_dimension(dimension)
    return ScoreVector(dimension, lex.column(dimension))


def stop_mask(
    lex: Lexicon,
    dimension: str = "arousal",
    band_delta: float = 0.0,
    explicit_list: Iterable[str] = (),
) -> StopMask:
    """Exclude listed words plus every word with ``|score - 0.5| < band_delta``."""
    if band_delta < 0:
        raise ValueError(f"band_delta must be >= 0, got {band_delta}")
    dimension = _check_dimension(dimension)
    words = frozenset(normalize_word(w) for w in explicit_list)
    excluded = np.abs(lex.column(dimension) - 0.5) < band_delta
    for w in sorted(words):
        pos = lex.index.get(w)
        if pos is None:
            log.debug("stop word %r not in lexicon; ignored", w)
            continue
        excluded[pos] = True
    excluded.setflags(write=False)
    return StopMask(excluded, float(band_delta), words, dimension)


def load_stop_list(path: str | os.PathLike) -> set[str]:
    """One word per line; blank lines and ``#`` comments are skipped."""
    words = set()
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.add(normalize_word(line))
    return words
