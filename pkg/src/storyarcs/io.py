"""Atomic file writes and arc/matrix file formats."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

NA = "NA"


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Write via a temp file in the target directory, then rename over ``path``."""
    return atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def format_float(x: float) -> str:
    if x is None or not np.isfinite(x):
        return NA
    return repr(float(x))


def parse_float(text: str) -> float:
    text = text.strip()
    if text in ("", NA, "nan", "NaN"):
        return float("nan")
    return float(text)


def write_rows(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence], delimiter: str = ",") -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return atomic_write_text(path, buf.getvalue())


def read_rows(path: str | os.PathLike) -> tuple[list[str], list[list[str]]]:
    """Read a delimited file whose delimiter (comma or tab) is sniffed from the header."""
    with open(path, encoding="utf-8", errors="replace", newline="") as fh:
        text = fh.read()
    if not text.strip():
        return [], []
    first = text.splitlines()[0]
    delimiter = "\t" if "\t" in first else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    return [h.strip() for h in rows[0]], [[c.strip() for c in r] for r in rows[1:]]


def write_json(path: str | os.PathLike, obj) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def write_matrix(path: str | os.PathLike, ids: Sequence[str], matrix: np.ndarray, delimiter: str = ",") -> Path:
    """One row per document: ``doc_id, v0, v1, ...``."""
    matrix = np.asarray(matrix, dtype=float)
    header = ["doc_id"] + [f"t{i}" for i in range(matrix.shape[1])]
    return write_rows(path, header, ([i] + [format_float(v) for v in row] for i, row in zip(ids, matrix)), delimiter)
