"""Arc preprocessing (resample, z-normalize, smoothing) and six-shape classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_LENGTH = 100
DEFAULT_SMOOTH_W = 5
DEFAULT_LOWPASS_M = 5
TIE_TOLERANCE = 1e-9


class Shape(str, Enum):
    # declaration order is the tie-break order
    RagsToRiches = "RagsToRiches"
    RichesToRags = "RichesToRags"
    ManInAHole = "ManInAHole"
    Icarus = "Icarus"
    Cinderella = "Cinderella"
    Oedipus = "Oedipus"

    def __str__(self) -> str:
        return self.value

    @property
    def negation(self) -> "Shape":
        return _NEGATION[self]


SHAPES = tuple(Shape)
_NEGATION = {
    Shape.RagsToRiches: Shape.RichesToRags,
    Shape.RichesToRags: Shape.RagsToRiches,
    Shape.ManInAHole: Shape.Icarus,
    Shape.Icarus: Shape.ManInAHole,
    Shape.Cinderella: Shape.Oedipus,
    Shape.Oedipus: Shape.Cinderella,
}


@dataclass(frozen=True)
class NormalizedArc:
    doc: str
    values: np.ndarray

    @property
    def L(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ArcLabel:
    label: Shape
    distances: dict[Shape, float]


def resample(values, L: int = DEFAULT_LENGTH) -> np.ndarray:
    """Linear interpolation at ``L`` evenly spaced positions over ``[0, n-1]``."""
    if L < 2:
        raise ValueError(f"resample length must be >= 2, got {L}")
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or len(x) == 0:
        raise ValueError("resample needs a non-empty 1-D array")
    if np.isnan(x).any():
        raise ValueError("resample input contains undefined points; interpolate gaps first")
    if len(x) == 1:
        return np.full(L, x[0])
    n = len(x)
    if n == L:
        return x.copy()
    return np.interp(np.linspace(0.0, n - 1, L), np.arange(n), x)


def znormalize(values) -> np.ndarray:
    """Zero mean, unit population std; constant input maps to zeros."""
    x = np.asarray(values, dtype=float)
    if len(x) == 0:
        raise ValueError("znormalize needs at least one value")
    centered = x - x.mean()
    std = np.sqrt(np.mean(centered**2))
    # constant within rounding
    if std <= 1e-12 * max(1.0, np.abs(x).max()):
        return np.zeros_like(x)
    return centered / std


def smooth_ma(values, w: int = DEFAULT_SMOOTH_W) -> np.ndarray:
    """Centered moving average of width ``w``.

    Near the edges the window is clipped to the available points, so the
    first point of ``[0, 3, 0]`` with ``w=3`` averages ``[0, 3]``.
    """
    x = np.asarray(values, dtype=float)
    n = len(x)
    if w < 1 or w % 2 == 0:
        raise ValueError(f"moving-average width must be a positive odd integer, got {w}")
    if w > n:
        raise ValueError(f"moving-average width {w} exceeds series length {n}")
    half = w // 2
    csum = np.concatenate([[0.0], np.cumsum(x)])
    i = np.arange(n)
    lo = np.maximum(i - half, 0)
    hi = np.minimum(i + half + 1, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


def lowpass(values, m: int = DEFAULT_LOWPASS_M) -> np.ndarray:
    """Keep the mean term and the ``m - 1`` lowest nonzero frequencies of the DFT."""
    x = np.asarray(values, dtype=float)
    L = len(x)
    if not 1 <= m <= L // 2 + 1:
        raise ValueError(f"lowpass m must be in [1, {L // 2 + 1}] for length {L}, got {m}")
    spectrum = np.fft.rfft(x)
    spectrum[m:] = 0.0
    return np.fft.irfft(spectrum, n=L)


def templates(L: int) -> dict[Shape, np.ndarray]:
    t = np.linspace(0.0, 1.0, L)
    raw = {
        Shape.RagsToRiches: t,
        Shape.RichesToRags: -t,
        Shape.ManInAHole: np.cos(2 * np.pi * t),
        Shape.Icarus: -np.cos(2 * np.pi * t),
        Shape.Cinderella: np.sin(2 * np.pi * t),
        Shape.Oedipus: -np.sin(2 * np.pi * t),
    }
    return {k: znormalize(v) for k, v in raw.items()}


def classify_arc(norm: NormalizedArc | np.ndarray) -> ArcLabel:
    values = np.asarray(norm.values if isinstance(norm, NormalizedArc) else norm, dtype=float)
    if len(values) < 4:
        raise ValueError(f"arc classification needs at least 4 points, got {len(values)}")
    distances = {shape: float(np.linalg.norm(values - tpl)) for shape, tpl in templates(len(values)).items()}
    # distances equal up to rounding count as ties; enumeration order decides
    dmin = min(distances.values())
    tol = TIE_TOLERANCE * max(1.0, dmin)
    best = next(s for s in SHAPES if distances[s] <= dmin + tol)
    return ArcLabel(best, distances)


def prepare(
    values,
    L: int = DEFAULT_LENGTH,
    smooth_w: int | None = DEFAULT_SMOOTH_W,
    lowpass_m: int | None = DEFAULT_LOWPASS_M,
    doc: str = "",
) -> NormalizedArc:
    """Gap-free arc -> smooth_ma -> resample -> lowpass -> znormalize.

    Smoothing steps are skipped when set to ``None`` or when the arc is too
    short for the requested width.
    """
    x = np.asarray(values, dtype=float)
    if smooth_w is not None and smooth_w > 1 and smooth_w <= len(x):
        x = smooth_ma(x, smooth_w)
    x = resample(x, L)
    if lowpass_m is not None:
        x = lowpass(x, min(lowpass_m, L // 2 + 1))
    return NormalizedArc(doc, znormalize(x))
