"""Deterministic SVG rendering for arcs, cluster means and dendrograms.

Output depends only on the input data: fixed canvas size, fixed number
formatting, no timestamps or random ids, so files can be compared byte for
byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html import escape
from typing import Sequence

import numpy as np

from .cluster import Linkage

WIDTH = 800
HEIGHT = 400
MARGIN = (50, 30, 50, 70)  # top, right, bottom, left
KINDS = ("arc", "cluster_mean", "dendrogram")


@dataclass
class PlotSpec:
    kind: str
    title: str = ""
    x_label: str = "Narrative progression (segment)"
    y_label: str = "Emotion score"
    series: list[np.ndarray] = field(default_factory=list)
    highlight: np.ndarray | None = None  # drawn bold over ``series``
    linkage: Linkage | None = None
    leaf_labels: Sequence[str] | None = None
    truncate: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "dendrogram":
            if self.linkage is None:
                raise ValueError("dendrogram plot needs a linkage")
        else:
            lines = list(self.series) + ([self.highlight] if self.highlight is not None else [])
            if not lines or any(len(s) == 0 for s in lines):
                raise ValueError("nothing to plot: empty series")
            if self.kind == "cluster_mean" and len({len(s) for s in lines}) > 1:
                raise ValueError("cluster-mean series must share one length")


def _f(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    s = f"{x:.3g}"
    return "0" if s == "-0" else s


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(float(round(t / step) * step))
        t += step
    return ticks


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]
        if title:
            self.text(WIDTH / 2, 25, title, size=16, anchor="middle")

    def text(self, x, y, s, size=12, anchor="start", rotate=None):
        tr = f' transform="rotate({rotate} {_f(x)} {_f(y)})"' if rotate is not None else ""
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}"{tr}>{escape(str(s))}</text>'
        )

    def line(self, x1, y1, x2, y2, stroke="black", width=1.0):
        self.parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def polyline(self, pts, stroke="black", width=1.5, opacity=1.0):
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        op = f' stroke-opacity="{opacity}"' if opacity != 1.0 else ""
        self.parts.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"{op}/>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _axes(c: _Canvas, x_range, y_range, x_label, y_label):
    top, right, bottom, left = MARGIN
    x0, x1 = left, WIDTH - right
    y0, y1 = HEIGHT - bottom, top
    (xlo, xhi), (ylo, yhi) = x_range, y_range

    def sx(x):
        return x0 + (x - xlo) / (xhi - xlo) * (x1 - x0) if xhi > xlo else (x0 + x1) / 2

    def sy(y):
        return y0 + (y - ylo) / (yhi - ylo) * (y1 - y0) if yhi > ylo else (y0 + y1) / 2

    c.line(x0, y0, x1, y0)
    c.line(x0, y0, x0, y1)
    for t in _nice_ticks(xlo, xhi):
        c.line(sx(t), y0, sx(t), y0 + 5)
        c.text(sx(t), y0 + 18, _tick_label(t), anchor="middle")
    for t in _nice_ticks(ylo, yhi):
        c.line(x0 - 5, sy(t), x0, sy(t))
        c.text(x0 - 8, sy(t) + 4, _tick_label(t), anchor="end")
    c.text((x0 + x1) / 2, HEIGHT - 12, x_label, anchor="middle")
    c.text(16, (y0 + y1) / 2, y_label, anchor="middle", rotate=-90)
    return sx, sy


def _render_lines(spec: PlotSpec) -> str:
    c = _Canvas(spec.title)
    lines = [np.asarray(s, dtype=float) for s in spec.series]
    hl = None if spec.highlight is None else np.asarray(spec.highlight, dtype=float)
    everything = np.concatenate(lines + ([hl] if hl is not None else []))
    finite = everything[np.isfinite(everything)]
    if finite.size == 0:
        raise ValueError("nothing to plot: no defined points")
    ylo, yhi = float(finite.min()), float(finite.max())
    if ylo == yhi:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    n = max(len(s) for s in lines + ([hl] if hl is not None else []))
    sx, sy = _axes(c, (0, max(n - 1, 1)), (ylo, yhi), spec.x_label, spec.y_label)
    faint = hl is not None
    for s in lines:
        _draw_series(c, s, sx, sy, stroke="#4a78b5" if not faint else "#9ab",
                     width=1.5 if not faint else 0.8, opacity=1.0 if not faint else 0.6)
    if hl is not None:
        _draw_series(c, hl, sx, sy, stroke="#c0392b", width=2.5)
    return c.render()


def _draw_series(c, s, sx, sy, **style):
    # NaN points split the line into runs
    run = []
    for i, v in enumerate(s):
        if np.isfinite(v):
            run.append((sx(i), sy(v)))
        elif run:
            c.polyline(run, **style)
            run = []
    if run:
        c.polyline(run, **style)


def _render_dendrogram(spec: PlotSpec) -> str:
    link = spec.linkage
    n = link.n
    labels = list(spec.leaf_labels) if spec.leaf_labels is not None else [str(i) for i in range(n)]
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for a linkage over {n} items")
    children = {n + s: (m.left, m.right) for s, m in enumerate(link.merges)}
    heights = {n + s: m.height for s, m in enumerate(link.merges)}
    sizes = {n + s: m.size for s, m in enumerate(link.merges)}
    root = 2 * n - 2

    # truncation: only the top ``truncate`` merges are expanded
    visible_min = root - spec.truncate + 1 if spec.truncate else n

    leaves: list[int] = []
    todo = [root]
    while todo:
        node = todo.pop()
        if node < n or node < visible_min:
            leaves.append(node)
        else:
            a, b = children[node]
            todo.extend((b, a))
    c = _Canvas(spec.title or "Ward dendrogram")
    hmax = max(heights.values()) if heights else 1.0
    sx, sy = _axes(c, (0, max(len(leaves) - 1, 1)), (0.0, hmax if hmax > 0 else 1.0),
                   spec.x_label if spec.x_label != PlotSpec.x_label else "Documents",
                   "Ward distance" if spec.y_label == PlotSpec.y_label else spec.y_label)
    xpos = {leaf: float(i) for i, leaf in enumerate(leaves)}
    show_labels = len(leaves) <= 60
    for leaf in leaves:
        name = labels[leaf] if leaf < n else f"({sizes[leaf]})"
        if show_labels:
            c.text(sx(xpos[leaf]), HEIGHT - MARGIN[2] + 32, name, size=9, anchor="middle")

    # post-order: children are placed before their parent
    pos: dict[int, tuple[float, float]] = {
        leaf: (xpos[leaf], heights[leaf] if leaf >= n else 0.0) for leaf in leaves
    }
    todo = [(root, False)] if n > 1 else []
    while todo:
        node, ready = todo.pop()
        if node in pos:
            continue
        a, b = children[node]
        if not ready:
            todo.extend([(node, True), (b, False), (a, False)])
            continue
        (xa, ha), (xb, hb) = pos[a], pos[b]
        h = heights[node]
        c.line(sx(xa), sy(ha), sx(xa), sy(h), stroke="#333")
        c.line(sx(xb), sy(hb), sx(xb), sy(h), stroke="#333")
        c.line(sx(xa), sy(h), sx(xb), sy(h), stroke="#333")
        pos[node] = ((xa + xb) / 2, h)
    return c.render()


def render(spec: PlotSpec) -> str:
    if spec.kind == "dendrogram":
        return _render_dendrogram(spec)
    return _render_lines(spec)


def arc_plot(scores, title: str = "") -> str:
    return render(PlotSpec("arc", title=title, series=[np.asarray(scores, dtype=float)]))


def cluster_mean_plot(members: Sequence[np.ndarray], mean: np.ndarray, title: str = "") -> str:
    return render(PlotSpec("cluster_mean", title=title, series=list(members), highlight=mean,
                           y_label="Normalized emotion score"))


def dendrogram_plot(linkage: Linkage, labels: Sequence[str] | None = None, truncate: int | None = None, title: str = "") -> str:
    return render(PlotSpec("dendrogram", title=title, linkage=linkage, leaf_labels=labels, truncate=truncate))
