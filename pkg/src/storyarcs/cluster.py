"""Ward agglomerative clustering of normalized arcs.

Merge heights use the Euclidean scale of the input: two singletons merge at
their distance, and in general clusters A and B merge at
``sqrt(2 |A| |B| / (|A| + |B|)) * ||mean(A) - mean(B)||``. This is the
convention of ``scipy.cluster.hierarchy.linkage(method="ward")``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .arcshape import NormalizedArc


@dataclass(frozen=True)
class DistanceMatrix:
    n: int
    condensed: np.ndarray

    def square(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        out[iu] = self.condensed
        out.T[iu] = self.condensed
        return out


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Linkage:
    n: int
    merges: tuple[Merge, ...]

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])

    def to_array(self) -> np.ndarray:
        """``(n-1, 4)`` array in the scipy linkage layout."""
        return np.array([[m.left, m.right, m.height, m.size] for m in self.merges], dtype=float).reshape(-1, 4)

    @classmethod
    def from_array(cls, Z) -> "Linkage":
        Z = np.asarray(Z, dtype=float)
        merges = tuple(Merge(int(a), int(b), float(h), int(s)) for a, b, h, s in Z)
        return cls(len(merges) + 1, merges)

    def validate(self) -> None:
        seen: set[int] = set()
        sizes = {i: 1 for i in range(self.n)}
        for step, m in enumerate(self.merges):
            for child in (m.left, m.right):
                if child not in sizes or child in seen:
                    raise ValueError(f"step {step}: cluster {child} unavailable for merging")
                seen.add(child)
            if m.size != sizes[m.left] + sizes[m.right]:
                raise ValueError(f"step {step}: size {m.size} != child sizes")
            sizes[self.n + step] = m.size


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int


def _as_matrix(arcs: Sequence[NormalizedArc] | np.ndarray) -> np.ndarray:
    if isinstance(arcs, np.ndarray):
        X = np.asarray(arcs, dtype=float)
        if X.ndim != 2:
            raise ValueError("expected a 2-D array of arcs")
        return X
    lengths = {len(a.values) if isinstance(a, NormalizedArc) else len(a) for a in arcs}
    if len(lengths) > 1:
        raise ValueError(f"arcs have mixed lengths {sorted(lengths)}; resample first")
    return np.array([a.values if isinstance(a, NormalizedArc) else a for a in arcs], dtype=float)


def distance_matrix(arcs: Sequence[NormalizedArc] | np.ndarray) -> DistanceMatrix:
    X = _as_matrix(arcs)
    n = len(X)
    if n < 2:
        raise ValueError(f"need at least 2 arcs, got {n}")
    parts = [np.sqrt(np.sum((X[i + 1 :] - X[i]) ** 2, axis=1)) for i in range(n - 1)]
    return DistanceMatrix(n, np.concatenate(parts))


def ward_linkage(d: DistanceMatrix) -> Linkage:
    """Greedy Ward agglomeration with the Lance-Williams update on squared distances.

    Every step merges the globally closest pair; exact ties go to the
    smallest ``(min_id, max_id)`` cluster-id pair. Internal clusters get ids
    ``n, n+1, ...`` in merge order.
    """
    n = d.n
    if n < 2:
        raise ValueError(f"need at least 2 items, got {n}")
    D = d.square() ** 2
    np.fill_diagonal(D, np.inf)
    ids = np.arange(n)
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    merges = []
    for step in range(n - 1):
        best = D.min()
        ii, jj = np.nonzero(D == best)
        # slot pairs -> cluster-id pairs, lexicographically smallest wins
        a, b = ids[ii], ids[jj]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        pick = np.lexsort((hi, lo))[0]
        i, j = ii[pick], jj[pick]
        ni, nj = sizes[i], sizes[j]
        dij = D[i, j]
        merges.append(Merge(int(lo[pick]), int(hi[pick]), float(np.sqrt(max(dij, 0.0))), int(ni + nj)))

        others = active.copy()
        others[[i, j]] = False
        nk = sizes[others]
        new = ((ni + nk) * D[i, others] + (nj + nk) * D[j, others] - nk * dij) / (ni + nj + nk)
        new = np.maximum(new, 0.0)
        # merged cluster lives in slot i; slot j retires
        D[i, others] = new
        D[others, i] = new
        D[j, :] = np.inf
        D[:, j] = np.inf
        active[j] = False
        sizes[i] = ni + nj
        ids[i] = n + step
    return Linkage(n, tuple(merges))


def cut(linkage: Linkage, k: int) -> ClusterAssignment:
    """Undo the last ``k - 1`` merges; label clusters 1..k by their smallest member."""
    n = linkage.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step, m in enumerate(linkage.merges[: n - k]):
        node = n + step
        parent[find(m.left)] = node
        parent[find(m.right)] = node
    roots = [find(i) for i in range(n)]
    relabel: dict[int, int] = {}
    labels = np.empty(n, dtype=int)
    for i, r in enumerate(roots):
        if r not in relabel:
            relabel[r] = len(relabel) + 1
        labels[i] = relabel[r]
    return ClusterAssignment(labels, k)


def cluster_means(
    arcs: Sequence[NormalizedArc] | np.ndarray, assignment: ClusterAssignment
) -> dict[int, np.ndarray]:
    X = _as_matrix(arcs)
    labels = np.asarray(assignment.labels)
    if len(labels) != len(X):
        raise ValueError(f"assignment has {len(labels)} labels for {len(X)} arcs")
    return {int(c): X[labels == c].mean(axis=0) for c in np.unique(labels)}


def cluster_members(assignment: ClusterAssignment) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for i, c in enumerate(assignment.labels):
        out.setdefault(int(c), []).append(i)
    return out


DENDROGRAM_FORMAT = "storyarcs-dendrogram"
DENDROGRAM_VERSION = 1


def dendrogram_tree(linkage: Linkage, labels: Sequence[str]) -> dict:
    n = linkage.n
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for a linkage over {n} items")
    nodes: dict[int, dict] = {
        i: {"id": i, "label": str(labels[i]), "height": 0.0, "size": 1} for i in range(n)
    }
    for step, m in enumerate(linkage.merges):
        nodes[n + step] = {
            "id": n + step,
            "height": m.height,
            "size": m.size,
            "children": [nodes.pop(m.left), nodes.pop(m.right)],
        }
    (root,) = nodes.values()
    return root


def dendrogram_export(linkage: Linkage, labels: Sequence[str]) -> str:
    """Nested JSON tree; internal ids encode merge order (``id - n`` = step)."""
    doc = {
        "format": DENDROGRAM_FORMAT,
        "version": DENDROGRAM_VERSION,
        "n": linkage.n,
        "tree": dendrogram_tree(linkage, labels),
    }
    return json.dumps(doc, indent=1)


def dendrogram_import(text: str | Mapping) -> tuple[Linkage, list[str]]:
    doc = json.loads(text) if isinstance(text, str) else text
    if doc.get("format") != DENDROGRAM_FORMAT or doc.get("version") != DENDROGRAM_VERSION:
        raise ValueError("not a storyarcs dendrogram (format/version mismatch)")
    n = int(doc["n"])
    labels: list[str | None] = [None] * n
    merges: dict[int, Merge] = {}
    stack = [doc["tree"]]
    while stack:
        node = stack.pop()
        children = node.get("children")
        if not children:
            labels[node["id"]] = node["label"]
            continue
        left, right = children
        merges[node["id"]] = Merge(left["id"], right["id"], float(node["height"]), int(node["size"]))
        stack.extend(children)
    if sorted(merges) != list(range(n, 2 * n - 1)) or any(lbl is None for lbl in labels):
        raise ValueError("dendrogram tree is incomplete")
    linkage = Linkage(n, tuple(merges[i] for i in range(n, 2 * n - 1)))
    linkage.validate()
    return linkage, labels  # type: ignore[return-value]
