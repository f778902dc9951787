"""Undirected graphs, cut sizes and resistance computations.

Vertices are 1-based (``1..n``) everywhere in the public API; labelings are
length-``n`` vectors over ``{-1, +1}`` indexed so that ``u[i-1]`` is the
label of vertex ``i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class GraphFormatError(ValueError):
    """Raised when an edge-list or feature document fails validation."""


class NumericalError(RuntimeError):
    """Raised when a linear-algebra computation fails to meet tolerance."""


@dataclass(frozen=True)
class Graph:
    """Connected undirected graph with no self-loops or duplicate edges."""

    n: int
    edges: tuple  # of (i, j) pairs, i < j, sorted
    adjacency: tuple  # adjacency[v-1] is a sorted tuple of neighbors of v

    @staticmethod
    def from_edges(n, edges):
        if n < 1:
            raise GraphFormatError("vertex count must be positive")
        seen = set()
        for i, j in edges:
            if i == j:
                raise GraphFormatError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphFormatError(f"vertex id out of range in edge ({i}, {j})")
            seen.add((min(i, j), max(i, j)))
        edge_list = tuple(sorted(seen))
        adj = [[] for _ in range(n)]
        for i, j in edge_list:
            adj[i - 1].append(j)
            adj[j - 1].append(i)
        g = Graph(n=n, edges=edge_list, adjacency=tuple(tuple(sorted(a)) for a in adj))
        if not g.is_connected():
            raise GraphFormatError("graph is disconnected")
        return g

    def is_connected(self):
        if self.n == 1:
            return True
        if not self.edges:
            return False
        seen = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for w in self.adjacency[v - 1]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def degree(self, v):
        return len(self.adjacency[v - 1])


def load_graph(text):
    """Parse an edge-list document: a ``n=<int>`` header line, then one
    ``i j`` pair per line; ``#`` starts a comment."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise GraphFormatError(f"line {lineno}: expected 'n=<int>' header")
            try:
                n = int(line[2:])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad vertex count {line[2:]!r}")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two vertex ids")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id")
        if i == j:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {i}")
        if n is not None and not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"line {lineno}: vertex id out of range")
        edges.append((i, j))
    if n is None:
        raise GraphFormatError("missing 'n=<int>' header")
    return Graph.from_edges(n, edges)


def dump_graph(g):
    lines = [f"n={g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def check_labeling(g, u):
    u = np.asarray(u)
    if u.shape != (g.n,):
        raise ValueError(f"labeling length {u.shape} does not match n={g.n}")
    if not np.all(np.abs(u) == 1):
        raise ValueError("labeling entries must be -1 or +1")
    return u.astype(np.int64)


def cut_size(g, u):
    """Number of edges whose endpoints disagree under labeling u."""
    u = check_labeling(g, u)
    return int(sum(1 for i, j in g.edges if u[i - 1] != u[j - 1]))


def laplacian(g):
    L = np.zeros((g.n, g.n))
    for i, j in g.edges:
        L[i - 1, i - 1] += 1
        L[j - 1, j - 1] += 1
        L[i - 1, j - 1] -= 1
        L[j - 1, i - 1] -= 1
    return L


def laplacian_pinv(g, tol=1e-8):
    """Moore-Penrose pseudo-inverse of the graph Laplacian.

    Dense symmetric eigendecomposition; eigenvalues below 1e-10 * lambda_max
    are treated as zero.  Verifies L+ . 1 = 0 and L L+ = I - 11^T/n to
    `tol` in max norm and raises NumericalError otherwise.
    """
    L = laplacian(g)
    vals, vecs = np.linalg.eigh(L)
    lam_max = vals[-1] if g.n > 1 else 0.0
    inv = np.where(vals > 1e-10 * max(lam_max, 1.0), 1.0 / np.where(vals == 0, 1.0, vals), 0.0)
    pinv = (vecs * inv) @ vecs.T
    pinv = (pinv + pinv.T) / 2.0
    n = g.n
    if np.max(np.abs(pinv @ np.ones(n))) > tol:
        raise NumericalError("Laplacian pseudo-inverse null-space residual exceeds tolerance")
    recon = L @ pinv - (np.eye(n) - np.ones((n, n)) / n)
    if np.max(np.abs(recon)) > tol:
        raise NumericalError("Laplacian pseudo-inverse reconstruction residual exceeds tolerance")
    return pinv


def effective_resistance(g, i, j, lpinv=None):
    """Resistance distance between vertices i and j (unit edge resistances)."""
    if not (1 <= i <= g.n and 1 <= j <= g.n):
        raise IndexError(f"vertex out of range: ({i}, {j})")
    if i == j:
        return 0.0
    if lpinv is None:
        lpinv = laplacian_pinv(g)
    return float(lpinv[i - 1, i - 1] + lpinv[j - 1, j - 1] - 2.0 * lpinv[i - 1, j - 1])


def resistance_weighted_cut(g, u, lpinv=None):
    """Sum of effective resistances over the cut edges of u."""
    u = check_labeling(g, u)
    if lpinv is None:
        lpinv = laplacian_pinv(g)
    total = 0.0
    for i, j in g.edges:
        if u[i - 1] != u[j - 1]:
            total += effective_resistance(g, i, j, lpinv)
    return total


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows of equal-dimension real feature vectors with optional class ids."""

    rows: np.ndarray  # (n, d) float
    classes: np.ndarray | None = None  # (n,) int, or None

    @property
    def n(self):
        return self.rows.shape[0]


def load_features(text, has_class=None):
    """Parse a CSV feature file: one row per point, optionally a final
    integer 'class' column (auto-detected from a header naming it, or
    forced with has_class)."""
    rows = []
    classes = []
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("empty feature file")
    start = 0
    if any(c.isalpha() for c in lines[0]):
        header = [h.strip().lower() for h in lines[0].split(",")]
        if has_class is None:
            has_class = header[-1] == "class"
        start = 1
    if has_class is None:
        has_class = False
    for lineno, line in enumerate(lines[start:], start=start + 1):
        parts = line.split(",")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-numeric feature value")
        if has_class:
            classes.append(int(vals[-1]))
            vals = vals[:-1]
        rows.append(vals)
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise GraphFormatError("feature rows have differing dimensions")
    if len(rows) < 2:
        raise GraphFormatError("need at least 2 feature rows")
    X = np.asarray(rows, dtype=np.float64)
    return FeatureMatrix(rows=X, classes=np.asarray(classes, dtype=np.int64) if has_class else None)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def knn_union_mst_graph(features, k):
    """Union of a symmetrized Euclidean k-nearest-neighbors graph and a
    Euclidean minimum spanning tree.

    Distance ties are broken by smaller vertex index; the MST is Kruskal on
    edges sorted by (distance, index pair), so the construction is fully
    deterministic.
    """
    X = features.rows if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")
    if not (1 <= k < n):
        raise ValueError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    sq = np.sum(X * X, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)

    edges = set()
    idx = np.arange(n)
    for i in range(n):
        order = np.lexsort((idx, d2[i]))
        picked = 0
        for j in order:
            if j == i:
                continue
            edges.add((min(i, j) + 1, max(i, j) + 1))
            picked += 1
            if picked == k:
                break

    all_pairs = sorted(
        ((d2[i, j], i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda t: (t[0], t[1], t[2]),
    )
    uf = _UnionFind(n)
    taken = 0
    for _, i, j in all_pairs:
        if uf.union(i, j):
            edges.add((i + 1, j + 1))
            taken += 1
            if taken == n - 1:
                break

    return Graph.from_edges(n, sorted(edges))
