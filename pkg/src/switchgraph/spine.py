"""Uniform spanning trees (Wilson's algorithm) and DFS linearization.

The spine is the line graph over the DFS first-visit order of a uniformly
sampled spanning tree; every predictor in this package operates on spine
positions ``1..n``.

All randomness flows through ``numpy.random.Generator`` (PCG64 via
``default_rng``), so a seed fully determines the tree and the spine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import USE_NUMBA, maybe_njit


class SamplingAborted(RuntimeError):
    """Wilson's walk exceeded the step cap (astronomically unlikely on a
    connected graph; indicates a malformed input)."""


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree of an n-vertex graph, stored as n-1 edges (i < j)."""

    n: int
    edges: tuple

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i - 1].append(j)
            adj[j - 1].append(i)
        return adj


@dataclass(frozen=True)
class Spine:
    """Position <-> vertex bijection; order[p-1] is the vertex at position p."""

    order: np.ndarray  # (n,) vertices 1..n
    pos: np.ndarray  # (n,) pos[v-1] is the position (1..n) of vertex v

    @property
    def n(self):
        return self.order.size

    def to_positions(self, u_by_vertex):
        """Reindex a by-vertex labeling into spine-position order."""
        u = np.asarray(u_by_vertex)
        return u[self.order - 1]


def _identity_error(n, order):
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order is not a permutation of 1..n")


def make_spine(order):
    order = np.asarray(order, dtype=np.int64)
    _identity_error(order.size, order.tolist())
    pos = np.empty_like(order)
    pos[order - 1] = np.arange(1, order.size + 1)
    return Spine(order=order, pos=pos)


def _csr(adjacency):
    indptr = np.zeros(len(adjacency) + 1, dtype=np.int64)
    for v, nb in enumerate(adjacency):
        indptr[v + 1] = indptr[v] + len(nb)
    nbrs = np.empty(indptr[-1], dtype=np.int64)
    for v, nb in enumerate(adjacency):
        nbrs[indptr[v] : indptr[v + 1]] = [w - 1 for w in nb]
    return indptr, nbrs


def _wilson_loop(indptr, nbrs, root, rng, step_cap):
    n = indptr.size - 1
    in_tree = np.zeros(n, dtype=np.bool_)
    nxt = np.full(n, -1, dtype=np.int64)
    in_tree[root] = True
    steps = 0
    for i in range(n):
        u = i
        while not in_tree[u]:
            lo = indptr[u]
            deg = indptr[u + 1] - lo
            w = nbrs[lo + rng.integers(0, deg)]
            nxt[u] = w
            u = w
            steps += 1
            if steps > step_cap:
                return nxt, False
        u = i
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return nxt, True


if USE_NUMBA:
    _wilson_impl = maybe_njit(cache=True)(_wilson_loop)
else:
    _wilson_impl = _wilson_loop


def sample_ust(g, seed, step_cap=10**9):
    """Sample a spanning tree of g uniformly at random (Wilson's
    loop-erased random walk, rooted at vertex 1)."""
    rng = _as_rng(seed)
    if g.n == 1:
        return SpanningTree(n=1, edges=())
    indptr, nbrs = _csr(g.adjacency)
    nxt, ok = _wilson_impl(indptr, nbrs, 0, rng, step_cap)
    if not ok:
        raise SamplingAborted(
            f"Wilson's algorithm exceeded {step_cap} random-walk steps on an "
            f"n={g.n} graph; input is likely malformed"
        )
    edges = []
    for v in range(g.n):
        if nxt[v] >= 0:
            a, b = v + 1, int(nxt[v]) + 1
            edges.append((min(a, b), max(a, b)))
    return SpanningTree(n=g.n, edges=tuple(sorted(edges)))


def linearize(tree, seed):
    """DFS-linearize a spanning tree into a spine.

    The DFS root is chosen uniformly and each vertex's children are visited
    in a uniformly shuffled order; keeping first visits yields the spine
    permutation.
    """
    rng = _as_rng(seed)
    n = tree.n
    if n == 1:
        return make_spine([1])
    adj = tree.adjacency()
    root = int(rng.integers(0, n)) + 1
    order = []
    visited = np.zeros(n, dtype=np.bool_)
    stack = [root]
    while stack:
        v = stack.pop()
        if visited[v - 1]:
            continue
        visited[v - 1] = True
        order.append(v)
        children = [w for w in adj[v - 1] if not visited[w - 1]]
        if len(children) > 1:
            children = [children[i] for i in rng.permutation(len(children))]
        # reversed so the first shuffled child is popped first
        stack.extend(reversed(children))
    return make_spine(order)


def sample_spine(g, seed):
    """Convenience: sample a UST and linearize it with one seed."""
    rng = _as_rng(seed)
    tree = sample_ust(g, rng)
    return tree, linearize(tree, rng)


def tree_cut(tree, u):
    u = np.asarray(u)
    return int(sum(1 for i, j in tree.edges if u[i - 1] != u[j - 1]))


def spine_cut(spine, u):
    """Number of adjacent spine positions whose vertices disagree under u
    (u is indexed by vertex)."""
    u = np.asarray(u)
    if u.shape != (spine.n,):
        raise ValueError(f"labeling length {u.shape} does not match n={spine.n}")
    up = spine.to_positions(u)
    return int(np.sum(up[:-1] != up[1:]))


def position_cut(u_pos):
    """Cut size of a labeling already in spine-position order."""
    u = np.asarray(u_pos)
    return int(np.sum(u[:-1] != u[1:]))
