"""Cluster-specialist bases over a spine of length n.

A specialist ``(l, r, y)`` predicts label ``y`` on spine positions
``l..r`` and abstains elsewhere.  Two bases are provided:

* ``FullBasis`` -- every interval specialist; ``n**2 + n`` specialists.
* ``BinaryTreeBasis`` -- the dyadic (binary-tree) intervals obtained by
  recursive halving with floor/ceil midpoints; ``4n - 2`` specialists when
  n is a power of two.

Specialists are indexed densely: each interval is a *unit* with id ``k``
and the two labeled specialists of that interval get indices ``2k`` (label
-1) and ``2k + 1`` (label +1).  Both labels of a unit are always active
together, which is what the online engines exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np


class Specialist(NamedTuple):
    l: int
    r: int
    y: int


class Basis:
    kind = None

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n

    @property
    def size(self):
        return 2 * self.n_units

    def index(self, spec):
        return 2 * self.unit_index(spec.l, spec.r) + (1 if spec.y == 1 else 0)

    def specialist(self, index):
        l, r = self.unit_interval(index // 2)
        return Specialist(l, r, 1 if index % 2 else -1)

    def active_set(self, v):
        """Lazily enumerate the specialists active at position v."""
        for k in self.active_units(v):
            l, r = self.unit_interval(int(k))
            yield Specialist(l, r, -1)
            yield Specialist(l, r, 1)

    def _check_pos(self, v):
        if not (1 <= v <= self.n):
            raise IndexError(f"position {v} out of range 1..{self.n}")


class FullBasis(Basis):
    """All interval specialists.  Weight arrays are O(n^2), so construction
    for n > 4096 requires allow_quadratic=True."""

    kind = "full"
    QUADRATIC_GUARD = 4096

    def __init__(self, n, allow_quadratic=False):
        super().__init__(n)
        if n > self.QUADRATIC_GUARD and not allow_quadratic:
            raise ValueError(
                f"FullBasis holds O(n^2) weights; n={n} > {self.QUADRATIC_GUARD} "
                "needs allow_quadratic=True"
            )
        self.n_units = n * (n + 1) // 2
        # unit_index(l, .) base offsets, precomputed for the active-set math
        l = np.arange(1, n + 1, dtype=np.int64)
        self._base = (l - 1) * n - (l - 1) * (l - 2) // 2

    def unit_index(self, l, r):
        if not (1 <= l <= r <= self.n):
            raise IndexError(f"bad interval ({l}, {r})")
        return int(self._base[l - 1]) + (r - l)

    def unit_interval(self, k):
        l = int(np.searchsorted(self._base, k, side="right"))
        return l, k - int(self._base[l - 1]) + l

    def active_units(self, v):
        """Units (l, r) with l <= v <= r, as one index array: for each
        l in 1..v the contiguous rank block of r in v..n."""
        self._check_pos(v)
        n = self.n
        starts = self._base[:v] + (v - np.arange(1, v + 1, dtype=np.int64))
        span = n - v + 1
        return (starts[:, None] + np.arange(span, dtype=np.int64)).ravel()


class BinaryTreeBasis(Basis):
    """Dyadic interval specialists from the floor/ceil halving recursion.

    For n a power of two the intervals form a perfect binary tree; for
    general n sibling intervals may share one position and repeated
    sub-intervals are deduplicated.
    """

    kind = "btree"

    def __init__(self, n):
        super().__init__(n)
        ids = {(1, n): 0}
        lo, hi, left, right, depth = [1], [n], [-1], [-1], [0]
        stack = [0]
        while stack:
            k = stack.pop()
            p, q = lo[k], hi[k]
            if p == q:
                continue
            m1 = (p + q) // 2
            m2 = (p + q + 1) // 2
            for (a, b), is_left in (((p, m1), True), ((m2, q), False)):
                c = ids.get((a, b))
                if c is None:
                    c = len(lo)
                    ids[(a, b)] = c
                    lo.append(a)
                    hi.append(b)
                    left.append(-1)
                    right.append(-1)
                    depth.append(depth[k] + 1)
                    stack.append(c)
                if is_left:
                    left[k] = c
                else:
                    right[k] = c
        self._ids = ids
        self.lo = np.asarray(lo, dtype=np.int64)
        self.hi = np.asarray(hi, dtype=np.int64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.depth = np.asarray(depth, dtype=np.int64)
        self.n_units = len(lo)
        self._dyadic = n & (n - 1) == 0

    def unit_index(self, l, r):
        try:
            return self._ids[(l, r)]
        except KeyError:
            raise IndexError(f"({l}, {r}) is not a basis interval")

    def unit_interval(self, k):
        return int(self.lo[k]), int(self.hi[k])

    def active_units(self, v):
        self._check_pos(v)
        if self._dyadic:
            # children partition exactly: a single root-to-leaf descent
            out = np.empty(int(self.n).bit_length(), dtype=np.int64)
            k = 0
            i = 0
            while True:
                out[i] = k
                i += 1
                if self.lo[k] == self.hi[k]:
                    break
                m1 = (self.lo[k] + self.hi[k]) // 2
                k = self.left[k] if v <= m1 else self.right[k]
            return out[:i]
        out = []
        seen = set()
        stack = [0]
        while stack:
            k = stack.pop()
            if k in seen:
                continue
            seen.add(k)
            out.append(k)
            if self.lo[k] == self.hi[k]:
                continue
            for c in (self.left[k], self.right[k]):
                if self.lo[c] <= v <= self.hi[c]:
                    stack.append(int(c))
        return np.asarray(out, dtype=np.int64)

    def decompose(self, l, r):
        """Canonical disjoint cover of positions l..r by basis intervals
        (segment-tree decomposition); returns unit ids."""
        if not (1 <= l <= r <= self.n):
            raise IndexError(f"bad segment ({l}, {r})")
        out = []
        stack = [(0, l, r)]
        while stack:
            k, a, b = stack.pop()
            p, q = int(self.lo[k]), int(self.hi[k])
            if a <= p and q <= b:
                out.append(k)
                continue
            m1 = (p + q) // 2
            if b <= m1:
                stack.append((int(self.left[k]), a, b))
            elif a > m1:
                stack.append((int(self.right[k]), a, b))
            else:
                stack.append((int(self.left[k]), a, m1))
                stack.append((int(self.right[k]), m1 + 1, b))
        return out


def make_basis(kind, n, **kwargs):
    if kind == "full":
        return FullBasis(n, **kwargs)
    if kind == "btree":
        return BinaryTreeBasis(n)
    raise ValueError(f"unknown basis kind {kind!r}")


@lru_cache(maxsize=None)
def _btree_units(n):
    return BinaryTreeBasis(n).n_units


def basis_size(kind, n):
    """Exact specialist count: n^2 + n for the full basis, twice the number
    of distinct dyadic intervals for the binary-tree basis (4n - 2 when n
    is a power of two)."""
    if kind == "full":
        return n * n + n
    if kind == "btree":
        return 2 * _btree_units(n)
    raise ValueError(f"unknown basis kind {kind!r}")


@dataclass(frozen=True)
class Comparator:
    """Well-formed comparator: a disjoint total cover by specialists, each
    carrying mass 1/|support|."""

    kind: str
    n: int
    support: frozenset

    @property
    def pi(self):
        return 1.0 / len(self.support)

    def validate(self):
        covered = np.zeros(self.n, dtype=np.int64)
        for s in self.support:
            covered[s.l - 1 : s.r] += 1
        if not np.all(covered == 1):
            raise ValueError("support does not disjointly cover 1..n")
        return self


def _check_pos_labeling(u):
    u = np.asarray(u)
    if u.ndim != 1 or u.size < 1 or not np.all(np.abs(u) == 1):
        raise ValueError("labeling must be a 1-d vector over {-1, +1}")
    return u.astype(np.int64)


def segments_of(u_pos):
    """Maximal uniformly-labeled segments of a position-order labeling,
    as (l, r, y) triples."""
    u = _check_pos_labeling(u_pos)
    segs = []
    l = 1
    for p in range(1, u.size):
        if u[p] != u[p - 1]:
            segs.append((l, p, int(u[p - 1])))
            l = p + 1
    segs.append((l, u.size, int(u[-1])))
    return segs


def min_cover_full(u_pos):
    """Minimal-consistent full-basis comparator: one specialist per maximal
    segment, so |support| = cut + 1."""
    u = _check_pos_labeling(u_pos)
    support = frozenset(Specialist(l, r, y) for l, r, y in segments_of(u))
    return Comparator(kind="full", n=u.size, support=support)


def cover_btree(u_pos, basis=None):
    """Binary-tree-basis comparator from the canonical dyadic decomposition
    of each maximal segment; size <= 2*(cut+1)*ceil(log2(n/2)) for n > 2."""
    u = _check_pos_labeling(u_pos)
    if basis is None:
        basis = BinaryTreeBasis(u.size)
    support = set()
    for l, r, y in segments_of(u):
        for k in basis.decompose(l, r):
            a, b = basis.unit_interval(k)
            support.add(Specialist(a, b, y))
    return Comparator(kind="btree", n=u.size, support=frozenset(support))


_ORACLE_MAX_N = 64


def _segment_tilings(basis, l, r):
    """Minimum tiling machinery for one segment: returns (min_size, dp)
    where dp[a] is the min number of basis intervals tiling a..r."""
    starts = {}
    for k in range(basis.n_units):
        a, b = int(basis.lo[k]), int(basis.hi[k])
        if l <= a and b <= r:
            starts.setdefault(a, []).append(b)
    dp = {r + 1: 0}
    for a in range(r, l - 1, -1):
        best = None
        for b in starts.get(a, ()):
            cand = dp.get(b + 1)
            if cand is not None and (best is None or cand + 1 < best):
                best = cand + 1
        dp[a] = best if best is not None else 10**9
    return dp[l], dp, starts


def min_cover_btree_oracle(u_pos, basis=None):
    """Brute-force minimum-cardinality binary-tree cover (test oracle,
    n <= 64): per maximal segment, a DP over dyadic tilings."""
    u = _check_pos_labeling(u_pos)
    if u.size > _ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {_ORACLE_MAX_N}")
    if basis is None:
        basis = BinaryTreeBasis(u.size)
    support = set()
    for l, r, y in segments_of(u):
        _, dp, starts = _segment_tilings(basis, l, r)
        a = l
        while a <= r:
            for b in sorted(starts.get(a, ())):
                if dp[a] == dp[b + 1] + 1:
                    support.add(Specialist(a, b, y))
                    a = b + 1
                    break
            else:
                raise AssertionError("dyadic tiling DP failed")
    return Comparator(kind="btree", n=u.size, support=frozenset(support))


def all_min_segment_tilings(basis, l, r):
    """Every minimum-cardinality dyadic tiling of segment l..r, as lists of
    (a, b) intervals (exhaustive; small n only)."""
    _, dp, starts = _segment_tilings(basis, l, r)

    def expand(a):
        if a > r:
            return [[]]
        outs = []
        for b in starts.get(a, ()):
            if dp[a] == dp[b + 1] + 1:
                for rest in expand(b + 1):
                    outs.append([(a, b)] + rest)
        return outs

    return expand(l)


def hamming_divergence(u_pos, uprime_pos):
    """Hamming-like divergence over spine edges: counts edges that are cut
    in either labeling and touch a flipped endpoint.  Never exceeds twice
    the Hamming distance."""
    u = _check_pos_labeling(u_pos)
    w = _check_pos_labeling(uprime_pos)
    if u.size != w.size:
        raise ValueError("labeling lengths differ")
    cut = (u[:-1] != u[1:]) | (w[:-1] != w[1:])
    flip = (u[:-1] != w[:-1]) | (u[1:] != w[1:])
    return int(np.sum(cut & flip))


def j_divergence(c, cprime):
    """Switch cost: number of specialists in cprime's support missing from
    c's support."""
    if c.kind != cprime.kind or c.n != cprime.n:
        raise ValueError("comparators are over different bases")
    return len(cprime.support - c.support)
