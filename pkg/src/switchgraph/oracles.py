"""Brute-force reference implementations used only for verification.

Everything here trades exponential time for being obviously correct on
tiny instances: exhaustive enumeration over labelings, switch patterns and
spanning trees.  The fast implementations are checked against these in the
verify suites and the test suite.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import numpy as np


def ising_prior(u, theta):
    """Prior of one labeling (tuple over {-1,+1}) on a line:
    1/2 * theta^cut * (1-theta)^(n-1-cut)."""
    cut = sum(1 for a, b in zip(u, u[1:]) if a != b)
    return 0.5 * theta**cut * (1.0 - theta) ** (len(u) - 1 - cut)


@lru_cache(maxsize=None)
def _consistent_mass(obs, theta, n):
    """Total prior mass of labelings agreeing with the (position, label)
    observations; obs is a canonical (sorted, deduplicated) tuple."""
    total = 0.0
    for u in product((-1, 1), repeat=n):
        if all(u[q - 1] == y for q, y in obs):
            total += ising_prior(u, theta)
    return total


def _canon(obs):
    return tuple(sorted(set(obs)))


def exhaustive_switch_marginal(history, q, theta, alpha, n):
    """P(label at position q is +1 | mistake history) at clock t = m+1,
    by enumerating every switch pattern and every labeling per run.

    history is the ordered list of (position, label) mistake observations.
    """
    m = len(history)
    times = list(history) + [None]  # None marks the query slot
    joint = {1: 0.0, -1: 0.0}
    for y in (1, -1):
        times[m] = (q, y)
        for pattern in product((0, 1), repeat=m):
            weight = 1.0
            for b in pattern:
                weight *= alpha if b else 1.0 - alpha
            if weight == 0.0:
                continue
            # pattern[i] = 1 means a reset right before observation i+2
            run = [times[0]]
            for i, b in enumerate(pattern):
                if b:
                    weight *= _consistent_mass(_canon(run), theta, n)
                    run = []
                run.append(times[i + 1])
            weight *= _consistent_mass(_canon(run), theta, n)
            joint[y] += weight
    z = joint[1] + joint[-1]
    if z == 0.0:
        raise ZeroDivisionError("history has zero probability under the model")
    return joint[1] / z


def exhaustive_evidence(history, theta, alpha, n):
    """Marginal probability of the whole mistake history under the
    switch-reset model (same enumeration, no query)."""
    m = len(history)
    if m == 0:
        return 1.0
    total = 0.0
    for pattern in product((0, 1), repeat=m - 1):
        weight = 1.0
        for b in pattern:
            weight *= alpha if b else 1.0 - alpha
        if weight == 0.0:
            continue
        run = [history[0]]
        for i, b in enumerate(pattern):
            if b:
                weight *= _consistent_mass(_canon(run), theta, n)
                run = []
            run.append(history[i + 1])
        weight *= _consistent_mass(_canon(run), theta, n)
        total += weight
    return total


def chain_pair_marginal(theta, n, p, q, same_label):
    """P(u_p == u_q) (or complement) under the line prior by enumeration;
    cross-checks the closed-form two-point conditional."""
    num = 0.0
    den = 0.0
    for u in product((-1, 1), repeat=n):
        w = ising_prior(u, theta)
        den += w
        if (u[p - 1] == u[q - 1]) == same_label:
            num += w
    return num / den


class NNReference:
    """Conservative 1-nearest-neighbor on the line: remembers labels seen
    on its own mistakes, predicts the nearest stored label (ties between
    conflicting equidistant neighbors, or no data, predict +1)."""

    def __init__(self, n):
        self.n = n
        self.seen = {}

    def predict(self, v):
        if not self.seen:
            return 1
        if v in self.seen:
            return self.seen[v]
        best = min(abs(p - v) for p in self.seen)
        votes = {self.seen[p] for p in self.seen if abs(p - v) == best}
        return 1 if len(votes) > 1 else votes.pop()

    def update(self, v, y):
        if self.predict(v) != y:
            self.seen[v] = y
            return True
        return False


def spanning_trees(n, edges):
    """All spanning trees of a small graph, as frozensets of edges."""
    trees = []
    for subset in combinations(edges, n - 1):
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for i, j in subset:
            ri, rj = find(i), find(j)
            if ri == rj:
                ok = False
                break
            parent[rj] = ri
        if ok:
            trees.append(frozenset(subset))
    return trees


def spanning_tree_count(g):
    """Kirchhoff: number of spanning trees = any cofactor of the
    Laplacian."""
    from .graphs import laplacian

    L = laplacian(g)
    return float(np.round(np.linalg.det(L[1:, 1:])))
