"""Switching graph perceptron baseline: a kernel perceptron on the graph
kernel K = Lpinv + R * 11^T (R = max diagonal of Lpinv), with projection
onto the gamma-ball in the kernel norm after every update.

The hypothesis is kept as coefficients c with w = K c, so the kernel norm
||w||_K^2 = c^T K c is maintained incrementally and projection is a single
rescale -- no K^{-1} solves in the trial loop.  Conservative: non-mistake
trials leave the state untouched.  Ties predict +1.  Runs on the original
graph (not a spine).
"""

from __future__ import annotations

import numpy as np

from .graphs import laplacian_pinv
from .scs import ProtocolError

MAX_N = 4096  # dense K is n^2 doubles: 4096^2 * 8 B = 128 MiB


def sgp_kernel(g, lpinv=None):
    """Graph kernel K = Lpinv + R * 11^T with R = max_i Lpinv_ii;
    symmetric positive definite for connected g."""
    if g.n > MAX_N:
        raise ValueError(
            f"dense kernel needs {g.n}^2 * 8 bytes; n capped at {MAX_N}"
        )
    if lpinv is None:
        lpinv = laplacian_pinv(g)
    r = float(np.max(np.diag(lpinv)))
    return lpinv + r


def sgp_gamma_oracle(labelings, kernel):
    """Oracle radius: max over labelings u of ||u||_K = sqrt(u^T K^{-1} u)."""
    labelings = list(labelings)
    if not labelings:
        raise ValueError("need at least one labeling")
    best = 0.0
    for u in labelings:
        u = np.asarray(u, dtype=np.float64)
        q = float(u @ np.linalg.solve(kernel, u))
        best = max(best, np.sqrt(max(q, 0.0)))
    return best


class SgpEngine:
    """Streamed trial protocol over graph vertices 1..n."""

    def __init__(self, kernel, gamma):
        kernel = np.asarray(kernel, dtype=np.float64)
        if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
            raise ValueError("kernel must be square")
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        self.kernel = kernel
        self.gamma = float(gamma)
        n = kernel.shape[0]
        self.c = np.zeros(n)
        self.w = np.zeros(n)
        self.normsq = 0.0  # c^T K c, maintained incrementally
        self._pending = None

    @property
    def n(self):
        return self.kernel.shape[0]

    def predict(self, v):
        if self._pending is not None:
            raise ProtocolError("predict called twice without an update")
        if not (1 <= v <= self.n):
            raise IndexError(f"vertex {v} out of range 1..{self.n}")
        pred = 1 if self.w[v - 1] >= 0.0 else -1
        self._pending = (v, pred)
        return pred

    def update(self, v, y):
        if self._pending is None or self._pending[0] != v:
            raise ProtocolError(f"update({v}) without a matching predict")
        _, pred = self._pending
        self._pending = None
        y = int(y)
        if y not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {y}")
        if pred == y:
            return False
        i = v - 1
        kvv = self.kernel[i, i]
        delta = y / kvv
        # c_i += delta shifts c^T K c by 2*delta*(Kc)_i + delta^2 * K_ii
        self.normsq += 2.0 * delta * self.w[i] + delta * delta * kvv
        self.c[i] += delta
        self.w += delta * self.kernel[:, i]
        if self.normsq > self.gamma * self.gamma:
            scale = self.gamma / np.sqrt(self.normsq)
            self.c *= scale
            self.w *= scale
            self.normsq *= scale * scale
        return True

    def norm(self):
        """Current ||w||_K from the incremental accumulator."""
        return float(np.sqrt(max(self.normsq, 0.0)))

    def norm_recomputed(self):
        """||w||_K recomputed from scratch (drift check)."""
        return float(np.sqrt(max(self.c @ self.kernel @ self.c, 0.0)))
