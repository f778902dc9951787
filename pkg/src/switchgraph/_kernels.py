"""Hot inner loops of the specialist engine, in numba and pure-numpy twins.

Weights are stored as *deviations* ``d = w - 1/|E|`` per (unit, label), so
the share update toward the uniform vector is a single multiply by
``(1-alpha)^gap`` and never touches units whose weights are still uniform.
Both backends follow the same evaluation order per array row; backend
selection happens once at import via ``switchgraph._accel``.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, maybe_njit


def pow_int(c, g):
    """c**g for integer g >= 0 by exponentiation-by-squaring (the documented
    evaluation order for delayed share powers)."""
    r = 1.0
    b = c
    while g > 0:
        if g & 1:
            r *= b
        g >>= 1
        if g:
            b *= b
    return r


def _materialize_np(d, idx, gaps, powtab):
    return d[idx] * powtab[gaps][:, None]


def _score_np(dm):
    return float(np.sum(dm[:, 1] - dm[:, 0]))


def _active_sums_np(dm, e, ccol):
    w = dm + e
    return float(np.sum(w)), float(np.sum(w[:, ccol]))


def _write_loss_np(d, idx, dm, e, ccol, ratio):
    w = dm[:, ccol] + e
    d[idx, ccol] = w * ratio - e
    d[idx, 1 - ccol] = -e


def _materialize_nb(d, idx, gaps, powtab):
    dm = np.empty((idx.size, 2))
    for i in range(idx.size):
        f = powtab[gaps[i]]
        dm[i, 0] = d[idx[i], 0] * f
        dm[i, 1] = d[idx[i], 1] * f
    return dm


def _score_nb(dm):
    s = 0.0
    for i in range(dm.shape[0]):
        s += dm[i, 1] - dm[i, 0]
    return s


def _active_sums_nb(dm, e, ccol):
    wa = 0.0
    wy = 0.0
    for i in range(dm.shape[0]):
        wa += (dm[i, 0] + e) + (dm[i, 1] + e)
        wy += dm[i, ccol] + e
    return wa, wy


def _write_loss_nb(d, idx, dm, e, ccol, ratio):
    for i in range(idx.size):
        d[idx[i], ccol] = (dm[i, ccol] + e) * ratio - e
        d[idx[i], 1 - ccol] = -e


if USE_NUMBA:
    materialize = maybe_njit(cache=True)(_materialize_nb)
    score_from = maybe_njit(cache=True)(_score_nb)
    active_sums = maybe_njit(cache=True)(_active_sums_nb)
    write_loss = maybe_njit(cache=True)(_write_loss_nb)
else:
    materialize = _materialize_np
    score_from = _score_np
    active_sums = _active_sums_np
    write_loss = _write_loss_np
