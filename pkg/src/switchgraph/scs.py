"""Switching cluster specialists: the delayed fixed-share online predictor.

One engine class covers both update styles:

* delayed (the real engine) -- each specialist caches the mistake count
  ``p`` of its last sync and catches up with ``(1-alpha)^(m-p)`` when next
  touched, so per-trial work is proportional to the active set only;
* eager (``eager=True``, the equivalence reference) -- the fixed-share mix
  is applied to every specialist after every mistake.

Both produce the same prediction sequence; the engine is conservative and
only mutates state on mistake trials.  Tie scores predict +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import _kernels as K

TIME_VARYING = "time-varying"


class IrrecoverableStateError(RuntimeError):
    """All active correct-label mass is zero; the loss update cannot
    renormalize.  Happens only when the stream is inconsistent with every
    specialist pattern the weights still support."""


class ProtocolError(RuntimeError):
    """predict/update were not called in strict alternation on one vertex."""


@dataclass(frozen=True)
class TrialOutcome:
    prediction: int
    mistake: bool
    active_size: int  # number of active specialists (2 per active unit)
    elapsed: float  # seconds, predict through update


class ScsEngine:
    """Streamed trial protocol: ``predict(v)`` then ``update(v, y)``, once
    each per trial.

    alpha is a switching rate in [0, 1], or ``TIME_VARYING`` for the
    conservative self-tuning alpha_t = 1/(m+1) (m = mistakes so far, fixed
    at predict time for the whole trial).
    """

    def __init__(self, basis, alpha, eager=False):
        if alpha != TIME_VARYING:
            alpha = float(alpha)
            if not (0.0 <= alpha <= 1.0):
                raise ValueError(f"alpha must be in [0, 1], got {alpha}")
        self.basis = basis
        self.size = basis.size
        self.e = 1.0 / self.size  # uniform weight 1/|E|
        # deviations from uniform, one row per interval unit, columns
        # (label -1, label +1); uniform start => all zero
        self.d = np.zeros((basis.n_units, 2))
        self.p = np.zeros(basis.n_units, dtype=np.int64)
        self.m = 0
        self.eager = bool(eager)
        self._alpha_mode = alpha
        self._alpha = 1.0 if alpha == TIME_VARYING else alpha
        self._pow = np.ones(1)
        self._pending = None

    @property
    def alpha(self):
        return self._alpha

    def _refresh_alpha(self):
        if self._alpha_mode == TIME_VARYING:
            a = 1.0 / (self.m + 1)
            if a != self._alpha:
                self._alpha = a
                self._pow = np.ones(1)

    def _powers(self, upto):
        if self._pow.size <= upto:
            new = np.empty(upto + 1)
            new[: self._pow.size] = self._pow
            c = 1.0 - self._alpha
            for g in range(self._pow.size, upto + 1):
                new[g] = K.pow_int(c, g)
            self._pow = new
        return self._pow

    def weight(self, spec):
        """Current (share-caught-up) weight of one specialist; inspection
        only, state is untouched."""
        k = self.basis.unit_index(spec.l, spec.r)
        g = self.m - int(self.p[k])
        f = self._powers(g)[g]
        return float(self.d[k, 1 if spec.y == 1 else 0] * f + self.e)

    def total_weight(self):
        """Sum of all current weights (diagnostics)."""
        gaps = self.m - self.p
        powtab = self._powers(int(gaps.max()) if gaps.size else 0)
        return float(np.sum(self.d * powtab[gaps][:, None]) + self.e * 2 * self.p.size)

    def predict(self, v):
        if self._pending is not None:
            raise ProtocolError("predict called twice without an update")
        t0 = perf_counter()
        self._refresh_alpha()
        idx = self.basis.active_units(v)
        gaps = self.m - self.p[idx]
        powtab = self._powers(int(gaps.max()) if gaps.size else 0)
        dm = K.materialize(self.d, idx, gaps, powtab)
        pred = 1 if K.score_from(dm) >= 0.0 else -1
        self._pending = (v, idx, dm, pred, t0)
        return pred

    def update(self, v, y):
        if self._pending is None or self._pending[0] != v:
            raise ProtocolError(f"update({v}) without a matching predict")
        _, idx, dm, pred, t0 = self._pending
        self._pending = None
        y = int(y)
        if y not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {y}")
        mistake = pred != y
        if mistake:
            ccol = (y + 1) // 2
            wa, wy = K.active_sums(dm, self.e, ccol)
            if wy <= 0.0:
                raise IrrecoverableStateError(
                    "no active weight remains on the revealed label"
                )
            K.write_loss(self.d, idx, dm, self.e, ccol, wa / wy)
            self.p[idx] = self.m
            self.m += 1
            if self.eager:
                # one-step share for every specialist right away
                self.d *= 1.0 - self._alpha
                self.p[:] = self.m
        return TrialOutcome(
            prediction=pred,
            mistake=mistake,
            active_size=2 * idx.size,
            elapsed=perf_counter() - t0,
        )

    def run(self, stream):
        """Feed (vertex, label) pairs; returns the list of TrialOutcomes."""
        outcomes = []
        for v, y in stream:
            self.predict(v)
            outcomes.append(self.update(v, y))
        return outcomes


def scs_eager_reference(basis, alpha, stream):
    """Prediction sequence of the eager fixed-share reference on a
    (vertex, label) stream."""
    engine = ScsEngine(basis, alpha, eager=True)
    preds = []
    for v, y in stream:
        preds.append(engine.predict(v))
        engine.update(v, y)
    return preds
