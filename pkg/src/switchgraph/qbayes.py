"""Conservative quasi-Bayes predictor for switching spine labelings.

Generative model: the first labeling is drawn from the Ising-line prior
p(u) = 1/2 * theta^cut * (1-theta)^(n-1-cut); before each subsequent
observation the labeling is resampled from that prior with probability
alpha.  The predictor marginalizes over the last-reset time s with a
dynamic program: per candidate s it keeps an ordered map of the
observations since s, whose 1-nearest-neighbor chain marginals give the
per-segment predictive probabilities in O(log n) each, so a trial costs
O(t log n) where t is the mistake clock.

The predictor is conservative: the clock and all state advance only on
mistake trials.  Ties (marginal exactly 1/2) predict +1.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp
from sortedcontainers import SortedDict

from .scs import IrrecoverableStateError, ProtocolError

NEG_INF = float("-inf")


def _check_theta(theta):
    if not (0.0 < theta < 0.5):
        raise ValueError(f"theta must lie strictly in (0, 0.5), got {theta}")
    return float(theta)


def chain_conditional(theta, distance, same_label):
    """p(u_q = u_p) (or its complement) for spine positions at the given
    distance under the Ising-line prior: 1/2 * (1 +/- (1-2*theta)^d)."""
    _check_theta(theta)
    if distance < 1:
        raise ValueError(f"distance must be >= 1, got {distance}")
    r = (1.0 - 2.0 * theta) ** distance
    return 0.5 * (1.0 + r) if same_label else 0.5 * (1.0 - r)


def nn_marginal(segment, v, theta):
    """Probability that position v is labeled +1 given the observations in
    `segment` (a SortedDict position -> label) under one Ising-line
    labeling.  Only the nearest observed neighbor on each side matters."""
    _check_theta(theta)
    if not segment:
        return 0.5
    keys = segment.keys()
    i = segment.bisect_left(v)
    if i < len(segment) and keys[i] == v:
        return 1.0 if segment[v] == 1 else 0.0
    left = (keys[i - 1], segment[keys[i - 1]]) if i > 0 else None
    right = (keys[i], segment[keys[i]]) if i < len(segment) else None
    if right is None:
        lp, ly = left
        return chain_conditional(theta, v - lp, ly == 1)
    if left is None:
        rp, ry = right
        return chain_conditional(theta, rp - v, ry == 1)
    lp, ly = left
    rp, ry = right
    if ly != ry and v - lp == rp - v:
        # conflicting equidistant neighbors cancel exactly; spell out the
        # 1/2 so rounding in num/den cannot tip the tie rule
        return 0.5
    num = chain_conditional(theta, v - lp, ly == 1) * chain_conditional(
        theta, rp - v, ry == 1
    )
    den = chain_conditional(theta, rp - lp, ly == ry)
    return num / den


class QBayes:
    """Streamed trial protocol over spine positions 1..n: ``predict(v)``
    returns (prediction, marginal of +1); ``update(v, y)`` returns the
    mistake flag."""

    def __init__(self, n, theta, alpha):
        if n < 1:
            raise ValueError("n must be positive")
        _check_theta(theta)
        alpha = float(alpha)
        if not (0.0 <= alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
        self.n = n
        self.theta = float(theta)
        self.alpha = alpha
        self._log_a = math.log(alpha) if alpha > 0.0 else NEG_INF
        self._log_1a = math.log1p(-alpha)
        # per candidate reset time s = 0..m: observations since s, and
        # log p(those observations | one labeling drawn at s)
        self.segments = [SortedDict()]
        self.seg_loglik = [0.0]
        # evidence[j] = log p(first j mistake observations)
        self.evidence = [0.0]
        self.m = 0
        self._pending = None

    def _log_reset_prior(self, t):
        """log-probability of 'last reset at s' for s = 0..t-1, clock t."""
        s = np.arange(t)
        out = self._log_a + (t - s - 1) * self._log_1a
        out[0] = (t - 1) * self._log_1a
        return out

    def _posterior(self, v):
        """Per-reset-time +1 marginals and log-joint weights at clock m+1."""
        t = self.m + 1
        p1 = np.array(
            [nn_marginal(seg, v, self.theta) for seg in self.segments]
        )
        logjoint = (
            np.asarray(self.evidence)
            + np.asarray(self.seg_loglik)
            + self._log_reset_prior(t)
        )
        return p1, logjoint

    def predict(self, v):
        if self._pending is not None:
            raise ProtocolError("predict called twice without an update")
        if not (1 <= v <= self.n):
            raise IndexError(f"position {v} out of range 1..{self.n}")
        p1, logjoint = self._posterior(v)
        logz = logsumexp(logjoint)
        if logz == NEG_INF:
            raise IrrecoverableStateError(
                "all reset hypotheses have zero posterior mass (the observed "
                "stream contradicts every labeling the model supports)"
            )
        w = np.exp(logjoint - logz)
        marginal = float(np.dot(w, p1))
        pred = 1 if marginal >= 0.5 else -1
        self._pending = (v, p1, w, marginal)
        return pred, marginal

    def update(self, v, y):
        if self._pending is None or self._pending[0] != v:
            raise ProtocolError(f"update({v}) without a matching predict")
        _, p1, w, marginal = self._pending
        self._pending = None
        y = int(y)
        if y not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {y}")
        pred = 1 if marginal >= 0.5 else -1
        if pred == y:
            return False
        p_true = p1 if y == 1 else 1.0 - p1
        marg_true = float(np.dot(w, p_true))
        with np.errstate(divide="ignore"):
            self.seg_loglik = list(
                np.asarray(self.seg_loglik) + np.log(p_true)
            )
        self.evidence.append(
            self.evidence[-1] + (math.log(marg_true) if marg_true > 0.0 else NEG_INF)
        )
        for seg in self.segments:
            seg[v] = y
        self.segments.append(SortedDict())
        self.seg_loglik.append(0.0)
        self.m += 1
        return True

    def run(self, stream):
        """Feed (position, label) pairs; returns the prediction list."""
        preds = []
        for v, y in stream:
            pred, _ = self.predict(v)
            preds.append(pred)
            self.update(v, y)
        return preds


def labeling_log_prior(u_pos, theta):
    """Natural-log Ising-line prior of one position-order labeling:
    log(1/2) + cut*log(theta) + (n-1-cut)*log(1-theta)."""
    _check_theta(theta)
    u = np.asarray(u_pos)
    cut = int(np.sum(u[:-1] != u[1:]))
    n = u.size
    return (
        math.log(0.5) + cut * math.log(theta) + (n - 1 - cut) * math.log1p(-theta)
    )


def sequence_log_probability(labelings, T, theta, alpha):
    """Natural log of the probability of one labeling sequence with |K|
    distinct segments over T trials: alpha^(|K|-1) * (1-alpha)^(T-|K|)
    times the product of per-segment priors.  This is a lower bound on the
    marginal probability of the observations the sequence generates (it
    fixes one switch pattern)."""
    k = len(labelings)
    if k < 1:
        raise ValueError("need at least one labeling")
    if T < k:
        raise ValueError(f"T={T} smaller than the number of segments {k}")
    alpha = float(alpha)
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    if alpha == 0.0 and k > 1:
        return NEG_INF
    total = sum(labeling_log_prior(u, theta) for u in labelings)
    if k > 1:
        total += (k - 1) * math.log(alpha)
    total += (T - k) * math.log1p(-alpha)
    return total
