"""Closed-form mistake bounds and parameter tunings.

All logarithms here are base 2.  These are pure functions used by the
experiment harness and tests to assert `observed mistakes <= theory`;
nothing in this module runs a predictor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .bases import j_divergence


@dataclass(frozen=True)
class SegmentStats:
    """Switching schedule summary: segment-start trials (1-based, first is
    trial 1), per-segment spine cut sizes, horizon T and spine length n."""

    starts: tuple
    phis: tuple
    T: int
    n: int

    def __post_init__(self):
        if not self.starts or self.starts[0] != 1:
            raise ValueError("segment starts must begin with trial 1")
        if any(b <= a for a, b in zip(self.starts, self.starts[1:])):
            raise ValueError("segment starts must be strictly increasing")
        if len(self.starts) != len(self.phis):
            raise ValueError("one cut size per segment required")
        if self.T < self.starts[-1]:
            raise ValueError("horizon T precedes the last segment start")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def k(self):
        return len(self.starts)

    @property
    def phi_bar(self):
        return sum(self.phis) / len(self.phis)

    def lengths(self):
        bounds = list(self.starts) + [self.T + 1]
        return [b - a for a, b in zip(bounds, bounds[1:])]


def bound_theorem2(segments, alpha, size):
    """Specialist mistake bound for a comparator schedule.

    `segments` is a list of (comparator, trial count) pairs; `size` is the
    basis cardinality |E|.  Returns
    (1/pi_1) log2|E| + sum_t (1/pi_t) log2(1/(1-alpha))
    + sum_switches J * log2(|E|/alpha),
    +inf when alpha is 0 or 1 while switches carry positive J (or alpha=1
    with any trials at all).
    """
    if not segments:
        raise ValueError("need at least one comparator segment")
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    c0, _ = segments[0]
    total = len(c0.support) * math.log2(size)
    inv_pi_sum = sum(len(c.support) * t for c, t in segments)
    j_sum = sum(
        j_divergence(a, b)
        for (a, _), (b, _) in zip(segments, segments[1:])
    )
    if alpha == 1.0:
        return math.inf
    total += inv_pi_sum * math.log2(1.0 / (1.0 - alpha))
    if j_sum > 0:
        if alpha == 0.0:
            return math.inf
        total += j_sum * math.log2(size / alpha)
    return total


def optimal_alpha(segments):
    """Switching rate minimizing bound_theorem2 for this schedule:
    sum J / (sum_t 1/pi_t + sum J); 0 when nothing switches."""
    if not segments:
        raise ValueError("need at least one comparator segment")
    inv_pi_sum = sum(len(c.support) * t for c, t in segments)
    j_sum = sum(
        j_divergence(a, b)
        for (a, _), (b, _) in zip(segments, segments[1:])
    )
    if j_sum == 0:
        return 0.0
    return j_sum / (inv_pi_sum + j_sum)


THETA_FLOOR_NUM = 0.5  # theta floor is 1/(2(n-1)) when phi_bar = 0


def _default_theta(phi_bar, n):
    if n < 2:
        raise ValueError("spine bounds need n >= 2")
    if phi_bar == 0:
        warnings.warn(
            "mean cut size is 0; clamping theta to 1/(2(n-1))", stacklevel=3
        )
        return THETA_FLOOR_NUM / (n - 1)
    return phi_bar / (n - 1)


def bound_theorem1_untuned(k, phi_bar, T, n, alpha, theta):
    """Halving-style switch-reset bound at explicit (alpha, theta):
    (k-1)log2(1/alpha) + (T-k)log2(1/(1-alpha)) + k
    + k*phi_bar*log2(1/theta) + k*(n-1-phi_bar)*log2(1/(1-theta))."""
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    if k < 1 or T < k:
        raise ValueError("need 1 <= k <= T")
    total = float(k)
    if k > 1:
        if alpha == 0.0:
            return math.inf
        total += (k - 1) * math.log2(1.0 / alpha)
    if alpha > 0.0:
        total += (T - k) * math.log2(1.0 / (1.0 - alpha))
    if phi_bar > 0:
        total += k * phi_bar * math.log2(1.0 / theta)
    total += k * (n - 1 - phi_bar) * math.log2(1.0 / (1.0 - theta))
    return total


def bound_theorem1(stats, mb=None, max_iter=50, tol=1e-9):
    """The untuned bound at the self-referential tunings
    alpha = (|K|-1)/(M_B-1), theta = phi_bar/(n-1), with the horizon read
    as the mistake budget M_B itself (conservative clock).

    With `mb` given, evaluates once at that budget; otherwise iterates
    M_B <- f(M_B) to a fixed point (at most `max_iter` steps, tolerance
    `tol`) and returns the final value.
    """
    k = stats.k
    theta = _default_theta(stats.phi_bar, stats.n)

    def evaluate(budget):
        budget = max(budget, float(k + 1))
        alpha = (k - 1) / (budget - 1) if k > 1 else 0.0
        return bound_theorem1_untuned(k, stats.phi_bar, budget, stats.n, alpha, theta)

    if mb is not None:
        return evaluate(float(mb))
    budget = float(k + 1)
    for _ in range(max_iter):
        new = evaluate(budget)
        if abs(new - budget) <= tol:
            return new
        budget = new
    return budget


def scs_alpha_experiment(stats):
    """Oracle switching rate from the ground-truth schedule:
    sum over segments after the first of (phi_k + 1), divided by the sum
    over trials t = 2..T of (phi at trial t + 1)."""
    num = sum(phi + 1 for phi in stats.phis[1:])
    if num == 0:
        return 0.0
    den = 0
    for (start, phi), length in zip(
        zip(stats.starts, stats.phis), stats.lengths()
    ):
        trials = length - 1 if start == 1 else length  # trial 1 excluded
        den += trials * (phi + 1)
    return num / den


def bound_majority(mistakes):
    """Ensemble bound: majority-vote mistakes <= 2 * (sum of member
    mistakes) / r."""
    mistakes = list(mistakes)
    if not mistakes:
        raise ValueError("need at least one member")
    return 2.0 * sum(mistakes) / len(mistakes)
