import math

import numpy as np
import pytest

from switchgraph.oracles import (
    chain_pair_marginal,
    exhaustive_evidence,
    exhaustive_switch_marginal,
)
from switchgraph.qbayes import (
    QBayes,
    chain_conditional,
    labeling_log_prior,
    nn_marginal,
    sequence_log_probability,
)
from switchgraph.scs import IrrecoverableStateError, ProtocolError
from sortedcontainers import SortedDict


def test_chain_conditional_pinned_value():
    # theta = 0.25, distance 2: 1/2 * (1 + 0.5^2) = 0.625
    assert chain_conditional(0.25, 2, True) == pytest.approx(0.625)
    assert chain_conditional(0.25, 2, False) == pytest.approx(0.375)
    with pytest.raises(ValueError):
        chain_conditional(0.6, 1, True)
    with pytest.raises(ValueError):
        chain_conditional(0.25, 0, True)


def test_chain_conditional_matches_exhaustive_chain():
    # against full 2^n enumeration of the Ising-line prior
    for theta in (0.1, 0.25, 0.4):
        for n in (3, 5, 8):
            for p, q in ((1, 2), (1, n), (2, n - 1)):
                if p >= q:
                    continue
                for same in (True, False):
                    assert chain_conditional(theta, q - p, same) == pytest.approx(
                        chain_pair_marginal(theta, n, p, q, same), abs=1e-12
                    )


def test_nn_marginal_cases():
    theta = 0.25
    assert nn_marginal(SortedDict(), 3, theta) == 0.5
    assert nn_marginal(SortedDict({3: 1}), 3, theta) == 1.0
    assert nn_marginal(SortedDict({3: -1}), 3, theta) == 0.0
    # one-sided: nearest neighbor only
    seg = SortedDict({1: 1, 2: 1})
    assert nn_marginal(seg, 4, theta) == pytest.approx(
        chain_conditional(theta, 2, True)
    )
    # two-sided pinned value: neighbors at distance 1 each, labels +1, -1
    seg = SortedDict({2: 1, 4: -1})
    expect = (
        chain_conditional(theta, 1, True)
        * chain_conditional(theta, 1, False)
        / chain_conditional(theta, 2, False)
    )
    assert nn_marginal(seg, 3, theta) == pytest.approx(expect)
    assert expect == pytest.approx(0.5)  # symmetric neighbors cancel


def test_nn_marginal_interior_observations_are_screened():
    # only the nearest observation on each side can matter
    theta = 0.3
    near = SortedDict({2: 1, 6: -1})
    far = SortedDict({1: -1, 2: 1, 6: -1, 8: 1})
    assert nn_marginal(near, 4, theta) == pytest.approx(
        nn_marginal(far, 4, theta), abs=1e-12
    )


def test_first_prediction_is_uninformed():
    q = QBayes(5, 0.25, 0.1)
    pred, marginal = q.predict(3)
    assert (pred, marginal) == (1, 0.5)
    assert q.update(3, 1) is False  # tie predicts +1: correct, no state change
    assert q.m == 0
    assert len(q.segments) == 1


def test_state_grows_only_on_mistakes():
    q = QBayes(5, 0.25, 0.1)
    q.predict(3)
    assert q.update(3, -1) is True  # tie predicted +1 -> mistake
    assert q.m == 1
    assert len(q.segments) == 2  # the old hypothesis plus a fresh reset
    assert q.segments[0][3] == -1
    assert len(q.segments[1]) == 0
    assert len(q.evidence) == 2
    # immediately repeating the vertex cannot be a mistake
    pred, marginal = q.predict(3)
    assert pred == -1 and marginal < 0.5
    assert q.update(3, -1) is False
    assert q.m == 1


def test_marginals_match_exhaustive_oracle_small():
    # direct spot-check on one adversarial stream (the broad randomized
    # sweep lives in the acceptance suite)
    n, theta, alpha = 4, 0.25, 0.2
    q = QBayes(n, theta, alpha)
    history = []
    stream = [(1, 1), (2, -1), (3, -1), (1, -1), (4, 1), (2, 1)]
    for v, y in stream:
        _, marginal = q.predict(v)
        assert marginal == pytest.approx(
            exhaustive_switch_marginal(history, v, theta, alpha, n), abs=1e-12
        )
        if q.update(v, y):
            history.append((v, y))


def test_internal_evidence_matches_exhaustive():
    n, theta, alpha = 5, 0.3, 0.15
    q = QBayes(n, theta, alpha)
    history = []
    rng = np.random.default_rng(8)
    while q.m < 6:
        v = int(rng.integers(1, n + 1))
        y = int(rng.choice([-1, 1]))
        q.predict(v)
        if q.update(v, y):
            history.append((v, y))
    assert q.evidence[-1] == pytest.approx(
        math.log(exhaustive_evidence(history, theta, alpha, n)), abs=1e-9
    )


def test_alpha_zero_matches_single_labeling_posterior():
    # with alpha = 0 there is exactly one reset hypothesis
    n, theta = 6, 0.2
    q = QBayes(n, theta, 0.0)
    for v, y in [(2, 1), (5, -1), (3, 1)]:
        q.predict(v)
        q.update(v, y)
    assert len(q.segments) == q.m + 1
    _, marginal = q.predict(4)
    assert marginal == pytest.approx(
        exhaustive_switch_marginal([(2, 1), (5, -1), (3, 1)], 4, theta, 0.0, n),
        abs=1e-12,
    )
    q.update(4, 1)


def test_alpha_zero_contradiction_is_irrecoverable():
    q = QBayes(3, 0.25, 0.0)
    q.predict(2)
    q.update(2, -1)
    q.predict(2)
    assert q.update(2, 1) is True  # contradicts the only hypothesis
    with pytest.raises(IrrecoverableStateError):
        q.predict(2)


def test_protocol_and_validation():
    q = QBayes(4, 0.25, 0.1)
    with pytest.raises(ProtocolError):
        q.update(1, 1)
    with pytest.raises(IndexError):
        q.predict(5)
    q.predict(2)
    with pytest.raises(ProtocolError):
        q.predict(2)
    with pytest.raises(ValueError):
        q.update(2, 2)
    with pytest.raises(ValueError):
        QBayes(4, 0.5, 0.1)
    with pytest.raises(ValueError):
        QBayes(4, 0.25, 1.0)


def test_labeling_log_prior():
    # n=3, cut 1: log(1/2 * theta * (1-theta))
    theta = 0.25
    assert labeling_log_prior([1, 1, -1], theta) == pytest.approx(
        math.log(0.5 * theta * (1 - theta))
    )
    # the prior sums to 1 over all labelings
    from itertools import product

    total = sum(
        math.exp(labeling_log_prior(list(u), theta))
        for u in product([-1, 1], repeat=4)
    )
    assert total == pytest.approx(1.0)


def test_sequence_log_probability_pinned():
    # one labeling, T = 3, cut 0 on n=3: log(1/2 * 0.75^2) with theta=0.25,
    # plus (T-1) survival factors log(1-alpha)
    theta, alpha = 0.25, 0.1
    got = sequence_log_probability([[1, 1, 1]], 3, theta, alpha)
    assert got == pytest.approx(math.log(0.5 * 0.75**2) + 2 * math.log(0.9))
    assert sequence_log_probability([[1, 1], [-1, -1]], 5, theta, 0.0) == -math.inf
    with pytest.raises(ValueError):
        sequence_log_probability([[1, 1]] * 3, 2, theta, alpha)


def test_sequence_probability_lower_bounds_evidence():
    # fixing one switch pattern can only lose mass relative to the full
    # marginal of the observations that pattern generates
    n, theta, alpha = 4, 0.25, 0.2
    labelings = [[1, 1, -1, -1], [-1, 1, 1, 1]]
    # observations: all of labeling 1 then all of labeling 2 (T = 8)
    history = [(v, labelings[0][v - 1]) for v in range(1, 5)]
    history += [(v, labelings[1][v - 1]) for v in range(1, 5)]
    logseq = sequence_log_probability(labelings, 8, theta, alpha)
    logev = math.log(exhaustive_evidence(history, theta, alpha, n))
    assert logseq <= logev + 1e-12
