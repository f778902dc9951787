"""Self-contained verification suites behind `switchgraph verify`.

Each suite returns a list of Check results; the acceptance tests call the
same functions so the CLI report and the test suite cannot drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy import stats as scipy_stats

from .bases import (
    BinaryTreeBasis,
    FullBasis,
    all_min_segment_tilings,
    basis_size,
    cover_btree,
    hamming_divergence,
    j_divergence,
    min_cover_btree_oracle,
    min_cover_full,
    segments_of,
)
from .bounds import (
    SegmentStats,
    bound_theorem1_untuned,
    bound_theorem2,
    optimal_alpha,
)
from .graphs import Graph, cut_size, resistance_weighted_cut
from .harness import ExperimentConfig, Stream, gen_planted_stream, run_experiment
from .oracles import exhaustive_switch_marginal, spanning_trees
from .qbayes import QBayes
from .scs import ScsEngine, scs_eager_reference
from .spine import linearize, position_cut, sample_spine, sample_ust, spine_cut, tree_cut


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


def random_connected_graph(n, extra, rng):
    """Random recursive tree on n vertices plus `extra` distinct chords."""
    edges = set()
    for v in range(2, n + 1):
        w = int(rng.integers(1, v))
        edges.add((w, v))
    budget = n * (n - 1) // 2 - (n - 1)
    want = min(extra, budget)
    while want > 0:
        i = int(rng.integers(1, n + 1))
        j = int(rng.integers(1, n + 1))
        if i == j:
            continue
        e = (min(i, j), max(i, j))
        if e not in edges:
            edges.add(e)
            want -= 1
    return Graph.from_edges(n, sorted(edges))


def random_labeling(n, rng):
    return rng.choice(np.array([-1, 1], dtype=np.int64), size=n)


def planted_position_labelings(n, k, rng, max_phi=6):
    """k piecewise-constant position labelings with 1..max_phi cuts each."""
    labs = []
    for _ in range(k):
        phi = int(rng.integers(1, max_phi + 1))
        cuts = set(rng.choice(np.arange(1, n), size=phi, replace=False).tolist())
        u = np.empty(n, dtype=np.int64)
        sign = int(rng.choice([-1, 1]))
        for p in range(n):
            u[p] = sign
            if p + 1 in cuts:
                sign = -sign
        labs.append(u)
    return labs


def suite_lemma1(trials=1000, seed=20240817):
    """Spine cut <= 2 * tree cut <= 2 * graph cut, per random triple."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(4, 41))
        g = random_connected_graph(n, int(rng.integers(0, 2 * n)), rng)
        u = random_labeling(n, rng)
        tree, spine = sample_spine(g, rng)
        phi_s = spine_cut(spine, u)
        phi_r = tree_cut(tree, u)
        phi_g = cut_size(g, u)
        if not (phi_s <= 2 * phi_r <= 2 * phi_g):
            return [
                Check(
                    "lemma1",
                    False,
                    f"violated on n={n}: spine={phi_s} tree={phi_r} graph={phi_g}",
                )
            ]
        worst = max(worst, phi_s / (2 * phi_r) if phi_r else 0.0)
    return [
        Check(
            "lemma1",
            True,
            f"{trials} random triples; max spine/(2*tree) ratio {worst:.3f}",
        )
    ]


def suite_ust(seed=20240817, draws=16000, mc_pairs=20, mc_draws=500):
    checks = []
    rng = np.random.default_rng(seed)
    k4_edges = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    k4 = Graph.from_edges(4, k4_edges)
    trees = spanning_trees(4, k4_edges)
    index = {t: i for i, t in enumerate(trees)}
    counts = np.zeros(len(trees), dtype=np.int64)
    for _ in range(draws):
        t = sample_ust(k4, rng)
        counts[index[frozenset(t.edges)]] += 1
    chi = scipy_stats.chisquare(counts)
    checks.append(
        Check(
            "ust-k4-uniform",
            len(trees) == 16 and chi.pvalue > 0.001,
            f"16 trees, {draws} draws, chi-square p={chi.pvalue:.4f}",
        )
    )
    worst = 0.0
    ok = True
    for _ in range(mc_pairs):
        n = int(rng.integers(5, 13))
        g = random_connected_graph(n, int(rng.integers(1, 2 * n)), rng)
        u = random_labeling(n, rng)
        cuts = np.array(
            [tree_cut(sample_ust(g, rng), u) for _ in range(mc_draws)], dtype=float
        )
        target = resistance_weighted_cut(g, u)
        se = cuts.std(ddof=1) / math.sqrt(mc_draws)
        dev = abs(cuts.mean() - target)
        if dev > 3.0 * se + 1e-9:
            ok = False
        worst = max(worst, dev / se if se > 0 else 0.0)
    checks.append(
        Check(
            "ust-resistance-cut",
            ok,
            f"{mc_pairs} (graph, labeling) pairs x {mc_draws} draws; "
            f"max |mean - target| = {worst:.2f} standard errors",
        )
    )
    return checks


def suite_prop2(n=8):
    basis = BinaryTreeBasis(n)
    bound_factor = 2 * math.ceil(math.log2(n / 2))
    for bits in product((-1, 1), repeat=n):
        u = np.array(bits, dtype=np.int64)
        phi = position_cut(u)
        cover = cover_btree(u, basis)
        cover.validate()
        oracle = min_cover_btree_oracle(u, basis)
        oracle.validate()
        limit = (phi + 1) * bound_factor
        if len(cover.support) > limit:
            return [Check("prop2", False, f"dyadic cover exceeds bound on u={bits}")]
        if len(oracle.support) > len(cover.support):
            return [Check("prop2", False, f"oracle larger than dyadic cover on u={bits}")]
        for l, r, _ in segments_of(u):
            for tiling in all_min_segment_tilings(basis, l, r):
                depths = [int(basis.depth[basis.unit_index(a, b)]) for a, b in tiling]
                if any(depths.count(d) > 2 for d in set(depths)):
                    return [
                        Check(
                            "prop2",
                            False,
                            f"minimum cover uses >2 specialists at one depth, u={bits}",
                        )
                    ]
    return [
        Check(
            "prop2",
            True,
            f"all {2**n} labelings of n={n}: dyadic covers valid, within "
            f"2(cut+1)*ceil(log2(n/2)), >= minimum; minimum covers use at most "
            "two specialists per depth per cluster",
        )
    ]


def prop3_violations(n):
    """All ordered labeling pairs where J > min(2H, cut'+1).

    The inequality fails exactly when u is constant and u' is its global
    flip: no spine edge is cut in either labeling so H = 0, yet the flipped
    root specialist is new (J = 1).
    """
    labelings = [np.array(b, dtype=np.int64) for b in product((-1, 1), repeat=n)]
    covers = [min_cover_full(u) for u in labelings]
    bad = []
    for u, cu in zip(labelings, covers):
        for w, cw in zip(labelings, covers):
            j = j_divergence(cu, cw)
            if j > min(2 * hamming_divergence(u, w), position_cut(w) + 1):
                bad.append((tuple(u.tolist()), tuple(w.tolist())))
    return bad, len(labelings) ** 2


def suite_prop3(n=6):
    bad, pairs = prop3_violations(n)
    if bad:
        return [
            Check(
                "prop3",
                False,
                f"{len(bad)} of {pairs} pairs violate J <= min(2H, cut'+1): "
                f"{bad} (constant labeling vs its global flip has H=0, J=1)",
            )
        ]
    return [Check("prop3", True, f"J <= min(2H, cut'+1) on all {pairs} pairs, n={n}")]


def _switching_stream(n, k, T, rng, max_phi=6):
    labs = planted_position_labelings(n, k, rng, max_phi=max_phi)
    period = T // k  # trim so the switch period divides the horizon
    return gen_planted_stream(labs, period * k, period, rng), labs


def suite_delayed_eager(configs=50, T=500, seed=20240817):
    rng = np.random.default_rng(seed)
    combos = list(product(("full", "btree"), (8, 16, 64), (0.0, 0.1, 0.5)))
    tested = 0
    i = 0
    while tested < configs:
        kind, n, alpha = combos[i % len(combos)]
        i += 1
        k = 1 if alpha == 0.0 else int(rng.integers(2, 6))
        stream, _ = _switching_stream(n, k, T, rng)
        basis = FullBasis(n) if kind == "full" else BinaryTreeBasis(n)
        engine = ScsEngine(basis, alpha)
        delayed = []
        for v, y in zip(stream.vertices, stream.labels):
            delayed.append(engine.predict(int(v)))
            engine.update(int(v), int(y))
        eager = scs_eager_reference(
            FullBasis(n) if kind == "full" else BinaryTreeBasis(n),
            alpha,
            list(zip(stream.vertices.tolist(), stream.labels.tolist())),
        )
        if delayed != eager:
            first = next(t for t, (a, b) in enumerate(zip(delayed, eager)) if a != b)
            return [
                Check(
                    "delayed-eager",
                    False,
                    f"diverged at trial {first + 1} ({kind}, n={n}, alpha={alpha})",
                )
            ]
        tested += 1
    return [
        Check(
            "delayed-eager",
            True,
            f"{configs} random configs (both bases, n in 8/16/64, alpha in "
            f"0/0.1/0.5, T={T}): prediction sequences identical",
        )
    ]


def suite_qbayes_oracle(streams=200, seed=20240817, tol=1e-9, max_mistakes=5):
    rng = np.random.default_rng(seed)
    thetas = (0.1, 0.25, 0.4)
    alphas = (0.0, 0.1, 0.3)
    worst = 0.0
    for s in range(streams):
        n = int(rng.integers(2, 7))
        theta = thetas[s % 3]
        alpha = alphas[(s // 3) % 3]
        engine = QBayes(n, theta=theta, alpha=alpha)
        fixed = random_labeling(n, rng)  # keeps alpha=0 streams consistent
        history = []
        trials = 0
        while engine.m < max_mistakes and trials < 40:
            v = int(rng.integers(1, n + 1))
            _, marginal = engine.predict(v)
            want = exhaustive_switch_marginal(history, v, theta, alpha, n)
            err = abs(marginal - want)
            worst = max(worst, err)
            if err > tol:
                return [
                    Check(
                        "qbayes-oracle",
                        False,
                        f"marginal off by {err:.2e} (n={n}, theta={theta}, "
                        f"alpha={alpha}, clock={engine.m + 1})",
                    )
                ]
            if alpha == 0.0:
                y = int(fixed[v - 1])
            else:
                y = int(rng.choice([-1, 1]))
            if engine.update(v, y):
                history.append((v, y))
            trials += 1
    return [
        Check(
            "qbayes-oracle",
            True,
            f"{streams} streams (n<=6, <= {max_mistakes} mistakes): max "
            f"|marginal - exhaustive oracle| = {worst:.2e} <= {tol}",
        )
    ]


def suite_nn_reduction(streams=100, T=80, seed=20240817):
    """With alpha = 0 the quasi-Bayes predictor reduces to conservative
    1-nearest-neighbor on the spine: the single surviving hypothesis
    predicts each stored label outright and, between stores, the closer
    neighbor dominates for every theta in (0, 0.5)."""
    from .oracles import NNReference

    rng = np.random.default_rng(seed)
    thetas = (0.1, 0.25, 0.4)
    # n is capped so (1-2*theta)^distance stays above machine epsilon;
    # beyond that the float marginal rounds to exactly 1/2 and the tie
    # rule fires where true 1-NN still resolves the sign
    for s in range(streams):
        n = int(rng.integers(2, 21))
        theta = thetas[s % 3]
        u = random_labeling(n, rng)  # consistent stream: alpha=0 never resets
        engine = QBayes(n, theta=theta, alpha=0.0)
        reference = NNReference(n)
        for t in range(T):
            v = int(rng.integers(1, n + 1))
            y = int(u[v - 1])
            pred, _ = engine.predict(v)
            want = reference.predict(v)
            if pred != want:
                return [
                    Check(
                        "qbayes-nn-reduction",
                        False,
                        f"stream {s} trial {t + 1}: engine {pred} != 1-NN {want} "
                        f"(n={n}, theta={theta})",
                    )
                ]
            engine.update(v, y)
            reference.update(v, y)
    return [
        Check(
            "qbayes-nn-reduction",
            True,
            f"{streams} random streams (n<=20, T={T}, theta in 0.1/0.25/0.4): "
            "alpha=0 predictions equal conservative 1-nearest-neighbor exactly",
        )
    ]


def suite_mistake_bounds(streams=20, n=256, T=2000, seed=20240817):
    rng = np.random.default_rng(seed)
    checks = []
    ok_f = ok_b = ok_q = True
    detail_f = detail_b = detail_q = ""
    for s in range(streams):
        k = 1 if s % 2 == 0 else 4
        stream, labs = _switching_stream(n, k, T, rng)
        lengths = [T // k] * k
        phis = [position_cut(u) for u in labs]
        phi_bar = sum(phis) / k

        for kind, flag in (("full", "f"), ("btree", "b")):
            if kind == "full":
                covers = [min_cover_full(u) for u in labs]
                basis = FullBasis(n)
            else:
                covers = [cover_btree(u) for u in labs]
                basis = BinaryTreeBasis(n)
            segs = list(zip(covers, lengths))
            alpha = optimal_alpha(segs)
            bound = bound_theorem2(segs, alpha, basis_size(kind, n))
            engine = ScsEngine(basis, alpha)
            mistakes = sum(
                o.mistake
                for o in engine.run(
                    zip(stream.vertices.tolist(), stream.labels.tolist())
                )
            )
            if mistakes > bound:
                if flag == "f":
                    ok_f, detail_f = False, f"stream {s}: {mistakes} > {bound:.1f}"
                else:
                    ok_b, detail_b = False, f"stream {s}: {mistakes} > {bound:.1f}"

        theta = min(max(phi_bar / (n - 1), 1e-9), 0.499)
        alpha_q = (k - 1) / (T - 1) if k > 1 else 0.0
        engine = QBayes(n, theta=theta, alpha=alpha_q)
        mistakes = 0
        for v, y in zip(stream.vertices.tolist(), stream.labels.tolist()):
            engine.predict(int(v))
            mistakes += engine.update(int(v), int(y))
        budget = max(mistakes, k + 1)
        alpha_eval = (k - 1) / (budget - 1) if k > 1 else 0.0
        bound = bound_theorem1_untuned(k, phi_bar, budget, n, alpha_eval, theta)
        if mistakes > bound:
            ok_q, detail_q = False, f"stream {s}: {mistakes} > {bound:.1f}"
    checks.append(
        Check("mistake-bound-scs-full", ok_f, detail_f or f"{streams} planted streams")
    )
    checks.append(
        Check("mistake-bound-scs-btree", ok_b, detail_b or f"{streams} planted streams")
    )
    checks.append(
        Check("mistake-bound-qbayes", ok_q, detail_q or f"{streams} planted streams")
    )
    return checks


def suite_prop6(seed=20240817):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(48, 40, rng)
    config = ExperimentConfig(
        graph="file:unused",
        algos=("scs-b", "qbay"),
        ensembles=(1, 3),
        T=200,
        switch_every=100,
        labels="random",
        seed=seed,
        out="unused",
    )
    # run_experiment raises if the majority-vote bound ever fails
    rows, meta = run_experiment(config, g=g, features=None)
    return [
        Check(
            "prop6",
            True,
            "majority-vote mistakes <= 2*(sum member mistakes)/r on every "
            f"(algo, ensemble) pair; finals {meta['final']}",
        )
    ]


SUITES = {
    "lemma1": suite_lemma1,
    "ust": suite_ust,
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "prop6": suite_prop6,
    "delayed-eager": suite_delayed_eager,
    "qbayes-oracle": suite_qbayes_oracle,
    "nn-reduction": suite_nn_reduction,
    "bounds": suite_mistake_bounds,
}


def run_suite(name):
    if name == "all":
        checks = []
        for fn in SUITES.values():
            checks.extend(fn())
        return checks
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
