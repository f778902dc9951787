import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchgraph.bases import (
    BinaryTreeBasis,
    Comparator,
    FullBasis,
    Specialist,
    all_min_segment_tilings,
    basis_size,
    cover_btree,
    hamming_divergence,
    j_divergence,
    make_basis,
    min_cover_btree_oracle,
    min_cover_full,
    segments_of,
)

labelings = st.integers(2, 9).flatmap(
    lambda n: st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n)
)


def test_sizes_match_formulas():
    assert basis_size("full", 4) == 20
    assert basis_size("btree", 4) == 14
    assert basis_size("btree", 1) == 2
    for n in (1, 2, 3, 4, 5, 7, 8, 16, 100):
        assert FullBasis(n).size == n * n + n == basis_size("full", n)
        assert BinaryTreeBasis(n).size == basis_size("btree", n)
    for p in (1, 2, 4, 8, 64, 1024):
        assert basis_size("btree", p) == 4 * p - 2


def test_index_specialist_bijection():
    for basis in (FullBasis(7), BinaryTreeBasis(7), BinaryTreeBasis(8)):
        seen = set()
        for idx in range(basis.size):
            spec = basis.specialist(idx)
            assert basis.index(spec) == idx
            assert 1 <= spec.l <= spec.r <= basis.n
            assert spec.y in (-1, 1)
            seen.add(spec)
        assert len(seen) == basis.size


def test_full_basis_enumerates_all_intervals():
    basis = FullBasis(5)
    specs = {basis.specialist(i) for i in range(basis.size)}
    expected = {
        Specialist(l, r, y)
        for l in range(1, 6)
        for r in range(l, 6)
        for y in (-1, 1)
    }
    assert specs == expected


def test_active_sets_pinned_examples():
    b8 = BinaryTreeBasis(8)
    active = {(s.l, s.r) for s in b8.active_set(3)}
    assert active == {(1, 8), (1, 4), (3, 4), (3, 3)}

    f3 = FullBasis(3)
    active = {(s.l, s.r) for s in f3.active_set(2)}
    assert active == {(1, 2), (1, 3), (2, 2), (2, 3)}


def test_active_set_contains_both_labels_and_matches_definition():
    for basis in (FullBasis(6), BinaryTreeBasis(6)):
        for v in range(1, 7):
            active = set(basis.active_set(v))
            for spec in active:
                assert spec.l <= v <= spec.r
                assert Specialist(spec.l, spec.r, -spec.y) in active
            # no containing specialist missed
            all_specs = (basis.specialist(i) for i in range(basis.size))
            assert active == {s for s in all_specs if s.l <= v <= s.r}
        with pytest.raises(IndexError):
            list(basis.active_set(0))
        with pytest.raises(IndexError):
            list(basis.active_set(7))


def test_btree_active_set_size_logarithmic():
    for n in (2, 4, 16, 256, 1024):
        basis = BinaryTreeBasis(n)
        for v in (1, n // 2, n):
            assert len(list(basis.active_set(v))) == 2 * (int(math.log2(n)) + 1)


def test_btree_decompose_pinned_example():
    b8 = BinaryTreeBasis(8)
    intervals = {b8.unit_interval(k) for k in b8.decompose(2, 7)}
    assert intervals == {(2, 2), (3, 4), (5, 6), (7, 7)}


def test_btree_decompose_is_disjoint_cover():
    rng = np.random.default_rng(2)
    for n in (5, 8, 13):
        basis = BinaryTreeBasis(n)
        for _ in range(30):
            l = int(rng.integers(1, n + 1))
            r = int(rng.integers(l, n + 1))
            hits = np.zeros(n, dtype=int)
            for k in basis.decompose(l, r):
                a, b = basis.unit_interval(k)
                hits[a - 1 : b] += 1
            assert np.all(hits[l - 1 : r] == 1)
            assert hits.sum() == r - l + 1


def test_full_basis_quadratic_guard():
    with pytest.raises(ValueError, match="allow_quadratic"):
        FullBasis(4097)
    assert make_basis("full", 4097, allow_quadratic=True).n == 4097
    with pytest.raises(ValueError):
        make_basis("nope", 4)


def test_segments_and_min_cover_full():
    u = [1, 1, -1, -1, -1, 1]
    assert segments_of(u) == [(1, 2, 1), (3, 5, -1), (6, 6, 1)]
    c = min_cover_full(u).validate()
    assert len(c.support) == 3  # cut + 1
    assert c.pi == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        Comparator(kind="full", n=3, support=frozenset({Specialist(1, 1, 1)})).validate()


@settings(max_examples=100, deadline=None)
@given(labelings)
def test_cover_btree_validity_and_bound(u):
    n = len(u)
    c = cover_btree(u).validate()
    # covering specialists carry the labeling's value on their interval
    for s in c.support:
        assert all(u[p - 1] == s.y for p in range(s.l, s.r + 1))
    cut = sum(u[i] != u[i + 1] for i in range(n - 1))
    if n > 2:
        assert len(c.support) <= 2 * (cut + 1) * math.ceil(math.log2(n / 2))
    assert len(c.support) >= len(min_cover_btree_oracle(u).support)


def test_min_oracle_two_intervals_per_depth():
    # minimum dyadic tilings of a contiguous segment use at most two
    # intervals of each depth; check every segment of a 16-leaf tree
    basis = BinaryTreeBasis(16)
    for l in range(1, 17):
        for r in range(l, 17):
            for tiling in all_min_segment_tilings(basis, l, r):
                per_depth = {}
                for a, b in tiling:
                    d = int(basis.depth[basis.unit_index(a, b)])
                    per_depth[d] = per_depth.get(d, 0) + 1
                assert max(per_depth.values()) <= 2


def test_hamming_divergence_pinned_examples():
    assert hamming_divergence([1, 1, -1, -1], [1, -1, -1, -1]) == 2
    assert hamming_divergence([1, 1, 1, 1], [1, 1, 1, -1]) == 1
    assert hamming_divergence([1, 1], [-1, -1]) == 0
    with pytest.raises(ValueError):
        hamming_divergence([1, 1], [1, 1, -1])


@settings(max_examples=100, deadline=None)
@given(labelings, st.randoms(use_true_random=False))
def test_hamming_divergence_bounds(u, rnd):
    w = [x if rnd.random() < 0.7 else -x for x in u]
    h = hamming_divergence(u, w)
    assert h == hamming_divergence(w, u)
    assert h <= 2 * sum(a != b for a, b in zip(u, w))
    if u == w:
        assert h == 0


def test_j_divergence_counts_new_support():
    c1 = min_cover_full([1, 1, -1, -1])
    c2 = min_cover_full([1, -1, -1, -1])
    assert j_divergence(c1, c2) == 2
    assert j_divergence(c1, c1) == 0
    with pytest.raises(ValueError):
        j_divergence(c1, cover_btree([1, -1, -1, -1]))


def exhaustive_divergence_pairs(n):
    basis = None
    for bits in product([-1, 1], repeat=n):
        yield np.array(bits)


def test_switch_cost_bound_holds_except_global_flip():
    # for every ordered pair of length-6 labelings the full-basis switch
    # cost obeys J <= min(2H, cut(u') + 1), except the two pairs where a
    # constant labeling flips globally: there H = 0 (no edge is cut in
    # either labeling) yet the single covering specialist changes, J = 1
    n = 6
    violations = []
    for u in product([-1, 1], repeat=n):
        cu = min_cover_full(list(u))
        for w in product([-1, 1], repeat=n):
            cw = min_cover_full(list(w))
            j = j_divergence(cu, cw)
            h = hamming_divergence(list(u), list(w))
            cut = sum(w[i] != w[i + 1] for i in range(n - 1))
            if j > min(2 * h, cut + 1):
                violations.append((u, w, j, h))
    assert violations == [
        ((-1,) * n, (1,) * n, 1, 0),
        ((1,) * n, (-1,) * n, 1, 0),
    ]
