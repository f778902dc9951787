import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchgraph.graphs import (
    FeatureMatrix,
    Graph,
    GraphFormatError,
    cut_size,
    dump_graph,
    effective_resistance,
    knn_union_mst_graph,
    laplacian,
    laplacian_pinv,
    load_features,
    load_graph,
    resistance_weighted_cut,
)
from switchgraph.verify import random_connected_graph


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def test_load_graph_roundtrip():
    g = load_graph("n=4\n1 2\n2 3 # chord\n3 4\n1 4\n")
    assert g.n == 4
    assert g.edges == ((1, 2), (1, 4), (2, 3), (3, 4))
    assert load_graph(dump_graph(g)).edges == g.edges


def test_load_graph_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="header"):
        load_graph("1 2\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        load_graph("n=3\n1 2 3\n")
    with pytest.raises(GraphFormatError, match="line 3"):
        load_graph("n=3\n1 2\n2 7\n")
    with pytest.raises(GraphFormatError, match="self-loop"):
        load_graph("n=3\n1 1\n")
    with pytest.raises(GraphFormatError, match="disconnected"):
        load_graph("n=4\n1 2\n3 4\n")


def test_duplicate_edges_collapse():
    g = Graph.from_edges(3, [(1, 2), (2, 1), (2, 3)])
    assert g.edges == ((1, 2), (2, 3))
    assert g.degree(2) == 2


def test_cut_size_basics():
    g = path(4)
    assert cut_size(g, [1, 1, 1, 1]) == 0
    assert cut_size(g, [1, -1, 1, -1]) == 3
    assert cut_size(g, [1, 1, -1, -1]) == 1
    with pytest.raises(ValueError):
        cut_size(g, [1, 1, 0, 1])


def test_laplacian_pinv_contracts():
    g = load_graph("n=4\n1 2\n2 3\n3 4\n1 4\n1 3\n")
    L = laplacian(g)
    P = laplacian_pinv(g)
    n = g.n
    assert np.allclose(P @ np.ones(n), 0.0, atol=1e-10)
    assert np.allclose(L @ P, np.eye(n) - np.ones((n, n)) / n, atol=1e-10)
    assert np.allclose(P, P.T)


def test_effective_resistance_known_values():
    # two parallel 2-edge paths between 1 and 3: resistance 1
    square = load_graph("n=4\n1 2\n2 3\n3 4\n1 4\n")
    assert effective_resistance(square, 1, 3) == pytest.approx(1.0)
    # series: path of length 3
    assert effective_resistance(path(4), 1, 4) == pytest.approx(3.0)
    assert effective_resistance(path(4), 2, 2) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_effective_resistance_is_a_metric(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    g = random_connected_graph(n, int(rng.integers(0, n)), rng)
    P = laplacian_pinv(g)
    i, j, k = (int(x) + 1 for x in rng.integers(0, n, size=3))
    rij = effective_resistance(g, i, j, P)
    rik = effective_resistance(g, i, k, P)
    rkj = effective_resistance(g, k, j, P)
    assert rij >= 0
    assert rij == pytest.approx(effective_resistance(g, j, i, P))
    assert rij <= rik + rkj + 1e-9


def test_resistance_weighted_cut_tree_equals_cut():
    # on a tree every edge has resistance exactly 1
    g = path(6)
    u = np.array([1, 1, -1, -1, 1, 1])
    assert resistance_weighted_cut(g, u) == pytest.approx(cut_size(g, u))


def test_resistance_weighted_cut_leq_cut():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(4, 12))
        g = random_connected_graph(n, int(rng.integers(0, 2 * n)), rng)
        u = rng.choice(np.array([-1, 1]), size=n)
        assert resistance_weighted_cut(g, u) <= cut_size(g, u) + 1e-9


def test_load_features_with_class_column():
    fm = load_features("f0,f1,class\n0.0,1.0,3\n1.0,0.0,7\n")
    assert fm.rows.shape == (2, 2)
    assert fm.classes.tolist() == [3, 7]
    plain = load_features("0.0,1.0\n1.0,0.0\n")
    assert plain.classes is None
    with pytest.raises(GraphFormatError):
        load_features("0.0,1.0\n1.0\n")
    with pytest.raises(GraphFormatError):
        load_features("")


def test_knn_union_mst_unit_square():
    # corners of the unit square, k=1: ties broken toward the smaller
    # index give 1->2, 2->1, 3->1, 4->2; Kruskal then adds nothing new
    # except what already spans -- the result is the tree {12, 13, 24}
    pts = FeatureMatrix(rows=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    g = knn_union_mst_graph(pts, 1)
    assert g.edges == ((1, 2), (1, 3), (2, 4))


def test_knn_union_mst_is_connected_and_deterministic():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    g1 = knn_union_mst_graph(FeatureMatrix(rows=X), 3)
    g2 = knn_union_mst_graph(FeatureMatrix(rows=X), 3)
    assert g1.edges == g2.edges
    assert g1.is_connected()
    # every vertex has at least k neighbors in the union
    assert min(g1.degree(v) for v in range(1, 41)) >= 3
    with pytest.raises(ValueError):
        knn_union_mst_graph(FeatureMatrix(rows=X), 40)
