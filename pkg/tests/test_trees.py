import networkx as nx
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import multigraphs, simple_graphs, to_nx, to_simple_nx
from immersion.coloring import complete_graph
from immersion.errors import Disconnected
from immersion.graph import MultiGraph, SimpleGraph
from immersion.trees import check_tree_packing, is_connected, min_edge_cut, stoer_wagner, tree_packing




@given(simple_graphs(min_n=2, max_n=9))
def test_stoer_wagner_matches_networkx(g):
    h = to_simple_nx(g)
    assume(nx.is_connected(h))
    value, side = min_edge_cut(g)
    expected, _ = nx.stoer_wagner(h)
    assert value == expected
    shore = set(side)
    assert 0 < len(shore) < g.order
    assert sum(1 for _, a, b in g.edges() if (a in shore) != (b in shore)) == value


def test_stoer_wagner_weighted_matrix():
    W = np.array([[0, 3, 1], [3, 0, 1], [1, 1, 0]])
    value, side = stoer_wagner(W)
    assert value == 2
    assert side.tolist() in ([False, False, True], [True, True, False])


def test_min_cut_disconnected():
    with pytest.raises(Disconnected):
        min_edge_cut(SimpleGraph(4, [(0, 1), (2, 3)]))


@given(multigraphs(min_n=2, max_n=7, max_m=24, loops=False), st.integers(1, 3))
def test_tree_packing_outcome_is_certified(g, k):
    p = tree_packing(g, k)
    assert check_tree_packing(g, p)
    if p.found:
        assert len(p.trees) == k
    else:
        # witness partition: fewer than k(r-1) crossing edges, so no packing
        assert p.crossing < k * (len(p.partition) - 1)


@given(multigraphs(min_n=2, max_n=6, max_m=14, loops=False), st.integers(1, 2))
def test_tree_packing_decision_matches_matroid_oracle(g, k):
    """Exact oracle: k disjoint spanning trees exist iff the union of k
    graphic matroids has rank k(n-1); check by brute force over edge
    k-colourings on tiny graphs."""
    import itertools

    n = g.order
    edges = [(a, b) for _, a, b in g.edges()]
    assume(len(edges) <= 10)

    def spanning(es):
        h = nx.MultiGraph()
        h.add_nodes_from(range(n))
        h.add_edges_from(es)
        return len(es) == n - 1 and nx.is_connected(h)

    exists = False
    for colours in itertools.product(range(k + 1), repeat=len(edges)):
        if all(spanning([e for e, c in zip(edges, colours) if c == i]) for i in range(k)):
            exists = True
            break
    assert tree_packing(g, k).found == exists


def test_tree_packing_complete_graph():
    p = tree_packing(complete_graph(6), 3)
    assert p.found and check_tree_packing(complete_graph(6), p)
    p = tree_packing(complete_graph(6), 4)
    assert not p.found  # 4 * 5 = 20 > 15 edges


def test_tree_packing_on_vertex_subset():
    g = complete_graph(5)
    p = tree_packing(g, 2, vertices=[0, 1, 2, 3])
    assert p.found and all(len(t) == 3 for t in p.trees)


def test_is_connected():
    assert is_connected(SimpleGraph(3, [(0, 1), (1, 2)]))
    assert not is_connected(SimpleGraph(3, [(0, 1)]))
    assert is_connected(SimpleGraph(3, [(0, 1)]), [0, 1])
