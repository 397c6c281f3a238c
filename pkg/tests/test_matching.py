import networkx as nx
import numpy as np
import pytest
from hypothesis import assume, given

from conftest import simple_graphs, to_simple_nx
from immersion.constructions import cycle_graph
from immersion.coloring import complete_graph
from immersion.errors import HasPerfectMatching, NoPerfectMatching
from immersion.graph import SimpleGraph
from immersion.matching import (
    adjacency_lists,
    exchange_stable_perfect_matching,
    gallai_edmonds,
    has_perfect_matching,
    improving_exchange_exists,
    is_hypomatchable,
    maximum_matching,
)


def nu(h: nx.Graph) -> int:
    return len(nx.max_weight_matching(h, maxcardinality=True))


@given(simple_graphs(max_n=10))
def test_maximum_matching_size_matches_networkx(g):
    m = maximum_matching(g)
    ends = [v for e in m for v in g.ends(e)]
    assert len(ends) == len(set(ends))
    assert len(m) == nu(to_simple_nx(g))


@given(simple_graphs(min_n=1, max_n=9))
def test_hypomatchable_by_definition(g):
    h = to_simple_nx(g)
    expected = g.order % 2 == 1 and all(
        2 * nu(h.subgraph(set(h) - {v})) == g.order - 1 for v in h
    )
    assert is_hypomatchable(g) == expected


def test_odd_cycles_and_petersen(petersen):
    assert is_hypomatchable(cycle_graph(5))
    assert not is_hypomatchable(cycle_graph(6))
    assert has_perfect_matching(petersen)
    star = SimpleGraph(4, [(0, 1), (0, 2), (0, 3)])
    assert not is_hypomatchable(star)


@given(simple_graphs(min_n=1, max_n=9))
def test_gallai_edmonds_against_deficiency_oracle(g):
    h = to_simple_nx(g)
    full = nu(h)
    assume(2 * full < g.order)
    dec = gallai_edmonds(g)
    # D = vertices missed by some maximum matching, computed one deletion at a time
    D = {v for v in h if nu(h.subgraph(set(h) - {v})) == full}
    X = {w for v in D for w in h[v]} - D
    assert set(dec.X) == X
    assert dec.odd_count > len(dec.X)
    for comp, odd, hyp in zip(dec.components, dec.odd_flags, dec.hypomatchable_flags):
        assert odd == (len(comp) % 2 == 1)
        if odd:
            assert hyp
    # deficiency formula: exposed vertices = odd components - |X|
    assert g.order - 2 * full == dec.odd_count - len(dec.X)


def test_gallai_edmonds_rejects_perfect_matching():
    with pytest.raises(HasPerfectMatching):
        gallai_edmonds(complete_graph(4))


def test_gallai_edmonds_star():
    dec = gallai_edmonds(SimpleGraph(4, [(0, 1), (0, 2), (0, 3)]))
    assert dec.X == {0}
    assert sorted(map(sorted, dec.components)) == [[1], [2], [3]]


def test_exchange_stable_prefers_edges_inside_b():
    # square 0-1-2-3 with chords: the matching {02, 13} crosses B = {0, 1}
    # and exchanging gives {01, 23}
    g = SimpleGraph(4, [(0, 1), (2, 3), (0, 2), (1, 3)])
    m = exchange_stable_perfect_matching(g, B=[0, 1])
    assert {g.ends(e) for e in m} == {(0, 1), (2, 3)}
    assert not improving_exchange_exists(g, m, [0, 1])


@given(simple_graphs(min_n=2, max_n=10))
def test_exchange_stable_matching_is_perfect_and_stable(g0):
    # plant a perfect matching on an even vertex set
    n = g0.order - g0.order % 2
    pairs = {(a, b) for _, a, b in g0.edges() if b < n} | {(i, i + 1) for i in range(0, n, 2)}
    g = SimpleGraph(n, sorted(pairs))
    B = g.vertices()[: g.order // 2]
    m = exchange_stable_perfect_matching(g, B)
    assert 2 * len(m) == g.order
    assert not improving_exchange_exists(g, m, B)


def test_no_perfect_matching_raises():
    with pytest.raises(NoPerfectMatching):
        exchange_stable_perfect_matching(cycle_graph(5), B=[0, 1])


def test_adjacency_lists_drop_loops_and_repeats():
    from immersion.graph import MultiGraph

    g = MultiGraph(3, [(0, 0), (0, 1), (1, 0), (1, 2)])
    assert adjacency_lists(g) == [[1], [0, 2], [1]]
