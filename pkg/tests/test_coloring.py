import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import simple_graphs
from immersion.coloring import (
    clique_edge_coloring,
    complete_graph,
    misra_gries,
    round_robin_pairs,
    vizing_edge_coloring,
)
from immersion.constructions import seymour_graph
from immersion.sparse import colors_needed


@given(simple_graphs(max_n=10))
def test_vizing_bound_and_properness(g):
    col = vizing_edge_coloring(g)
    assert col.is_proper(g)
    delta = max(g.degrees(), default=0)
    assert col.color_count <= delta + 1
    assert all(0 <= c <= delta for c in col.colors.values())


def test_misra_gries_on_petersen_and_seymour(petersen):
    for g in (petersen, seymour_graph()):
        col = vizing_edge_coloring(g)
        assert col.is_proper(g) and col.color_count <= max(g.degrees()) + 1


def test_misra_gries_k4_needs_three():
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert len(set(misra_gries(4, edges))) <= 4


@pytest.mark.parametrize("a, expected", [(0, 0), (1, 0), (2, 1), (3, 3), (4, 3), (5, 5), (6, 5), (9, 9), (10, 9)])
def test_round_robin_colour_count(a, expected):
    pairs = round_robin_pairs(a)
    assert len(pairs) == a * (a - 1) // 2
    assert len(set(pairs.values())) == expected == colors_needed(a)


@given(st.integers(1, 30))
def test_round_robin_classes_are_matchings(a):
    col = clique_edge_coloring(a)
    assert col.is_proper(complete_graph(a))
