from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from immersion.graph import MultiGraph, SimpleGraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def to_nx(g: MultiGraph) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from((a, b) for _, a, b in g.edges())
    return h


def to_simple_nx(g: MultiGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from((a, b) for _, a, b in g.edges() if a != b)
    return h


@st.composite
def simple_graphs(draw, min_n: int = 0, max_n: int = 9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph(n, sorted(chosen))


@st.composite
def multigraphs(draw, min_n: int = 1, max_n: int = 7, max_m: int = 16, loops: bool = True):
    n = draw(st.integers(min_n, max_n))
    ends = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    edges = draw(st.lists(ends, max_size=max_m))
    if not loops:
        edges = [(a, b) for a, b in edges if a != b]
    return MultiGraph(n, edges)


@pytest.fixture
def petersen() -> SimpleGraph:
    h = nx.petersen_graph()
    return SimpleGraph(10, sorted(tuple(sorted(e)) for e in h.edges()))
