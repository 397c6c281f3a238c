import itertools
import warnings

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import to_simple_nx
from immersion.certificates import verify_immersion, verify_line_minor
from immersion.coloring import complete_graph
from immersion.constructions import (
    class2_complement_family,
    complement_of_cycles,
    complement_of_perfect_matching,
    complement_of_union,
    corollary_line_minor,
    corollary_line_minor_result,
    cycle_graph,
    disjoint_union,
    distance_five_set,
    line_graph_clique_minor,
    line_minor_upper_bound,
    min_degree_core,
    projective_plane,
    random_gnp,
    random_min_degree,
    seymour_graph,
    very_dense_immersion,
    walecki_paths,
)
from immersion.errors import (
    DegenerateInput,
    EvenOrderComponent,
    InvalidInput,
    NotOddPrime,
    NotRegular,
    PreconditionViolated,
    TooFewComponents,
)
from immersion.graph import SimpleGraph, complement


def test_seymour_graph():
    g = seymour_graph()
    assert g.order == 12 and g.num_edges == 54
    assert set(g.degrees()) == {9}


def test_class2_four_triangles_is_seymour():
    g = class2_complement_family([complete_graph(3)] * 4)
    assert g.digest() == seymour_graph().digest()


def test_class2_eleven_k5():
    g = class2_complement_family([complete_graph(5)] * 11)
    assert g.order == 55 and set(g.degrees()) == {50}
    assert complement(g).digest() == disjoint_union([complete_graph(5)] * 11).digest()


def test_class2_errors():
    with pytest.raises(TooFewComponents):
        class2_complement_family([complete_graph(3)] * 3)
    with pytest.raises(TooFewComponents):
        class2_complement_family([])
    with pytest.raises(NotRegular):
        class2_complement_family([SimpleGraph(3, [(0, 1), (1, 2)])] * 5)
    with pytest.raises(NotRegular):
        class2_complement_family([complete_graph(3)] * 4 + [complete_graph(5)])
    with pytest.raises(EvenOrderComponent):
        class2_complement_family([complete_graph(4)] * 7)
    g = class2_complement_family([complete_graph(4)] * 7, unchecked=True)
    assert set(g.degrees()) == {24}


@given(st.integers(1, 3), st.integers(0, 3))
def test_class2_output_is_regular(half_d, extra):
    D = 2 * half_d
    count = D * (D + 1) // 2 + 1 + extra
    g = class2_complement_family([complete_graph(D + 1)] * count)
    n = count * (D + 1)
    assert set(g.degrees()) == {n - 1 - D}


def test_generators_are_seeded():
    assert random_gnp(50, 0.3, 4).digest() == random_gnp(50, 0.3, 4).digest()
    assert random_gnp(50, 0.3, 4).digest() != random_gnp(50, 0.3, 5).digest()
    g = random_min_degree(60, 0.1, 12, seed=2)
    assert min(g.degrees()) >= 12 and g.is_simple()
    with pytest.raises(InvalidInput):
        random_min_degree(5, 0.1, 5, seed=0)
    with pytest.raises(InvalidInput):
        complement_of_perfect_matching(7)


def test_complement_of_cycles_shape():
    g = complement_of_cycles(7, 5)
    assert g.order == 35 and set(g.degrees()) == {32}
    assert nx.is_isomorphic(to_simple_nx(complement(g)), nx.disjoint_union_all([nx.cycle_graph(5)] * 7))


def test_very_dense_on_complete_graph_uses_direct_edges():
    g = complete_graph(9)
    cert = very_dense_immersion(g)
    rep = verify_immersion(g, cert)
    assert cert.t == 7 and rep.valid and rep.strong and rep.k_uniform == 0


def test_very_dense_complement_of_matching_n32():
    g = complement_of_perfect_matching(32)
    cert = very_dense_immersion(g)
    rep = verify_immersion(g, cert)
    assert cert.t == 29 and rep.valid and rep.strong


def test_very_dense_precondition():
    with pytest.raises(PreconditionViolated):
        very_dense_immersion(complement_of_perfect_matching(30))  # 2^5 > 30
    with pytest.raises(PreconditionViolated):
        very_dense_immersion(SimpleGraph(1))
    assert very_dense_immersion(complete_graph(2)).t == 0


def _complement_distances(g):
    return dict(nx.all_pairs_shortest_path_length(to_simple_nx(complement(g))))


def test_distance_five_set_is_far_apart():
    g = complement_of_cycles(60, 5)  # n = 300, D = 2
    S = distance_five_set(g, 4)
    dist = _complement_distances(g)
    for a, b in itertools.combinations(S, 2):
        assert dist[a].get(b, 10**9) >= 5


@st.composite
def very_dense_hosts(draw):
    """Complements of disjoint cycles and paths: complement max degree <= 2,
    on n = 243 vertices, so (n - delta)^5 <= 3^5 = n."""
    n = 243
    lengths = draw(st.lists(st.integers(2, 12), min_size=1, max_size=20))
    edges, v = [], 0
    for L in lengths:
        if v + L > n:
            break
        path = list(range(v, v + L))
        edges += list(zip(path, path[1:]))
        if L >= 3 and draw(st.booleans()):
            edges.append((path[0], path[-1]))
        v += L
    perm = draw(st.permutations(range(n)))
    h = SimpleGraph(n, sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
    return complement(h)


@settings(max_examples=15)
@given(very_dense_hosts())
def test_very_dense_property(g):
    delta = min(g.degrees())
    cert = very_dense_immersion(g)
    rep = verify_immersion(g, cert)
    assert rep.valid and rep.strong
    assert cert.t == delta - 1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_projective_plane_axioms(p):
    plane = projective_plane(p)
    n = p * p + p + 1
    assert plane.n == n and len(plane.lines) == n
    assert all(len(line) == p + 1 for line in plane.lines)
    assert plane.check()
    if p == 3:
        # every two lines meet in exactly one point, checked directly
        for a, b in itertools.combinations(plane.lines, 2):
            assert len(set(a) & set(b)) == 1


@pytest.mark.parametrize("p", [0, 1, 2, 4, 9, 15])
def test_projective_plane_rejects_non_odd_primes(p):
    with pytest.raises(NotOddPrime):
        projective_plane(p)


@given(st.integers(1, 12))
def test_walecki_paths_decompose_even_clique(m):
    paths = walecki_paths(m)
    N = 2 * m
    seen = set()
    for path in paths:
        assert sorted(path) == list(range(N))
        for x, y in zip(path, path[1:]):
            e = (min(x, y), max(x, y))
            assert e not in seen
            seen.add(e)
    assert len(seen) == N * (N - 1) // 2


@pytest.mark.parametrize("p, order", [(3, 26), (5, 93), (7, 228)])
def test_line_graph_clique_minor(p, order):
    K, cert = line_graph_clique_minor(p)
    n = p * p + p + 1
    assert K.order == n and cert.order == order == n * (p + 1) // 2
    assert verify_line_minor(K, cert).valid
    assert line_minor_upper_bound(K).admits(cert.order)


def test_line_minor_upper_bound_values():
    b = line_minor_upper_bound(complete_graph(13))
    assert b.max_degree == 12 and b.n == 13
    assert b.admits(26) and 26 * 26 <= 144 * 13
    assert not b.admits(44)  # 44^2 = 1936 > 1872
    assert float(line_minor_upper_bound(SimpleGraph(5))) == 0
    b = line_minor_upper_bound(complete_graph(6))
    assert float(b) == pytest.approx(5 * 6**0.5)


def test_corollary_on_complete_graph():
    K = complete_graph(13)
    cert = corollary_line_minor(K)
    assert cert.order == 26 and verify_line_minor(K, cert).valid


def test_corollary_degenerate_returns_star():
    g = seymour_graph()
    with pytest.warns(DegenerateInput):
        cert = corollary_line_minor(g)
    assert cert.order == 9 and verify_line_minor(g, cert).valid
    res = corollary_line_minor_result(g)
    assert res.degenerate and res.method == "star"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateInput)
        assert corollary_line_minor(SimpleGraph(4)).order == 0


def test_corollary_with_supplied_immersion():
    g = complement_of_perfect_matching(32)
    imm = very_dense_immersion(g)
    res = corollary_line_minor_result(g, immersion=imm)
    assert res.method == "immersion" and res.immersion_order == 29
    assert res.certificate.order == 26  # p = 3 is the largest plane inside K_29
    assert verify_line_minor(g, res.certificate).valid
    assert line_minor_upper_bound(g).admits(res.certificate.order)


def test_corollary_rejects_foreign_immersion():
    g = complement_of_perfect_matching(32)
    imm = very_dense_immersion(g)
    with pytest.raises(Exception):
        corollary_line_minor(complete_graph(32), immersion=imm)


def test_min_degree_core():
    g = SimpleGraph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    assert min_degree_core(g, 2) == [0, 1, 2]
    assert min_degree_core(g, 3) == []


def test_cycle_graph_small_cases():
    assert cycle_graph(2).num_edges == 0
    assert cycle_graph(5).num_edges == 5
    assert complement_of_union([cycle_graph(5)]).num_edges == 5
