from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immersion.certificates import dumps_certificate, verify_immersion
from immersion.coloring import complete_graph
from immersion.constructions import random_gnp
from immersion.dense import (
    WeightProfile,
    clique_target,
    codegree_matrix,
    drc_select,
    expected_common_neighbourhood,
    find_dense_immersion,
    greedy_one_immersion,
    max_weight,
)
from immersion.errors import NoFreeInternalVertex, PreconditionViolated, RetriesExhausted
from immersion.graph import SimpleGraph, max_cut_bipartition


@pytest.mark.parametrize(
    "c, n, s",
    [(Fraction(2, 25), 1000, 7), (Fraction(1, 10), 100, 1), (Fraction(1, 4), 33, 3), (Fraction(1, 2), 8, 2)],
)
def test_clique_target(c, n, s):
    assert clique_target(c, n) == s


def test_codegree_matrix_small():
    # 0 and 1 share B-neighbours 3 and 4; 2 shares only 4 with them
    g = SimpleGraph(5, [(0, 3), (0, 4), (1, 3), (1, 4), (2, 4)])
    C = codegree_matrix(g, [0, 1, 2], [3, 4])
    assert C.tolist() == [[2, 2, 1], [2, 2, 1], [1, 1, 1]]


def test_weight_profile_exact():
    C = np.array([[0, 2, 5], [2, 0, 1], [5, 1, 0]])
    prof = WeightProfile(s=2, codegree=C, vertices=(0, 1, 2))
    # weights count codegrees strictly between 0 and 2s = 4
    assert prof.weights([0, 1, 2]) == [Fraction(1, 2), Fraction(1, 2) + 1, Fraction(1)]


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_drc_select_meets_weight_bound(seed):
    g = random_gnp(160, 0.5, seed=7)
    A, B = max_cut_bipartition(g)
    if len(B) < len(A):
        A, B = B, A
    c = Fraction(g.num_edges, 2 * g.order**2)
    c = min(c, Fraction(1, 8))
    U = drc_select(g, A, B, c, seed=seed, n=g.order)
    s = clique_target(c, g.order)
    assert len(U) == s and set(U) <= set(A)
    assert max_weight(g, U, B, s) < Fraction(1, 2)


def test_drc_select_preconditions_and_retries():
    g = random_gnp(120, 0.5, seed=1)
    A, B = max_cut_bipartition(g)
    if len(B) < len(A):
        A, B = B, A
    with pytest.raises(PreconditionViolated):
        drc_select(g, B + A[:1], A[1:], Fraction(1, 7))  # |B| < |A|
    with pytest.raises(PreconditionViolated):
        drc_select(g, A, B, Fraction(1, 100))  # c^2 n <= 2
    with pytest.raises(PreconditionViolated):
        drc_select(g, A, B, Fraction(1, 2))  # too few bipartite edges
    with pytest.raises(RetriesExhausted):
        drc_select(g, A, B, Fraction(1, 7), max_attempts=0)


def test_derandomized_selection_is_deterministic():
    g = random_gnp(120, 0.5, seed=1)
    A, B = max_cut_bipartition(g)
    if len(B) < len(A):
        A, B = B, A
    U1 = drc_select(g, A, B, Fraction(1, 7), derandomize=True)
    U2 = drc_select(g, A, B, Fraction(1, 7), derandomize=True)
    assert U1 == U2


def test_greedy_one_immersion_and_failure():
    g = SimpleGraph(5, [(a, b) for a in (0, 1, 2) for b in (3, 4)])
    with pytest.raises(NoFreeInternalVertex):
        greedy_one_immersion(g, [0, 1, 2], [3, 4])
    cert = greedy_one_immersion(g, [0, 1], [3, 4])
    rep = verify_immersion(g, cert)
    assert rep.valid and rep.strong and rep.k_uniform == 1


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_find_dense_immersion_on_gnp(seed):
    g = random_gnp(300, 0.4, seed=seed)
    res = find_dense_immersion(g, seed=seed)
    rep = verify_immersion(g, res.certificate)
    assert rep.valid and rep.strong and rep.k_uniform == 1
    assert res.certificate.t >= clique_target(res.c, g.order) == res.target


def test_find_dense_is_deterministic():
    g = random_gnp(300, 0.4, seed=5)
    a = dumps_certificate(find_dense_immersion(g, seed=9).certificate)
    b = dumps_certificate(find_dense_immersion(g, seed=9).certificate)
    assert a == b


def test_find_dense_small_targets():
    g = SimpleGraph(4, [(0, 1)])
    assert find_dense_immersion(g).certificate.t == 1
    g = complete_graph(4)  # c = 6/32, c^2 n = 0.14
    assert find_dense_immersion(g).certificate.t == 1
    g = complete_graph(60)  # c^2 n = (1770/7200)^2 * 60 = 3.6
    res = find_dense_immersion(g, c=Fraction(1, 5))  # c^2 n = 2.4 > 2
    assert verify_immersion(g, res.certificate).valid and res.certificate.t >= 3
    res = find_dense_immersion(g, c=Fraction(1, 6))  # c^2 n = 1.67: the two-edge path case
    rep = verify_immersion(g, res.certificate)
    assert rep.valid and rep.strong and res.certificate.t == 2 and rep.k_uniform == 1


def test_find_dense_rejects_large_c():
    with pytest.raises(PreconditionViolated):
        find_dense_immersion(complete_graph(10), c=Fraction(1, 2))
    with pytest.raises(PreconditionViolated):
        find_dense_immersion(SimpleGraph(0))


def test_expected_common_neighbourhood():
    g = SimpleGraph(4, [(0, 2), (0, 3), (1, 2)])
    # degrees into B: 2 and 1 out of 2
    assert expected_common_neighbourhood(g, [0, 1], [2, 3]) == pytest.approx(1.25)
