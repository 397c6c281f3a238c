"""Strong 1-immersions of large cliques in graphs with quadratically many edges.

A graph with ``n`` vertices and ``2cn^2`` edges contains a strong 1-immersion
of ``K_s`` with ``s = ceil(c^2 n)``.  The finder takes a large cut ``(A, B)``,
selects ``U`` inside ``A`` by dependent random choice so that low-codegree
pairs are rare, then routes every pair of ``U`` through a common neighbour in
``B``, lowest codegree first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .certificates import ImmersionCertificate, single_vertex_certificate
from .errors import NoFreeInternalVertex, PreconditionViolated, RetriesExhausted
from .graph import MultiGraph, SimpleGraph, as_simple, max_cut_bipartition
from .rng import SplitMix64

log = logging.getLogger(__name__)


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def clique_target(c: Fraction, n: int) -> int:
    """``s = ceil(c^2 n)``, exactly."""
    return ceil_fraction(c * c * n)


def _side_matrix(h: MultiGraph, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """``|A| x |B|`` 0/1 adjacency between the two sides."""
    ia = np.full(h.n, -1, dtype=np.int64)
    ib = np.full(h.n, -1, dtype=np.int64)
    ia[list(A)] = np.arange(len(A))
    ib[list(B)] = np.arange(len(B))
    _, us, vs = h.live_arrays()
    M = np.zeros((len(A), len(B)), dtype=np.float32)
    fwd = (ia[us] >= 0) & (ib[vs] >= 0)
    bwd = (ia[vs] >= 0) & (ib[us] >= 0)
    M[ia[us[fwd]], ib[vs[fwd]]] = 1
    M[ia[vs[bwd]], ib[us[bwd]]] = 1
    return M


def codegree_matrix(h: MultiGraph, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """``C[i, j]`` = common neighbours of ``A[i]`` and ``A[j]`` inside ``B``."""
    M = _side_matrix(h, A, B)
    return np.rint(M @ M.T).astype(np.int64)


@dataclass(frozen=True)
class WeightProfile:
    s: int
    codegree: np.ndarray  # over the vertex list ``vertices``
    vertices: tuple[int, ...]

    def pair_weight(self, i: int, j: int) -> Fraction:
        d = int(self.codegree[i, j])
        return Fraction(1, d) if 0 < d < 2 * self.s else Fraction(0)

    def weights(self, subset: Sequence[int]) -> list[Fraction]:
        """Exact ``w_S(v)`` for each ``v`` in ``subset`` (indices into ``vertices``)."""
        return [
            sum((self.pair_weight(i, j) for j in subset if j != i), Fraction(0))
            for i in subset
        ]


def _heavy(codeg: np.ndarray, s: int) -> np.ndarray:
    """Mask of rows whose weight over the whole index set is at least 1/2."""
    with np.errstate(divide="ignore"):
        W = np.where((codeg > 0) & (codeg < 2 * s), 1.0 / np.maximum(codeg, 1), 0.0)
    np.fill_diagonal(W, 0.0)
    w = W.sum(axis=1)
    heavy = w >= 0.5
    # settle rows within rounding distance of 1/2 exactly
    close = np.flatnonzero(np.abs(w - 0.5) < 1e-9)
    for i in close.tolist():
        exact = sum(
            (Fraction(1, int(d)) for j, d in enumerate(codeg[i].tolist()) if j != i and 0 < d < 2 * s),
            Fraction(0),
        )
        heavy[i] = exact >= Fraction(1, 2)
    return heavy


def _candidate_pairs(nb: int, rng: SplitMix64 | None, attempts: int) -> Iterator[tuple[int, int]]:
    if rng is None:
        for x in range(nb):
            for y in range(x, nb):
                yield x, y
        return
    for _ in range(attempts):
        yield rng.randbelow(nb), rng.randbelow(nb)


def drc_select(
    h: MultiGraph,
    A: Sequence[int],
    B: Sequence[int],
    c: Fraction,
    seed: int = 0,
    max_attempts: int | None = None,
    derandomize: bool = False,
    n: int | None = None,
) -> list[int]:
    """``s = ceil(c^2 n)`` vertices of ``A`` whose pairwise weights sum to
    less than 1/2 at every chosen vertex.

    Two vertices of ``B`` are drawn (with repetition); their common
    neighbourhood ``X`` in ``A`` is pruned of every vertex of weight at least
    1/2 within ``X``.  If at least ``s`` remain, the ``s`` lowest are
    returned, otherwise another pair is drawn.  With ``derandomize`` every
    pair of ``B`` is tried in lexicographic order instead.
    """
    A, B = sorted(A), sorted(B)
    c = Fraction(c)
    n = len(A) + len(B) if n is None else n
    if len(B) < len(A):
        raise PreconditionViolated("need |B| >= |A|")
    if not c * c * n > 2:
        raise PreconditionViolated("need c^2 n > 2")
    side = _side_matrix(h, A, B)
    if Fraction(int(side.sum())) < c * n * n:
        raise PreconditionViolated("bipartite graph has fewer than c n^2 edges")
    s = clique_target(c, n)
    if max_attempts is None:
        max_attempts = 64 * ceil_fraction(1 / (c * c))
    codeg = np.rint(side @ side.T).astype(np.int64)
    cols = side.T.astype(bool)  # row j = neighbours of B[j] in A
    rng = None if derandomize else SplitMix64(seed)
    tried = 0
    for x, y in _candidate_pairs(len(B), rng, max_attempts):
        tried += 1
        X = np.flatnonzero(cols[x] & cols[y])
        if len(X) < s:
            continue
        keep = X[~_heavy(codeg[np.ix_(X, X)], s)]
        if len(keep) >= s:
            log.debug("dependent random choice succeeded after %d draws", tried)
            return [A[i] for i in keep[:s].tolist()]
    raise RetriesExhausted(f"no suitable set after {tried} draws")


def max_weight(h: MultiGraph, U: Sequence[int], B: Sequence[int], s: int) -> Fraction:
    """Largest ``w_U(v)`` over ``v`` in ``U``, recomputed exactly from scratch."""
    bset = set(B)
    nb = {v: h.neighbors(v) & bset for v in U}
    best = Fraction(0)
    for v in U:
        w = Fraction(0)
        for u in U:
            if u != v:
                d = len(nb[u] & nb[v])
                if 0 < d < 2 * s:
                    w += Fraction(1, d)
        best = max(best, w)
    return best


def greedy_one_immersion(g: MultiGraph, U: Sequence[int], B: Sequence[int]) -> ImmersionCertificate:
    """Route each pair of ``U`` as ``u - z - v`` with ``z`` in ``B``.

    Pairs are handled in nondecreasing codegree order (ties by pair index);
    ``z`` is the lowest common neighbour whose two edges are still unused.
    """
    U = list(U)
    bset = sorted(set(B))
    binset = set(bset)
    nb = {u: sorted(g.neighbors(u) & binset) for u in U}
    nbs = {u: set(nb[u]) for u in U}
    pairs = []
    for i in range(len(U)):
        for j in range(i + 1, len(U)):
            common = [z for z in nb[U[i]] if z in nbs[U[j]]]
            pairs.append((len(common), i, j, common))
    pairs.sort(key=lambda p: (p[0], p[1], p[2]))
    used: set[tuple[int, int]] = set()
    paths = {}
    for _, i, j, common in pairs:
        u, v = U[i], U[j]
        for z in common:
            if (u, z) not in used and (v, z) not in used:
                used.add((u, z))
                used.add((v, z))
                paths[(i, j)] = [g.edges_between(u, z)[0], g.edges_between(z, v)[0]]
                break
        else:
            raise NoFreeInternalVertex(f"pair ({u}, {v}) has no free common neighbour")
    return ImmersionCertificate.from_paths(
        g.digest(), U, paths, strong=True, k=1 if len(U) >= 2 else None
    )


@dataclass
class DenseResult:
    certificate: ImmersionCertificate
    c: Fraction
    target: int
    A: list[int] | None = None
    B: list[int] | None = None


def find_dense_immersion(
    g: SimpleGraph,
    seed: int = 0,
    c: Fraction | None = None,
    derandomize: bool = False,
    max_attempts: int | None = None,
) -> DenseResult:
    """Strong 1-immersion of ``K_s``, ``s >= ceil(c^2 n)``, with ``c = m / 2n^2``.

    A smaller ``c`` may be passed to lower the target; a larger one is
    rejected.
    """
    g = as_simple(g)
    n, m = g.order, g.num_edges
    if n == 0:
        raise PreconditionViolated("graph has no vertices")
    actual = Fraction(m, 2 * n * n)
    if c is None:
        c = actual
    elif Fraction(c) > actual:
        raise PreconditionViolated(f"c={c} exceeds m/2n^2 = {actual}")
    c = Fraction(c)
    x = c * c * n
    verts = g.vertices()
    if x <= 1:
        return DenseResult(single_vertex_certificate(g, verts[0]), c, ceil_fraction(x))
    if x <= 2:
        degs = g.degrees()
        v = next(v for v in verts if degs[v] >= 2)
        e1, e2 = sorted(g.incident(v))[:2]
        a, b = g.other_end(e1, v), g.other_end(e2, v)
        cert = ImmersionCertificate.from_paths(g.digest(), [a, b], {(0, 1): [e1, e2]}, True, 1)
        return DenseResult(cert, c, 2)
    A, B = max_cut_bipartition(g)
    if len(B) < len(A):
        A, B = B, A
    U = drc_select(g, A, B, c, seed, max_attempts, derandomize, n=n)
    cert = greedy_one_immersion(g, U, B)
    return DenseResult(cert, c, clique_target(c, n), A, B)


def expected_common_neighbourhood(h: MultiGraph, A: Sequence[int], B: Sequence[int]) -> float:
    """``E|X| = sum_v (deg_B(v)/|B|)^2`` for the two-vertex draw."""
    side = _side_matrix(h, A, B)
    d = side.sum(axis=1) / max(len(B), 1)
    return float(np.sum(d * d))
