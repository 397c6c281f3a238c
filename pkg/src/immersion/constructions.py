"""Explicit graphs and constructions.

* counterexample families: complements of disjoint unions of regular class-2
  graphs (the Seymour graph is the case of four triangles);
* ``very_dense_immersion``: a ``K_{delta-1}`` immersion when the complement
  has tiny maximum degree;
* projective planes, Walecki path decompositions and the clique minors they
  give in line graphs of complete graphs;
* seeded random generators used by the CLI and the tests.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .certificates import (
    ImmersionCertificate,
    LineMinorCertificate,
    pair_arrays,
    pair_index,
    remap_certificate,
    verify_immersion,
    verify_line_minor,
)
from .coloring import complete_graph, misra_gries
from .errors import (
    DegenerateInput,
    EvenOrderComponent,
    InternalContradiction,
    InvalidInput,
    NotOddPrime,
    NotRegular,
    PreconditionViolated,
    TooFewComponents,
)
from .graph import MultiGraph, SimpleGraph, as_simple, complement, induced_subgraph
from .rng import SplitMix64

log = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# simple families and random generators
# ----------------------------------------------------------------------


def disjoint_union(components: Sequence[MultiGraph]) -> SimpleGraph:
    edges, offset = [], 0
    for h in components:
        for _, a, b in h.edges():
            edges.append((a + offset, b + offset))
        offset += h.n
    return SimpleGraph(offset, edges)


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def complement_of_union(components: Sequence[MultiGraph]) -> SimpleGraph:
    return complement(disjoint_union(components))


def seymour_graph() -> SimpleGraph:
    """``K_12`` minus four disjoint triangles: 9-regular, 54 edges."""
    return complement_of_union([complete_graph(3)] * 4)


def complement_of_cycles(count: int, length: int = 5) -> SimpleGraph:
    """Complement of ``count`` disjoint cycles of the given length."""
    n = count * length
    base = np.arange(count) * length
    us = (base[:, None] + np.arange(length)[None, :]).ravel()
    vs = (base[:, None] + (np.arange(length)[None, :] + 1) % length).ravel()
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    adj[us, vs] = False
    adj[vs, us] = False
    iu, ju = np.nonzero(np.triu(adj, 1))
    return SimpleGraph.from_arrays(n, iu, ju)


def complement_of_perfect_matching(n: int) -> SimpleGraph:
    if n % 2:
        raise InvalidInput("a perfect matching needs an even number of vertices")
    return complement_of_union([complete_graph(2)] * (n // 2))


def random_gnp(n: int, p: float, seed: int) -> SimpleGraph:
    """``G(n, p)``: pair ``(i, j)``, ``i < j``, in lexicographic order consumes
    the next SplitMix64 double and is an edge iff that double is below ``p``."""
    iu, ju = np.triu_indices(n, 1)
    keep = SplitMix64(seed).bulk_random(len(iu)) < p
    return SimpleGraph.from_arrays(n, iu[keep], ju[keep])


def random_min_degree(n: int, p: float, delta: int, seed: int) -> SimpleGraph:
    """``G(n, p)`` topped up to minimum degree ``delta``.

    After the ``G(n, p)`` draw, vertices are scanned in order and each one
    below ``delta`` gets edges to uniformly drawn non-neighbours, continuing
    the same SplitMix64 stream.
    """
    if delta >= n:
        raise InvalidInput("minimum degree must be below n")
    rng = SplitMix64(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.bulk_random(len(iu)) < p
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[keep], ju[keep]] = True
    adj |= adj.T
    deg = adj.sum(axis=1)
    for v in range(n):
        while deg[v] < delta:
            w = rng.randbelow(n)
            if w != v and not adj[v, w]:
                adj[v, w] = adj[w, v] = True
                deg[v] += 1
                deg[w] += 1
    iu, ju = np.nonzero(np.triu(adj, 1))
    return SimpleGraph.from_arrays(n, iu, ju)


# ----------------------------------------------------------------------
# class-2 complements
# ----------------------------------------------------------------------


def class2_complement_family(components: Sequence[SimpleGraph], unchecked: bool = False) -> SimpleGraph:
    """Complement of the disjoint union of ``D``-regular class-2 graphs.

    Class 2 is certified only by parity: a ``D``-regular graph of odd order
    has no perfect matching, so it has no proper ``D``-edge-colouring.  With
    ``unchecked`` the parity test is skipped and the caller vouches for the
    chromatic index.  More than ``D(D+1)/2`` components are required.
    """
    if not components:
        raise TooFewComponents("no components given")
    D = None
    for idx, h in enumerate(components):
        h = as_simple(h)
        degs = {h.degree(v) for v in h.vertices()}
        if len(degs) != 1 or (D is not None and degs != {D}):
            raise NotRegular(f"component {idx} is not {D}-regular" if D is not None else f"component {idx} is not regular")
        D = degs.pop()
        if not unchecked and h.order % 2 == 0:
            raise EvenOrderComponent(f"component {idx} has even order {h.order}")
    if len(components) <= D * (D + 1) // 2:
        raise TooFewComponents(f"need more than {D * (D + 1) // 2} components, got {len(components)}")
    return complement_of_union(components)


# ----------------------------------------------------------------------
# very dense graphs
# ----------------------------------------------------------------------


def _complement_adjacency(g: SimpleGraph) -> np.ndarray:
    adj = g.adjacency_matrix(np.uint8) > 0
    comp = ~adj
    np.fill_diagonal(comp, False)
    present = np.zeros(g.n, dtype=bool)
    present[g.vertices()] = True
    comp &= present[:, None] & present[None, :]
    return comp


def _ball(nbrs: list[list[int]], v: int, radius: int) -> set[int]:
    seen = {v}
    frontier = [v]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def distance_five_set(g: SimpleGraph, size: int) -> list[int]:
    """Lowest-index greedy set of ``size`` vertices, pairwise at distance at
    least 5 in the complement of ``g``."""
    comp = _complement_adjacency(g)
    nbrs = [np.flatnonzero(row).tolist() for row in comp]
    blocked = np.zeros(g.n, dtype=bool)
    absent = np.ones(g.n, dtype=bool)
    absent[g.vertices()] = False
    chosen = []
    for v in range(g.n):
        if len(chosen) == size:
            break
        if blocked[v] or absent[v]:
            continue
        chosen.append(v)
        blocked[list(_ball(nbrs, v, 4))] = True
    if len(chosen) < size:
        raise InternalContradiction(f"greedy found only {len(chosen)} of {size} far-apart vertices")
    return chosen


def very_dense_immersion(g: SimpleGraph, verify: bool = True) -> ImmersionCertificate:
    """Immersion of ``K_{delta-1}`` when ``(n - delta)^5 <= n``.

    Pick ``S = {s_0, ..., s_{D+1}}`` far apart in the complement, colour the
    complement on ``J = V - S`` with colours ``1..D+1``, and route each
    non-adjacent pair of ``J`` with colour ``i`` through ``s_i`` if both edges
    exist, else through ``s_0``.  Adjacent pairs use their edge.
    """
    g = as_simple(g)
    verts = g.vertices()
    n = len(verts)
    if n == 0:
        raise PreconditionViolated("graph has no vertices")
    degs = g.degrees()
    delta = min(degs[v] for v in verts)
    if (n - delta) ** 5 > n:
        raise PreconditionViolated(f"need (n - delta)^5 <= n; got n={n}, delta={delta}")
    D = n - delta - 1
    if n < D + 2:
        raise PreconditionViolated(f"need at least {D + 2} vertices")
    S = distance_five_set(g, D + 2)
    comp = _complement_adjacency(g)
    check_far = [(a, b) for a, b in itertools.combinations(S, 2)]
    nbrs = None
    if check_far:
        nbrs = [np.flatnonzero(row).tolist() for row in comp]
        for a, b in check_far:
            if b in _ball(nbrs, a, 4):
                raise InternalContradiction(f"{a} and {b} are within distance 4 in the complement")
    sset = set(S)
    J = [v for v in verts if v not in sset]
    index = np.full(g.n, -1, dtype=np.int64)
    index[J] = np.arange(len(J))
    # colour the complement on J
    cj = comp[np.ix_(J, J)]
    ci, cjj = np.nonzero(np.triu(cj, 1))
    cols = misra_gries(len(J), list(zip(ci.tolist(), cjj.tolist())))
    if cols and max(cols) > D:
        raise InternalContradiction("edge colouring used more than D+1 colours")

    ids, us, vs = g.live_arrays()
    eid = np.full((g.n, g.n), -1, dtype=np.int64)
    eid[us, vs] = ids
    eid[vs, us] = ids

    t = len(J)
    I, Jx = pair_arrays(t)
    Jarr = np.asarray(J, dtype=np.int64)
    direct = eid[Jarr[I], Jarr[Jx]]
    lengths = np.where(direct >= 0, 1, 2)
    offsets = np.zeros(len(I) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    flat = np.empty(int(offsets[-1]), dtype=np.int64)
    adjacent = direct >= 0
    flat[offsets[:-1][adjacent]] = direct[adjacent]
    s0 = S[0]
    for (a, b), c in zip(zip(ci.tolist(), cjj.tolist()), cols):
        v, w = J[a], J[b]
        hub = S[c + 1]
        if eid[v, hub] < 0 or eid[hub, w] < 0:
            hub = s0
        e1, e2 = eid[v, hub], eid[hub, w]
        if e1 < 0 or e2 < 0:
            raise InternalContradiction(f"no route for pair ({v}, {w})")
        p = pair_index(a, b, t)
        flat[offsets[p]] = e1
        flat[offsets[p] + 1] = e2
    cert = ImmersionCertificate(g.digest(), t, Jarr, offsets, flat, strong=True, k=None)
    if verify:
        rep = verify_immersion(g, cert)
        if not (rep.valid and rep.strong):
            raise InternalContradiction(f"very dense certificate failed: {rep.failures[:3]}")
    log.debug("very dense: D=%d, S=%s, %d colours", D, S, len(set(cols)))
    return cert


# ----------------------------------------------------------------------
# projective planes and line-graph clique minors
# ----------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class ProjectivePlane:
    p: int
    points: tuple[tuple[int, int, int], ...]  # normalized homogeneous coordinates
    lines: tuple[tuple[int, ...], ...]  # sorted point indices

    @property
    def n(self) -> int:
        return len(self.points)

    def incidence(self) -> np.ndarray:
        N = np.zeros((len(self.lines), len(self.points)), dtype=np.int64)
        for i, line in enumerate(self.lines):
            N[i, list(line)] = 1
        return N

    def check(self) -> bool:
        """All four plane axioms, checked exhaustively."""
        p, n = self.p, p_order(self.p)
        if len(self.points) != n or len(self.lines) != n:
            return False
        N = self.incidence()
        if np.any(N.sum(axis=1) != p + 1) or np.any(N.sum(axis=0) != p + 1):
            return False
        pp = N.T @ N  # points sharing lines
        ll = N @ N.T  # lines sharing points
        off = ~np.eye(n, dtype=bool)
        return bool(np.all(pp[off] == 1) and np.all(ll[off] == 1))


def p_order(p: int) -> int:
    return p * p + p + 1


def _normalized(p: int) -> list[tuple[int, int, int]]:
    out = []
    for vec in itertools.product(range(p), repeat=3):
        lead = next((x for x in vec if x), 0)
        if lead == 1:
            out.append(vec)
    return out


def projective_plane(p: int) -> ProjectivePlane:
    """``PG(2, p)``: points and lines are normalized nonzero vectors of
    ``F_p^3`` (first nonzero coordinate 1), incident when orthogonal."""
    if p % 2 == 0 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    pts = _normalized(p)
    P = np.asarray(pts, dtype=np.int64)
    inc = (P @ P.T) % p == 0  # row: line with the same coordinates
    lines = tuple(tuple(np.flatnonzero(row).tolist()) for row in inc)
    plane = ProjectivePlane(p, tuple(pts), lines)
    if not plane.check():
        raise InternalContradiction(f"PG(2, {p}) failed its axioms")
    return plane


def walecki_paths(m: int) -> list[list[int]]:
    """``m`` edge-disjoint Hamiltonian paths of ``K_{2m}``.

    Path ``j`` visits ``j, j+1, j-1, j+2, j-2, ..., j+m`` modulo ``2m``; its
    edges are the pairs whose sum is ``2j`` or ``2j+1``.
    """
    N = 2 * m
    out = []
    for j in range(m):
        seq = [j % N]
        for k in range(1, m + 1):
            seq.append((j + k) % N)
            if k < m:
                seq.append((j - k) % N)
        out.append(seq)
    return out


@dataclass
class LineMinorResult:
    host: SimpleGraph
    certificate: LineMinorCertificate
    method: str
    degenerate: bool = False
    immersion_order: int | None = None


def line_minor_from_clique(
    pattern_order: int, edge_of_pair, plane: ProjectivePlane
) -> list[list[int]]:
    """Parts for the first ``plane.n`` vertices of a clique pattern.

    ``edge_of_pair(i, j)`` gives the host edges realising pattern edge ``ij``.
    """
    if plane.n > pattern_order:
        raise InvalidInput("the plane has more points than the clique")
    parts = []
    for line in plane.lines:
        for path in walecki_paths((plane.p + 1) // 2):
            part: list[int] = []
            for x, y in zip(path, path[1:]):
                part.extend(edge_of_pair(line[x], line[y]))
            parts.append(sorted(part))
    return parts


def line_graph_clique_minor(p: int) -> tuple[SimpleGraph, LineMinorCertificate]:
    """``K_n`` with ``n = p^2+p+1`` and a clique minor of order ``n(p+1)/2``
    in its line graph: each plane line is a ``K_{p+1}`` split into
    ``(p+1)/2`` Hamiltonian paths."""
    plane = projective_plane(p)
    n = plane.n
    K = complete_graph(n)
    parts = line_minor_from_clique(n, lambda i, j: [K.edge_id(min(i, j), max(i, j))], plane)
    cert = LineMinorCertificate(K.digest(), tuple(tuple(pt) for pt in parts))
    rep = verify_line_minor(K, cert)
    if not rep.valid:
        raise InternalContradiction(f"line minor failed: {rep.failures[:3]}")
    return K, cert


@dataclass(frozen=True)
class LineMinorBound:
    """Clique minors in the line graph have order at most ``d sqrt(n)``."""

    max_degree: int
    n: int

    def admits(self, order: int) -> bool:
        return order * order <= self.max_degree * self.max_degree * self.n

    def __float__(self) -> float:
        return self.max_degree * self.n**0.5


def line_minor_upper_bound(g: MultiGraph) -> LineMinorBound:
    verts = g.vertices()
    degs = g.degrees()
    return LineMinorBound(max((degs[v] for v in verts), default=0), len(verts))


def min_degree_core(g: SimpleGraph, k: int) -> list[int]:
    """Vertices of the ``k``-core (possibly empty)."""
    alive = set(g.vertices())
    deg = {v: g.degree(v) for v in alive}
    stack = [v for v in alive if deg[v] < k]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.neighbors(v):
            if w in alive:
                deg[w] -= 1
                if deg[w] < k:
                    stack.append(w)
    return sorted(alive)


def _largest_plane_prime(t: int) -> int | None:
    best = None
    p = 3
    while p_order(p) <= t:
        if is_prime(p):
            best = p
        p += 2
    return best


def _star_parts(g: SimpleGraph) -> list[list[int]]:
    verts = g.vertices()
    if not verts or g.num_edges == 0:
        return []
    degs = g.degrees()
    v = max(verts, key=lambda x: (degs[x], -x))
    return [[e] for e in sorted(g.incident(v))]


def corollary_line_minor_result(
    g: SimpleGraph, immersion: ImmersionCertificate | None = None, engine_check: bool = True
) -> LineMinorResult:
    """Clique minor in the line graph via a clique immersion.

    The immersion comes from ``immersion`` if given, from the identity map if
    ``g`` is complete, and otherwise from the minimum-degree engine run on
    the ``ceil(d/2)``-core (``d`` the average degree).  The first
    ``p^2+p+1`` branch vertices carry the projective-plane construction;
    each tree becomes the union of its edges' immersion paths.  If no plane
    fits (``t < 13``) the edges at a maximum-degree vertex are returned as
    single-edge parts and ``degenerate`` is set.
    """
    g = as_simple(g)
    n = g.order
    if immersion is None and n > 0 and g.num_edges == n * (n - 1) // 2:
        verts = g.vertices()
        paths = {
            (i, j): [g.edge_id(verts[i], verts[j])] for i in range(n) for j in range(i + 1, n)
        }
        immersion = ImmersionCertificate.from_paths(g.digest(), verts, paths, True, 0)
    if immersion is None and n > 0:
        from .engine import main_engine  # the engine imports this module's siblings

        d2 = -(-g.num_edges // n)  # ceil(d/2) with d = 2m/n
        t = d2 // 200
        if t >= 1 and p_order(3) <= t:
            core = min_degree_core(g, d2)
            sub = induced_subgraph(g, core)
            res = main_engine(as_simple(sub.graph), t, check=engine_check)
            immersion = remap_certificate(res.certificate, sub, g)
    if immersion is not None:
        rep = verify_immersion(g, immersion)
        if not rep.valid:
            raise InvalidInput("supplied immersion does not verify on the graph")
    p = _largest_plane_prime(immersion.t) if immersion is not None else None
    if p is None:
        star = _star_parts(g)
        cert = LineMinorCertificate(g.digest(), tuple(tuple(pt) for pt in star))
        return LineMinorResult(g, cert, "star", degenerate=True,
                               immersion_order=None if immersion is None else immersion.t)
    plane = projective_plane(p)
    parts = line_minor_from_clique(immersion.t, lambda i, j: immersion.path(i, j), plane)
    method = "immersion"
    cert = LineMinorCertificate(g.digest(), tuple(tuple(pt) for pt in parts))
    rep = verify_line_minor(g, cert)
    if not rep.valid:
        raise InternalContradiction(f"corollary line minor failed: {rep.failures[:3]}")
    return LineMinorResult(g, cert, method, immersion_order=immersion.t)


def corollary_line_minor(
    g: SimpleGraph, immersion: ImmersionCertificate | None = None, engine_check: bool = True
) -> LineMinorCertificate:
    """Certificate only; warns with ``DegenerateInput`` when the star fallback is used."""
    res = corollary_line_minor_result(g, immersion, engine_check)
    if res.degenerate:
        warnings.warn(
            f"immersed clique too small for a projective plane; star of order {res.certificate.order}",
            DegenerateInput,
            stacklevel=2,
        )
    return res.certificate
