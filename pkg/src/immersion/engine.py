"""Strong ``K_t`` immersions in graphs of minimum degree ``200t``.

The engine works on an Eulerian graph ``G`` with vertex sets ``A`` and ``B``
and ``s`` stored matchings inside ``B``.  Each iteration either finishes
(``a >= t``, many stored matchings, a dense ``B``, a large complete bipartite
subgraph, or a dense set found through the matching exchange) or changes the
state:

* split a vertex ``u`` of ``A`` along a perfect matching of the complement
  ``H`` of ``G[N(u) - A]`` (``s`` grows by one, or the state is re-seeded);
* if ``H`` is hypomatchable, split along a perfect matching of ``H - w``;
* otherwise move the small components of ``H - X`` (``X`` a Gallai-Edmonds
  barrier) into ``A`` and shrink ``B``.

All splits are recorded, so the final certificate is lifted to the input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .certificates import ImmersionCertificate, lift_certificate, single_vertex_certificate
from .errors import InternalContradiction, PreconditionViolated
from .graph import MultiGraph, SimpleGraph, SplitTrace, _split_vertex_inplace, as_simple
from .matching import (
    _hypomatchable_adj,
    adjacency_from_matrix,
    exchange_stable_mate,
    gallai_edmonds_adj,
    max_matching_mate,
)
from .sparse import bipartite_immersion, eulerian_min_degree_subgraph, split_to_clique_on

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineState:
    A: tuple[int, ...]
    B: tuple[int, ...]
    s: int
    special: tuple[int, int] | None
    matchings: tuple[frozenset[tuple[int, int]], ...]
    order: int


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    case: str
    order: int
    a: int
    b: int
    s: int
    invariants_ok: bool | None  # None when checking was off


@dataclass
class EngineResult:
    certificate: ImmersionCertificate
    outcome: str
    iterations: list[IterationRecord] = field(default_factory=list)
    splits: int = 0
    reseeds: int = 0


def _pair(x: int, y: int) -> tuple[int, int]:
    return (x, y) if x < y else (y, x)


class MainEngine:
    """State machine for one run.  ``graph`` must be Eulerian with minimum
    degree at least ``100t``; the state must satisfy the six invariants that
    :meth:`check_invariants` tests."""

    def __init__(
        self,
        graph: MultiGraph,
        t: int,
        A,
        B,
        s: int = 0,
        special: tuple[int, int] | None = None,
        matchings=(),
        check: bool = True,
    ):
        if t < 2:
            raise PreconditionViolated("the engine needs t >= 2")
        self.t = t
        self.original = graph
        self.G = graph.to_multigraph()
        self.A: set[int] = set(A)
        self.B: set[int] = set(B)
        self.s = s
        self.special = special
        self.matchings: list[set[tuple[int, int]]] = [
            {_pair(x, y) for x, y in m} for m in matchings
        ]
        self.trace = SplitTrace()
        self.check = check
        self.iterations: list[IterationRecord] = []
        self.reseeds = 0
        n = self.G.n
        self.mult = np.zeros((n, n), dtype=np.int32)
        _, us, vs = self.G.live_arrays()
        np.add.at(self.mult, (us, vs), 1)
        off = us != vs
        np.add.at(self.mult, (vs[off], us[off]), 1)
        self.present = np.zeros(n, dtype=bool)
        self.present[self.G.vertices()] = True

    # ------------------------------------------------------------------
    # state and invariants
    # ------------------------------------------------------------------

    def state(self) -> EngineState:
        return EngineState(
            tuple(sorted(self.A)),
            tuple(sorted(self.B)),
            self.s,
            self.special,
            tuple(frozenset(m) for m in self.matchings),
            self.G.order,
        )

    def _b_degrees(self) -> dict[int, int]:
        B = sorted(self.B)
        sub = self.mult[np.ix_(B, B)] > 0
        return dict(zip(B, sub.sum(axis=1).tolist()))

    def violations(self) -> list[str]:
        """Names of the failed invariants, empty when the state is sound."""
        t, A, B = self.t, sorted(self.A), sorted(self.B)
        a, b = len(A), len(B)
        bad = []
        in_a = np.zeros(self.G.n, dtype=bool)
        in_a[A] = True
        degs = np.asarray(self.G.degrees())
        pres = self.present
        if np.any(degs[pres] % 2):
            bad.append("eulerian")
        if pres.any() and degs[pres].min() < 100 * t:
            bad.append("min-degree")
        # (i)
        if (self.A & self.B) or (a and b and not np.all(self.mult[np.ix_(A, B)] > 0)):
            bad.append("(i)")
        # (ii) and (iii)
        diag = np.diagonal(self.mult)
        if np.any((diag > 0) & ~in_a):
            bad.append("(ii)")
        upper = np.triu(self.mult, 1)
        xs, ys = np.nonzero(upper > 1)
        outside = [(int(x), int(y)) for x, y in zip(xs, ys) if not (in_a[x] and in_a[y])]
        if len(outside) > 1:
            bad.append("(ii)")
        elif outside:
            x, y = outside[0]
            ok = upper[x, y] == 2 and (in_a[x] != in_a[y])
            if ok:
                end = y if in_a[x] else x
                ok = int(np.count_nonzero(self.mult[end, B] > 0)) <= 50 * t
                ok = ok and self.special is not None and _pair(*self.special) == (x, y)
            if not ok:
                bad.append("(iii)")
        elif self.special is not None:
            bad.append("(iii)")
        # (iv)
        if len(self.matchings) != self.s:
            bad.append("(iv)")
        seen: set[tuple[int, int]] = set()
        for m in self.matchings:
            covered = [v for p in m for v in p]
            if (
                len(set(covered)) != len(covered)
                or not set(covered) <= self.B
                or any(self.mult[x, y] == 0 for x, y in m)
                or seen & m
                or len(m) < b - 53 * t
            ):
                bad.append("(iv)")
                break
            seen |= m
        # (v) and (vi)
        if 2 * a + b + 2 * self.s < 100 * t:
            bad.append("(v)")
        if not (a > 0 and 72 * t <= b <= 100 * t):
            bad.append("(vi)")
        return bad

    def check_invariants(self) -> None:
        bad = self.violations()
        if bad:
            raise InternalContradiction(f"engine invariants failed: {', '.join(bad)}")

    # ------------------------------------------------------------------
    # graph updates
    # ------------------------------------------------------------------

    def _neighbors(self, u: int) -> list[int]:
        row = self.mult[u] > 0
        row[u] = False
        return np.flatnonzero(row).tolist()

    def _split(self, u: int, pairing: list[tuple[int, int]], deleted: list[int]) -> None:
        ends = {e: self.G.ends(e) for e in self.G.incident(u)}
        rec = _split_vertex_inplace(self.G, u, pairing, deleted)
        for x, y in ends.values():
            self.mult[x, y] -= 1
            if x != y:
                self.mult[y, x] -= 1
        for _, _, new in rec.pairs:
            x, y = rec.ends[new]
            self.mult[x, y] += 1
            if x != y:
                self.mult[y, x] += 1
        self.present[u] = False
        self.trace.append(rec)

    def _u_edges(self, u: int, verts: list[int], up: int | None):
        """Edge at ``u`` for each index of ``verts`` (clone last), A-edges, loops."""
        by_end: dict[int, list[int]] = {}
        loops, a_edges = [], []
        for e in sorted(self.G.incident(u)):
            x = self.G.other_end(e, u)
            if x == u:
                loops.append(e)
            elif x in self.A:
                a_edges.append(e)
            else:
                by_end.setdefault(x, []).append(e)
        slot = [by_end[x][0] for x in verts]
        if up is not None:
            if len(by_end[up]) != 2:
                raise InternalContradiction("exceptional parallel class is not a pair")
            slot.append(by_end[up][1])
        elif any(len(v) > 1 for v in by_end.values()):
            raise InternalContradiction("unexpected parallel edge outside A")
        return slot, a_edges, loops

    def _reseed(self) -> None:
        degs = self.G.degrees()
        w = max(self.G.vertices(), key=lambda v: (degs[v], -v))
        nb = self._neighbors(w)
        self.A = {w}
        self.B = set(nb[: 100 * self.t])
        self.s = 0
        self.special = None
        self.matchings = []
        self.reseeds += 1

    # ------------------------------------------------------------------
    # the iteration
    # ------------------------------------------------------------------

    def _finish(self, cert: ImmersionCertificate) -> ImmersionCertificate:
        if len(self.trace):
            cert = lift_certificate(cert, self.trace, self.original, self.G)
        return cert

    def _dense_cross(self, V, mate, in_b, clone):
        """``6t-1`` matching edges from B to outside B, or None."""
        need = 6 * self.t - 1
        cross = [
            (i, j) for i, j in enumerate(mate)
            if j != -1 and in_b[i] and not in_b[j] and j != clone
        ]
        if len(cross) < need:
            return None
        cross = cross[:need]
        vs = [V[i] for i, _ in cross]
        ws = [V[j] for _, j in cross]
        half = need * (need - 1) // 2

        def count(S):
            return int(np.count_nonzero(np.triu(self.mult[np.ix_(S, S)] > 0, 1)))

        cv, cw = count(vs), count(ws)
        if 2 * max(cv, cw) < half:
            raise InternalContradiction("exchange-stable matching left both sides sparse")
        return vs if cv >= cw else ws

    def step(self) -> ImmersionCertificate | None:
        """One iteration; returns the final certificate when the run ends."""
        t = self.t
        it = len(self.iterations)
        ok = None
        if self.check:
            self.check_invariants()
            ok = True
        a, b = len(self.A), len(self.B)

        def record(case):
            self.iterations.append(IterationRecord(it, case, self.G.order, a, b, self.s, ok))
            log.debug("iteration %d: %s (n=%d a=%d b=%d s=%d)", it, case, self.G.order, a, b, self.s)

        if a >= t:
            record("bipartite")
            branch = sorted(self.A)[:t]
            return self._finish(bipartite_immersion(self.G, branch, sorted(self.B)))
        if self.s >= 12 * t:
            record("stored-matchings")
            S = sorted(self.B)[: 72 * t]
            return self._finish(split_to_clique_on(self.G, S, t))
        up = self.special[1] if self.special else None
        bdeg = self._b_degrees()
        if all(d > 50 * t for v, d in bdeg.items() if v != up):
            record("dense-B")
            return self._finish(split_to_clique_on(self.G, sorted(self.B), t))

        u = self.special[0] if self.special else min(self.A)
        V = [x for x in self._neighbors(u) if x not in self.A]
        nv = len(V)
        size = nv + (1 if up is not None else 0)
        Hm = np.zeros((size, size), dtype=bool)
        Hm[:nv, :nv] = ~(self.mult[np.ix_(V, V)] > 0)
        clone = -1
        if up is not None:
            iu = V.index(up)
            clone = nv
            Hm[clone, :nv] = Hm[iu, :nv]
            Hm[:nv, clone] = Hm[:nv, iu]
            Hm[iu, clone] = Hm[clone, iu] = False
        np.fill_diagonal(Hm, False)
        in_b = np.zeros(size, dtype=bool)
        in_b[:nv] = [x in self.B for x in V]
        label = V + ([up] if up is not None else [])
        adj = adjacency_from_matrix(Hm)
        mate = max_matching_mate(adj)

        if all(m != -1 for m in mate):
            mate, _ = exchange_stable_mate(Hm, mate, in_b)
            dense = self._dense_cross(V, mate, in_b, clone)
            if dense is not None:
                record("matching-exchange")
                return self._finish(split_to_clique_on(self.G, dense, t))
            record("perfect-matching")
            slot, a_edges, loops = self._u_edges(u, V, up)
            if len(a_edges) % 2:
                raise InternalContradiction("odd number of A-edges at an even vertex")
            pairing = [(slot[i], slot[j]) for i, j in enumerate(mate) if i < j]
            pairing += [(a_edges[k], a_edges[k + 1]) for k in range(0, len(a_edges), 2)]
            new_matching = {
                _pair(label[i], label[j]) for i, j in enumerate(mate)
                if i < j and in_b[i] and in_b[j] and clone not in (i, j)
            }
            only_u = self.A == {u}
            self._split(u, pairing, loops)
            self.special = None
            if only_u:
                self._reseed()
            else:
                self.A.discard(u)
                self.s += 1
                self.matchings.append(new_matching)
            return None

        if size % 2 == 1 and _hypomatchable_adj(adj, list(range(size))):
            cands = [v for v in sorted(self.B) if v != up and bdeg[v] <= 50 * t]
            w = cands[0]
            iw = V.index(w)
            Hw = Hm.copy()
            Hw[iw, :] = False
            Hw[:, iw] = False
            adjw = adjacency_from_matrix(Hw)
            mate = max_matching_mate(adjw)
            if sum(1 for m in mate if m == -1) != 1:
                raise InternalContradiction("hypomatchable H minus a vertex has no perfect matching")
            mate, _ = exchange_stable_mate(Hw, mate, in_b)
            dense = self._dense_cross(V, mate, in_b, clone)
            if dense is not None:
                record("matching-exchange")
                return self._finish(split_to_clique_on(self.G, dense, t))
            record("hypomatchable")
            slot, a_edges, loops = self._u_edges(u, V, up)
            if len(a_edges) % 2 == 0 or not a_edges:
                raise InternalContradiction("no A-edge left to pair with the edge to w")
            first = a_edges[0]
            partner = self.G.other_end(first, u)
            rest = a_edges[1:]
            pairing = [(slot[i], slot[j]) for i, j in enumerate(mate) if i < j and j != -1]
            pairing.append((slot[iw], first))
            pairing += [(rest[k], rest[k + 1]) for k in range(0, len(rest), 2)]
            new_matching = {
                _pair(label[i], label[j]) for i, j in enumerate(mate)
                if i < j and j != -1 and in_b[i] and in_b[j] and clone not in (i, j)
            }
            self._split(u, pairing, loops)
            self.A.discard(u)
            self.s += 1
            self.matchings.append(new_matching)
            self.special = (partner, w)
            return None

        # Gallai-Edmonds barrier
        dec = gallai_edmonds_adj(adj, list(range(size)))
        comps = sorted(dec.components, key=lambda c: (-len(c), min(c)))
        side1, side2 = _balanced_split(comps)
        real1 = [label[i] for i in side1 if i != clone]
        real2 = [label[i] for i in side2 if i != clone]
        if len(real1) >= t and len(real2) >= t:
            record("complete-bipartite")
            left, right = sorted(real1)[:t], sorted(real2)
            return self._finish(bipartite_immersion(self.G, left, right))
        record("barrier")
        K = comps[0]
        Y = [i for c in comps[1:] for i in c]
        if clone in Y:
            raise InternalContradiction("the clone ended up in a small component")
        Yv = {label[i] for i in Y}
        Xv = {label[i] for i in dec.X if i != clone}
        self.A |= Yv
        self.B -= Xv | Yv
        self.matchings = [
            {p for p in m if p[0] in self.B and p[1] in self.B} for m in self.matchings
        ]
        if self.special is not None and self.special[1] in self.A:
            self.special = None
        del K
        return None

    def run(self, max_iterations: int | None = None) -> EngineResult:
        n0 = self.G.order
        limit = max_iterations if max_iterations is not None else 4 * (n0 + 1) * (100 * self.t + 2)
        for _ in range(limit):
            cert = self.step()
            if cert is not None:
                outcome = self.iterations[-1].case
                return EngineResult(cert, outcome, self.iterations, len(self.trace), self.reseeds)
        raise InternalContradiction(f"no certificate after {limit} iterations")


def _balanced_split(comps: list[frozenset[int]]) -> tuple[list[int], list[int]]:
    """Split components into two sides with vertex totals as equal as possible."""
    sizes = [len(c) for c in comps]
    total = sum(sizes)
    # reached[s] = (index of the component that first reached s, previous sum)
    reached: dict[int, tuple[int, int]] = {0: (-1, -1)}
    for idx, sz in enumerate(sizes):
        for s in sorted(reached, reverse=True):
            if s + sz not in reached:
                reached[s + sz] = (idx, s)
    best = min(reached, key=lambda s: (abs(total - 2 * s), s))
    chosen = set()
    s = best
    while s:
        idx, prev = reached[s]
        chosen.add(idx)
        s = prev
    one = sorted(v for i in sorted(chosen) for v in comps[i])
    two = sorted(v for i, c in enumerate(comps) if i not in chosen for v in c)
    return one, two


def main_engine(g: SimpleGraph, t: int, check: bool = True) -> EngineResult:
    """Strong ``K_t`` immersion in a simple graph of minimum degree ``200t``.

    First an Eulerian subgraph of minimum degree ``100t`` is extracted, then
    the engine starts from its highest-degree vertex ``u`` with ``A = {u}``,
    ``B`` the ``100t`` lowest-numbered neighbours of ``u`` and ``s = 0``.
    """
    g = as_simple(g)
    if t < 1:
        raise PreconditionViolated("t must be at least 1")
    verts = g.vertices()
    if not verts:
        raise PreconditionViolated("graph has no vertices")
    degs = g.degrees()
    if min(degs[v] for v in verts) < 200 * t:
        raise PreconditionViolated(f"minimum degree is below 200t = {200 * t}")
    if t == 1:
        return EngineResult(single_vertex_certificate(g, verts[0]), "trivial")
    eul = eulerian_min_degree_subgraph(g, 50 * t)
    H = eul.graph
    hdeg = H.degrees()
    u = max(H.vertices(), key=lambda v: (hdeg[v], -v))
    nb = sorted(H.neighbors(u))
    engine = MainEngine(H, t, [u], nb[: 100 * t], check=check)
    result = engine.run()
    cert = result.certificate
    # the Eulerian subgraph shares vertex labels and edge ids with g
    result.certificate = ImmersionCertificate(
        g.digest(), cert.t, cert.branch, cert.offsets, cert.edges, cert.strong, cert.k
    )
    return result
