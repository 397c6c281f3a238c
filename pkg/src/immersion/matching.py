"""Maximum matchings in general graphs and the Gallai-Edmonds decomposition.

The core routines work on plain adjacency lists (``adj[v]`` = neighbours of
``v``) and a ``mate`` array with ``-1`` for exposed vertices; the public
functions adapt MultiGraphs to that form and report matchings as edge ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import HasPerfectMatching, InternalContradiction, NoPerfectMatching
from .graph import MultiGraph

Matching = frozenset  # of edge ids


def adjacency_lists(g: MultiGraph, skip: Iterable[int] = ()) -> list[list[int]]:
    """Neighbour lists of the underlying simple graph (loops and repeats dropped)."""
    skip = set(skip)
    _, us, vs = g.live_arrays()
    keep = us != vs
    us, vs = us[keep], vs[keep]
    if skip:
        mask = ~(np.isin(us, list(skip)) | np.isin(vs, list(skip)))
        us, vs = us[mask], vs[mask]
    src = np.concatenate([us, vs])
    dst = np.concatenate([vs, us])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    adj: list[list[int]] = [[] for _ in range(g.n)]
    if len(src):
        keep = np.ones(len(src), dtype=bool)
        keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        src, dst = src[keep], dst[keep]
        bounds = np.searchsorted(src, np.arange(g.n + 1))
        dl = dst.tolist()
        for v in range(g.n):
            adj[v] = dl[bounds[v]:bounds[v + 1]]
    return adj


def adjacency_from_matrix(mat: np.ndarray) -> list[list[int]]:
    mat = np.asarray(mat, dtype=bool).copy()
    np.fill_diagonal(mat, False)
    return [np.flatnonzero(row).tolist() for row in mat]


# ----------------------------------------------------------------------
# Edmonds' blossom search
# ----------------------------------------------------------------------


class _Forest:
    """Alternating forest grown from ``roots`` with blossom contraction.

    ``outer[v]`` ends up True exactly for vertices reachable from a root by an
    even-length alternating path.  ``grow`` returns an exposed vertex reached
    by an augmenting path (single-root mode) or None.
    """

    def __init__(self, adj: list[list[int]], mate: list[int], roots: list[int]):
        n = len(adj)
        self.adj = adj
        self.mate = mate
        self.parent = [-1] * n
        self.base = list(range(n))
        self.outer = [False] * n
        self.queue = deque(roots)
        for r in roots:
            self.outer[r] = True
        self.roots = set(roots)

    def _lca(self, a: int, b: int) -> int | None:
        base, mate, parent = self.base, self.mate, self.parent
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            if mate[b] == -1:
                return None
            b = parent[mate[b]]

    def _mark_path(self, v: int, b: int, child: int, blossom: set[int]) -> None:
        base, mate, parent = self.base, self.mate, self.parent
        while base[v] != b:
            blossom.add(base[v])
            blossom.add(base[mate[v]])
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def grow(self, stop_on_exposed: bool = True) -> int | None:
        adj, mate, parent, base, outer = self.adj, self.mate, self.parent, self.base, self.outer
        queue = self.queue
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if outer[to]:
                    cur = self._lca(v, to)
                    if cur is None:
                        # two different trees meet: an augmenting path exists
                        raise InternalContradiction("matching is not maximum")
                    blossom: set[int] = set()
                    self._mark_path(v, cur, to, blossom)
                    self._mark_path(to, cur, v, blossom)
                    for i in range(len(adj)):
                        if base[i] in blossom:
                            base[i] = cur
                            if not outer[i]:
                                outer[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        if stop_on_exposed:
                            return to
                        continue
                    outer[mate[to]] = True
                    queue.append(mate[to])
        return None

    def augment(self, end: int) -> None:
        mate, parent = self.mate, self.parent
        v = end
        while v != -1:
            pv = parent[v]
            nxt = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = nxt


def greedy_mate(adj: list[list[int]], active: Iterable[int] | None = None) -> list[int]:
    n = len(adj)
    mate = [-1] * n
    verts = range(n) if active is None else sorted(active)
    for v in verts:
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1 and w != v:
                    mate[v], mate[w] = w, v
                    break
    return mate


def max_matching_mate(adj: list[list[int]], mate: list[int] | None = None) -> list[int]:
    """Maximum-cardinality matching as a mate array (``-1`` = exposed)."""
    mate = greedy_mate(adj) if mate is None else list(mate)
    for v in range(len(adj)):
        if mate[v] == -1 and adj[v]:
            forest = _Forest(adj, mate, [v])
            end = forest.grow()
            if end is not None:
                forest.augment(end)
    return mate


def outer_vertices(adj: list[list[int]], mate: list[int], roots: list[int]) -> set[int]:
    """Vertices joined to some root by an even alternating path (``mate`` maximum)."""
    forest = _Forest(adj, mate, roots)
    forest.grow(stop_on_exposed=False)
    return {v for v, flag in enumerate(forest.outer) if flag}


def _matching_size(mate: list[int]) -> int:
    return sum(1 for v, w in enumerate(mate) if w > v)


def _mate_to_edges(g: MultiGraph, mate: list[int]) -> Matching:
    return frozenset(g.edges_between(v, w)[0] for v, w in enumerate(mate) if w > v)


# ----------------------------------------------------------------------
# public surface
# ----------------------------------------------------------------------


def maximum_matching(g: MultiGraph) -> Matching:
    return _mate_to_edges(g, max_matching_mate(adjacency_lists(g)))


def has_perfect_matching(g: MultiGraph) -> bool:
    if g.order % 2:
        return False
    return 2 * _matching_size(max_matching_mate(adjacency_lists(g))) == g.order


def _hypomatchable_adj(adj: list[list[int]], verts: list[int]) -> bool:
    """Factor-criticality of the subgraph induced on ``verts`` (given as an
    induced adjacency already restricted to ``verts``)."""
    if len(verts) % 2 == 0:
        return False
    mate = max_matching_mate(adj)
    exposed = [v for v in verts if mate[v] == -1]
    if len(exposed) != 1:
        return False
    # g - v has a perfect matching iff v is even-reachable from the exposed vertex
    return outer_vertices(adj, mate, exposed) >= set(verts)


def is_hypomatchable(g: MultiGraph) -> bool:
    """True iff deleting any single vertex leaves a graph with a perfect matching."""
    adj = adjacency_lists(g)
    return _hypomatchable_adj(adj, g.vertices())


@dataclass(frozen=True)
class GallaiEdmondsDecomposition:
    X: frozenset[int]
    components: tuple[frozenset[int], ...]
    odd_flags: tuple[bool, ...]
    hypomatchable_flags: tuple[bool | None, ...]  # None for even components

    @property
    def odd_count(self) -> int:
        return sum(self.odd_flags)


def _components(adj: list[list[int]], verts: Iterable[int], removed: set[int]) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in sorted(verts):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _restrict(adj: list[list[int]], verts: list[int]) -> tuple[list[list[int]], list[int]]:
    index = {v: i for i, v in enumerate(verts)}
    sub = [[index[w] for w in adj[v] if w in index] for v in verts]
    return sub, list(range(len(verts)))


def gallai_edmonds_adj(adj: list[list[int]], verts: list[int]) -> GallaiEdmondsDecomposition:
    verts = sorted(verts)
    mate = max_matching_mate(adj)
    exposed = [v for v in verts if mate[v] == -1]
    if not exposed:
        raise HasPerfectMatching("graph has a perfect matching")
    D = outer_vertices(adj, mate, exposed)
    X = {w for v in D for w in adj[v]} - D
    comps = _components(adj, verts, X)
    odd = tuple(len(c) % 2 == 1 for c in comps)
    hyp = []
    for comp, is_odd in zip(comps, odd):
        if not is_odd:
            hyp.append(None)
            continue
        sub, sverts = _restrict(adj, comp)
        hyp.append(_hypomatchable_adj(sub, sverts))
    dec = GallaiEdmondsDecomposition(
        frozenset(X), tuple(frozenset(c) for c in comps), odd, tuple(hyp)
    )
    if not dec.odd_count > len(X) or not all(h for h in hyp if h is not None):
        raise InternalContradiction("Gallai-Edmonds conditions failed to verify")
    return dec


def gallai_edmonds(g: MultiGraph) -> GallaiEdmondsDecomposition:
    """Barrier ``X`` with every odd component of ``g - X`` hypomatchable and
    more odd components than ``|X|``.

    ``X`` is the set of neighbours of ``D`` outside ``D``, where ``D`` is the
    set of vertices missed by some maximum matching.  ``D`` is read off one
    alternating forest grown from all exposed vertices of a maximum matching.
    """
    return gallai_edmonds_adj(adjacency_lists(g), g.vertices())


def exchange_stable_mate(
    adjm: np.ndarray, mate: list[int], in_b: np.ndarray
) -> tuple[list[int], int]:
    """Apply improving exchanges until none is left.

    An exchange takes matching edges ``v_i w_i`` and ``v_j w_j`` with the
    ``v`` ends in B and the ``w`` ends outside, where both ``v_i v_j`` and
    ``w_i w_j`` are edges, and swaps them in.  Returns the new mate array and
    the number of exchanges made.
    """
    mate = list(mate)
    swaps = 0
    while True:
        cross = [(v, w) for v, w in enumerate(mate) if w != -1 and in_b[v] and not in_b[w]]
        if len(cross) < 2:
            return mate, swaps
        V = np.array([c[0] for c in cross])
        W = np.array([c[1] for c in cross])
        both = adjm[np.ix_(V, V)] & adjm[np.ix_(W, W)]
        hits = np.argwhere(np.triu(both, 1))
        if len(hits) == 0:
            return mate, swaps
        i, j = hits[0]
        vi, wi, vj, wj = V[i], W[i], V[j], W[j]
        mate[vi], mate[vj] = vj, vi
        mate[wi], mate[wj] = wj, wi
        swaps += 1


def exchange_stable_perfect_matching(
    h: MultiGraph, B: Iterable[int], forbidden_vertex: int | None = None
) -> Matching:
    """Perfect matching of ``h`` (minus ``forbidden_vertex``) admitting no
    improving B-exchange.

    Exchange stability stands in for "maximum number of edges inside B": each
    exchange raises that count by one, so the loop stops after at most
    ``|M|/2`` exchanges.
    """
    skip = [] if forbidden_vertex is None else [forbidden_vertex]
    adj = adjacency_lists(h, skip=skip)
    active = [v for v in h.vertices() if v not in skip]
    mate = max_matching_mate(adj, greedy_mate(adj, active))
    if any(mate[v] == -1 for v in active):
        raise NoPerfectMatching("no perfect matching")
    in_b = np.zeros(h.n, dtype=bool)
    in_b[list(B)] = True
    adjm = h.adjacency_matrix(np.uint8) > 0
    mate, _ = exchange_stable_mate(adjm, mate, in_b)
    return _mate_to_edges(h, mate)


def improving_exchange_exists(h: MultiGraph, matching: Iterable[int], B: Iterable[int]) -> bool:
    """Direct check of the stability condition (used by tests and assertions)."""
    Bs = set(B)
    cross = []
    for e in matching:
        a, b = h.ends(e)
        if a in Bs and b not in Bs:
            cross.append((a, b))
        elif b in Bs and a not in Bs:
            cross.append((b, a))
    nb = {v: h.neighbors(v) for pair in cross for v in pair}
    for i in range(len(cross)):
        for j in range(i + 1, len(cross)):
            (vi, wi), (vj, wj) = cross[i], cross[j]
            if vj in nb[vi] and wj in nb[wi]:
                return True
    return False
