"""Building blocks of the minimum-degree finder.

* ``bipartite_immersion``: a strong clique immersion on one side of a
  complete bipartite subgraph, routed through the other side by colour.
* ``split_to_clique``: repeated average-degree-preserving splits until a
  clique subgraph appears, lifted back to a strong immersion.
* ``eulerian_min_degree_subgraph``: an even subgraph that keeps half the
  minimum degree, via spanning-tree packing and fundamental cycles.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import mpmath
import numpy as np

from .certificates import ImmersionCertificate, lift_certificate, remap_certificate
from .coloring import round_robin_pairs
from .errors import (
    BoundViolated,
    InternalContradiction,
    NotCompletelyJoined,
    PreconditionViolated,
    TooFewBVertices,
)
from .graph import (
    MultiGraph,
    SimpleGraph,
    SplitTrace,
    as_simple,
    induced_subgraph,
    split_min_degree_vertex,
)
from .trees import is_connected, stoer_wagner, tree_packing

log = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# complete bipartite subgraphs
# ----------------------------------------------------------------------


def colors_needed(a: int) -> int:
    """Colours used by the round-robin colouring of ``K_a``."""
    if a <= 1:
        return 0
    return a - 1 if a % 2 == 0 else a


def bipartite_immersion(g: MultiGraph, A: Sequence[int], B: Sequence[int]) -> ImmersionCertificate:
    """Strong ``K_|A|`` immersion with branch set ``A`` and every path of the
    form ``x - b - y`` with ``b`` in ``B``.

    Colour class ``i`` of ``K_A`` is a matching, so routing all its pairs
    through the ``i``-th vertex of ``B`` never reuses an edge.
    """
    A, B = list(A), list(B)
    if set(A) & set(B) or len(set(A)) != len(A) or len(set(B)) != len(B):
        raise PreconditionViolated("A and B must be disjoint sets")
    need = colors_needed(len(A))
    if len(B) < need:
        raise TooFewBVertices(f"{len(A)} branch vertices need {need} middle vertices, got {len(B)}")
    hub = B[:need]
    link: dict[tuple[int, int], int] = {}
    for x in A:
        for b in hub:
            ids = g.edges_between(x, b)
            if not ids:
                raise NotCompletelyJoined(f"{x} is not adjacent to {b}")
            link[(x, b)] = ids[0]
    paths = {}
    for (i, j), c in round_robin_pairs(len(A)).items():
        b = hub[c]
        paths[(i, j)] = [link[(A[i], b)], link[(A[j], b)]]
    return ImmersionCertificate.from_paths(
        g.digest(), A, paths, strong=True, k=1 if len(A) >= 2 else None
    )


# ----------------------------------------------------------------------
# density bound and clique search
# ----------------------------------------------------------------------


def density_clique_order(n: int, m: int) -> int:
    """``floor(m / (n ln(n^2/m)) + 1/3)`` evaluated with interval arithmetic.

    The precision is raised until the enclosing interval lies strictly inside
    one unit interval, so the floor is certified.  Graphs with no edges get 1.
    """
    if n <= 0 or m <= 0:
        return 1 if n > 0 else 0
    if n * n <= m:
        raise PreconditionViolated("a simple graph has fewer than n^2 edges")
    iv = mpmath.iv
    for dps in (30, 60, 120, 240, 480):
        iv.dps = dps
        x = iv.mpf(m) / (iv.mpf(n) * iv.log(iv.mpf(n * n) / iv.mpf(m))) + iv.mpf(1) / 3
        lo, hi = mpmath.floor(x.a), mpmath.floor(x.b)
        if lo == hi:
            return int(lo)
    raise InternalContradiction("could not certify the floor of the density bound")


def _bitsets(g: MultiGraph, verts: list[int]) -> list[int]:
    index = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for _, a, b in g.edges():
        if a != b and a in index and b in index:
            nb[index[a]] |= 1 << index[b]
            nb[index[b]] |= 1 << index[a]
    return nb


def find_clique(g: MultiGraph, q: int) -> list[int] | None:
    """Vertices of some ``K_q`` subgraph, or None.

    Bron-Kerbosch with pivoting on integer bitsets; stops at the first clique
    of size ``q``.
    """
    verts = g.vertices()
    if q <= 0:
        return []
    if q == 1:
        return verts[:1] or None
    # a K_q lives inside the (q-1)-core
    alive = set(v for v in verts)
    deg = {v: len(g.neighbors(v)) for v in verts}
    stack = [v for v in verts if deg[v] < q - 1]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.neighbors(v):
            if w in alive:
                deg[w] -= 1
                if deg[w] == q - 2:
                    stack.append(w)
    core = sorted(alive)
    if len(core) < q:
        return None
    nb = _bitsets(g, core)
    found: list[int] | None = None

    def expand(R: list[int], P: int, X: int) -> bool:
        nonlocal found
        if len(R) == q:
            found = R
            return True
        if len(R) + P.bit_count() < q:
            return False
        PX = P | X
        pivot, best = -1, -1
        while PX:
            low = PX & -PX
            u = low.bit_length() - 1
            c = (P & nb[u]).bit_count()
            if c > best:
                pivot, best = u, c
            PX ^= low
        cand = P & ~nb[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            if expand(R + [v], P & nb[v], X & nb[v]):
                return True
            P &= ~low
            X |= low
            cand ^= low
        return False

    expand([], (1 << len(core)) - 1, 0)
    return None if found is None else sorted(core[i] for i in found)


def clique_certificate(g: MultiGraph, clique: Sequence[int]) -> ImmersionCertificate:
    """Direct-edge immersion of the clique subgraph on ``clique``."""
    clique = list(clique)
    paths = {}
    for i in range(len(clique)):
        for j in range(i + 1, len(clique)):
            paths[(i, j)] = [g.edges_between(clique[i], clique[j])[0]]
    return ImmersionCertificate.from_paths(g.digest(), clique, paths, strong=True, k=0)


class SplitResult(NamedTuple):
    certificate: ImmersionCertificate
    trace: SplitTrace
    clique: list[int]  # branch vertices, in the input graph's labels


def split_to_clique(g: SimpleGraph, q: int, check_bound: bool = True) -> SplitResult:
    """Strong ``K_q`` immersion by splitting low-degree vertices.

    While no ``K_q`` subgraph is present, a vertex of minimum degree (at most
    the average) is split with the average-degree-preserving rule.  The bound
    guarantees a clique appears before ``ceil(m/n) + 1`` vertices are left.
    """
    g = as_simple(g)
    n, m = g.order, g.num_edges
    if q <= 1:
        if n == 0:
            raise PreconditionViolated("empty graph has no K_1")
        v = g.vertices()[0]
        cert = ImmersionCertificate.from_paths(g.digest(), [v], {}, strong=True)
        return SplitResult(cert, SplitTrace(), [v])
    if check_bound:
        bound = density_clique_order(n, m)
        if q > bound:
            raise BoundViolated(f"q={q} exceeds the density bound {bound} for n={n}, m={m}")
    floor = -(-m // n) + 1
    cur = g
    trace = SplitTrace()
    while True:
        clique = find_clique(cur, q)
        if clique is not None:
            break
        if cur.order <= floor:
            raise InternalContradiction(
                f"reached {cur.order} vertices without a K_{q} (n={n}, m={m})"
            )
        degs = cur.degrees()
        u = min(cur.vertices(), key=lambda v: (degs[v], v))
        cur, rec = split_min_degree_vertex(cur, u)
        trace.append(rec)
    cert = clique_certificate(cur, clique)
    if len(trace):
        cert = lift_certificate(cert, trace, g, cur)
    return SplitResult(cert, trace, clique)


def split_to_clique_on(g: MultiGraph, S: Iterable[int], q: int) -> ImmersionCertificate:
    """``split_to_clique`` on the subgraph induced by ``S``, reported on ``g``."""
    sub = induced_subgraph(g, S)
    res = split_to_clique(as_simple(sub.graph), q)
    return remap_certificate(res.certificate, sub, g)


# ----------------------------------------------------------------------
# Eulerian subgraph of large minimum degree
# ----------------------------------------------------------------------


class EulerianSubgraph(NamedTuple):
    graph: MultiGraph  # same vertex labels and edge ids as the input
    vertices: frozenset[int]
    strategy: str  # "spanning-tree" or "packing"


def _spanning_tree_dfs(g: MultiGraph, verts: set[int], root: int) -> tuple[dict[int, int | None], list[int]]:
    """Iterative DFS tree; returns parent edge per vertex and a preorder."""
    parent_edge: dict[int, int | None] = {root: None}
    order = [root]
    inc = {v: sorted(g.incident(v)) for v in verts}
    ptr = {v: 0 for v in verts}
    stack = [root]
    while stack:
        v = stack[-1]
        lst = inc[v]
        advanced = False
        while ptr[v] < len(lst):
            e = lst[ptr[v]]
            ptr[v] += 1
            w = g.other_end(e, v)
            if w in verts and w not in parent_edge:
                parent_edge[w] = e
                order.append(w)
                stack.append(w)
                advanced = True
                break
        if not advanced:
            stack.pop()
    return parent_edge, order


def fundamental_cycle_sum(
    g: MultiGraph, verts: set[int], tree: set[int]
) -> set[int]:
    """Symmetric difference of the fundamental cycles of every non-tree edge
    of ``g[verts]`` with respect to the spanning tree ``tree``.

    Each non-tree edge lies only on its own cycle; a tree edge lies on the
    cycle of every non-tree edge crossing its fundamental cut, so it survives
    iff the non-tree degrees below it sum to an odd number.
    """
    edges = [e for e, a, b in g.edges() if a in verts and b in verts and a != b]
    non_tree = [e for e in edges if e not in tree]
    parity = {v: 0 for v in verts}
    for e in non_tree:
        a, b = g.ends(e)
        parity[a] ^= 1
        parity[b] ^= 1
    # orient the tree from an arbitrary root
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for e in tree:
        a, b = g.ends(e)
        adj[a].append(e)
        adj[b].append(e)
    root = min(verts)
    up: dict[int, int | None] = {root: None}
    order = [root]
    for v in order:
        for e in adj[v]:
            w = g.other_end(e, v)
            if w not in up:
                up[w] = e
                order.append(w)
    if len(order) != len(verts):
        raise InternalContradiction("tree does not span the vertex set")
    S = set(non_tree)
    below = dict(parity)
    for v in reversed(order[1:]):
        e = up[v]
        if below[v]:
            S.add(e)
        below[g.other_end(e, v)] ^= below[v]
    return S


def _restricted(g: MultiGraph, verts: set[int], edges: set[int]) -> MultiGraph:
    out = g.to_multigraph()
    for e in list(out.edge_ids()):
        if e not in edges:
            out._remove_edge(e)
    for v in range(out.n):
        if v not in verts and out.has_vertex(v):
            out._remove_vertex(v)
    return out


def _cut_outside(g: MultiGraph, X: list[int], xset: set[int]) -> tuple[int, frozenset[int] | None]:
    """Minimum cut of ``g[X]`` plus one vertex standing for ``V - X``.

    Returns the value and the shore that avoids the outside vertex, or None if
    that shore is all of ``X``.
    """
    n = len(X)
    index = {v: i for i, v in enumerate(X)}
    W = np.zeros((n + 1, n + 1), dtype=np.int64)
    ids, us, vs = g.live_arrays()
    for a, b in zip(us.tolist(), vs.tolist()):
        ia, ib = index.get(a, n), index.get(b, n)
        if ia == ib:
            continue
        W[ia, ib] += 1
        W[ib, ia] += 1
    if W[n].sum() == 0:
        W = W[:n, :n]
    if len(W) < 2:
        return 0, None
    value, side = stoer_wagner(W)
    if len(W) == n + 1 and side[n]:
        side = ~side
    shore = [X[i] for i in np.flatnonzero(side[:n])]
    if len(shore) == n or not shore:
        return value, None
    return value, frozenset(shore)


def _packing_subgraph(g: MultiGraph, k: int) -> tuple[set[int], frozenset[int]]:
    """Vertex set ``X`` with ``2k`` edge-disjoint spanning trees in ``g[X]``,
    and the edge set of one of those trees."""
    trees = 2 * k
    X = set(g.vertices())
    while True:
        xs = sorted(X)
        outside = any(
            (a in X) != (b in X) for _, a, b in g.edges()
        )
        if outside or len(xs) > 1:
            value, shore = _cut_outside(g, xs, X)
            if shore is not None and value < 2 * trees:
                log.debug("shrinking to a side of a %d-edge cut (%d vertices)", value, len(shore))
                X = set(shore)
                continue
        if not is_connected(g, X):
            raise InternalContradiction("shrunken vertex set is disconnected")
        packing = tree_packing(g, trees, X)
        if packing.found:
            return X, packing.trees[0]
        cuts = []
        for block in packing.partition:
            d = sum(1 for _, a, b in g.edges() if (a in block) != (b in block))
            cuts.append((d, sorted(block), block))
        d, _, block = min(cuts)
        if d >= 2 * trees:
            raise InternalContradiction("packing witness has no small block cut")
        log.debug("packing failed; recursing into a block with a %d-edge cut", d)
        X = set(block)


def eulerian_min_degree_subgraph(
    g: SimpleGraph, k: int, strategy: str = "auto"
) -> EulerianSubgraph:
    """Subgraph with every degree even and minimum degree at least ``2k``.

    Requires minimum degree at least ``4k``.  ``strategy="packing"`` follows
    the tree-packing route: find ``X`` whose induced subgraph has ``2k``
    edge-disjoint spanning trees, take one tree ``T``, and keep the symmetric
    difference of the fundamental cycles of ``T``.  Every other tree lies in
    that set, so each vertex keeps degree at least ``2k - 1``, hence ``2k`` by
    parity.  ``"spanning-tree"`` applies the same cycle sum to a DFS tree of
    a component and keeps it only if the degree bound holds; ``"auto"`` tries
    that first and falls back to packing.
    """
    g = as_simple(g)
    if k < 0:
        raise PreconditionViolated("k must be non-negative")
    verts = g.vertices()
    if not verts:
        raise PreconditionViolated("graph has no vertices")
    degs = g.degrees()
    if min(degs[v] for v in verts) < 4 * k:
        raise PreconditionViolated(f"minimum degree is below 4k = {4 * k}")
    if strategy not in ("auto", "spanning-tree", "packing"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if k == 0:
        return EulerianSubgraph(_restricted(g, set(verts), set()), frozenset(verts), "spanning-tree")

    if strategy in ("auto", "spanning-tree"):
        # component of the lowest vertex; any component inherits the degree bound
        root = verts[0]
        parent_edge, order = _spanning_tree_dfs(g, set(verts), root)
        X = set(order)
        tree = {e for e in parent_edge.values() if e is not None}
        S = fundamental_cycle_sum(g, X, tree)
        out = _restricted(g, X, S)
        if min(out.degree(v) for v in X) >= 2 * k:
            return EulerianSubgraph(out, frozenset(X), "spanning-tree")
        if strategy == "spanning-tree":
            raise InternalContradiction("spanning-tree cycle sum lost too much degree")
        log.debug("DFS cycle sum too thin; falling back to tree packing")

    X, tree = _packing_subgraph(g, k)
    S = fundamental_cycle_sum(g, X, set(tree))
    out = _restricted(g, X, S)
    if min(out.degree(v) for v in X) < 2 * k or any(out.degree(v) % 2 for v in X):
        raise InternalContradiction("cycle sum violates the degree guarantee")
    return EulerianSubgraph(out, frozenset(X), "packing")


def average_degree_loss_bound(n: int, q: int) -> Fraction:
    """Largest average-degree drop allowed for one split of a ``K_q``-free graph."""
    return Fraction(q - 2, n - 1)
