"""Exhaustive immersion search for tiny graphs.

The search is independent of every finder: it only uses the definition of
an immersion and one normalization, namely that a pair of adjacent branch
vertices may always be routed along an edge joining them.  (If that edge
lies on another pair's path, swap it out for the pair's own path and
shortcut the resulting walk.)  All remaining pairs are routed by
depth-first path packing over edge bitmasks, with failed
``(pair index, used edges)`` states cached.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator

from .certificates import ImmersionCertificate, verify_immersion
from .errors import BudgetExceeded, InternalContradiction, InvalidInput
from .graph import MultiGraph, SimpleGraph
from .rng import SplitMix64

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budget:
    """Hard limits; exceeding any of them raises ``BudgetExceeded``."""

    max_vertices: int = 14
    max_edges: int = 60
    max_nodes: int | None = None  # routing steps over the whole search


DEFAULT_BUDGET = Budget()
ONE_IMMERSION_BUDGET = Budget(max_vertices=20, max_edges=190)


def _check_size(g: MultiGraph, budget: Budget) -> None:
    if g.order > budget.max_vertices or g.num_edges > budget.max_edges:
        raise BudgetExceeded(
            f"graph has {g.order} vertices and {g.num_edges} edges; "
            f"budget is {budget.max_vertices} and {budget.max_edges}"
        )


class _Counter:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} nodes")


class _Host:
    """Bitmask view of a multigraph: edge ids become bit positions."""

    def __init__(self, g: MultiGraph):
        self.ids = sorted(g.edge_ids())
        self.bit = {e: i for i, e in enumerate(self.ids)}
        self.n = g.n
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]  # (neighbour, bit)
        self.inc = [0] * g.n
        for e in self.ids:
            a, b = g.ends(e)
            i = self.bit[e]
            if a == b:
                continue  # loops never lie on a path
            self.adj[a].append((b, i))
            self.adj[b].append((a, i))
            self.inc[a] |= 1 << i
            self.inc[b] |= 1 << i
        self.ends = {self.bit[e]: g.ends(e) for e in self.ids}

    def paths(self, u: int, v: int, used: int, blocked: int) -> Iterator[tuple[int, list[int]]]:
        """Simple ``u``-``v`` paths over unused edges avoiding ``blocked`` vertices
        internally; yields ``(edge mask, bits in walk order)``."""
        visited = 1 << u
        stack = [(u, 0, iter(self.adj[u]))]
        bits: list[int] = []
        mask = 0
        while stack:
            x, _, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                visited &= ~(1 << x)
                if bits:
                    b = bits.pop()
                    mask &= ~(1 << b)
                continue
            y, b = step
            if (used | mask) >> b & 1 or visited >> y & 1:
                continue
            if y == v:
                yield mask | (1 << b), bits + [b]
                continue
            if blocked >> y & 1:
                continue
            visited |= 1 << y
            bits.append(b)
            mask |= 1 << b
            stack.append((y, b, iter(self.adj[y])))


def _codegree(g: MultiGraph, u: int, v: int) -> int:
    return len(g.neighbors(u) & g.neighbors(v))


def _route_branch_set(
    g: MultiGraph, host: _Host, branch: tuple[int, ...], strong: bool, counter: _Counter
) -> dict[tuple[int, int], list[int]] | None:
    t = len(branch)
    used = 0
    paths: dict[tuple[int, int], list[int]] = {}
    todo = []
    for i, j in itertools.combinations(range(t), 2):
        direct = g.edges_between(branch[i], branch[j])
        if direct:
            e = min(direct)
            paths[(i, j)] = [e]
            used |= 1 << host.bit[e]
        else:
            todo.append((i, j))
    # hardest first: fewest common neighbours, then pair order
    todo.sort(key=lambda p: (_codegree(g, branch[p[0]], branch[p[1]]), p))
    blocked = 0
    if strong:
        for b in branch:
            blocked |= 1 << b
    # demand[k][x]: pairs from k on that end at branch vertex x
    demand = [[0] * t for _ in range(len(todo) + 1)]
    for k in range(len(todo) - 1, -1, -1):
        demand[k] = list(demand[k + 1])
        demand[k][todo[k][0]] += 1
        demand[k][todo[k][1]] += 1
    incs = [host.inc[b] for b in branch]
    failed: set[tuple[int, int]] = set()

    def feasible(k: int, used_mask: int) -> bool:
        free = ~used_mask
        if (2 * (len(todo) - k)) > bin(free & ((1 << len(host.ids)) - 1)).count("1"):
            return False
        return all(bin(incs[x] & free).count("1") >= demand[k][x] for x in range(t))

    def route(k: int, used_mask: int) -> list[list[int]] | None:
        if k == len(todo):
            return []
        if (k, used_mask) in failed:
            return None
        counter.tick()
        if feasible(k, used_mask):
            i, j = todo[k]
            for mask, bits in host.paths(branch[i], branch[j], used_mask, blocked):
                rest = route(k + 1, used_mask | mask)
                if rest is not None:
                    return [bits] + rest
        failed.add((k, used_mask))
        return None

    found = route(0, used)
    if found is None:
        return None
    for (i, j), bits in zip(todo, found):
        paths[(i, j)] = [host.ids[b] for b in bits]
    return paths


def brute_force_immersion(
    g: MultiGraph, t: int, require_strong: bool = False, budget: Budget = DEFAULT_BUDGET
) -> ImmersionCertificate | None:
    """A ``K_t`` immersion in ``g`` (strong if required), or ``None`` if none exists.

    Branch sets are tried in lexicographic order among vertices of degree at
    least ``t - 1``.  The returned certificate is verified before it is
    returned.
    """
    _check_size(g, budget)
    if t < 0:
        raise InvalidInput("t must be non-negative")
    verts = g.vertices()
    if t == 0:
        return ImmersionCertificate.from_paths(g.digest(), [], {}, strong=True)
    if t * (t - 1) // 2 > g.num_edges:
        return None
    degs = g.degrees()
    candidates = [v for v in verts if degs[v] >= t - 1]
    if len(candidates) < t:
        return None
    host = _Host(g)
    counter = _Counter(budget.max_nodes)
    for branch in itertools.combinations(candidates, t):
        paths = _route_branch_set(g, host, branch, require_strong, counter)
        if paths is not None:
            cert = ImmersionCertificate.from_paths(g.digest(), branch, paths, strong=require_strong)
            rep = verify_immersion(g, cert)
            if not rep.valid or (require_strong and not rep.strong):
                raise InternalContradiction(f"oracle produced an invalid certificate: {rep.failures[:3]}")
            log.debug("oracle: K_%d found after %d nodes", t, counter.nodes)
            return cert.with_flags(strong=rep.strong)
    log.debug("oracle: no K_%d after %d nodes", t, counter.nodes)
    return None


def brute_force_one_immersion(
    g: MultiGraph, t: int, require_strong: bool = True, budget: Budget = ONE_IMMERSION_BUDGET
) -> ImmersionCertificate | None:
    """A 1-immersion of ``K_t``: every pair joined by a path of length exactly 2.

    Middle vertices must lie outside the branch set when ``require_strong``
    (the default); otherwise a branch vertex may serve as a middle vertex.
    """
    _check_size(g, budget)
    if t < 0:
        raise InvalidInput("t must be non-negative")
    verts = g.vertices()
    if t <= 1:
        return ImmersionCertificate.from_paths(g.digest(), verts[:t], {}, strong=True, k=None)
    if t * (t - 1) > g.num_edges:
        return None
    degs = g.degrees()
    candidates = [v for v in verts if degs[v] >= t - 1]
    counter = _Counter(budget.max_nodes)
    nbr_edges = {v: {} for v in verts}  # v -> {z: [edge ids]}
    for e, a, b in g.edges():
        if a != b:
            nbr_edges[a].setdefault(b, []).append(e)
            nbr_edges[b].setdefault(a, []).append(e)
    for branch in itertools.combinations(candidates, t):
        bset = set(branch)
        pairs = list(itertools.combinations(range(t), 2))
        options = []
        for i, j in pairs:
            u, v = branch[i], branch[j]
            zs = sorted(set(nbr_edges[u]) & set(nbr_edges[v]) - {u, v})
            if require_strong:
                zs = [z for z in zs if z not in bset]
            options.append(zs)
        order = sorted(range(len(pairs)), key=lambda p: (len(options[p]), p))
        used: set[int] = set()
        chosen: dict[int, list[int]] = {}
        failed: set[tuple[int, frozenset]] = set()

        def free_edge(a: int, z: int) -> int | None:
            return next((e for e in nbr_edges[a][z] if e not in used), None)

        def place(k: int) -> bool:
            if k == len(order):
                return True
            key = (k, frozenset(used))
            if key in failed:
                return False
            counter.tick()
            p = order[k]
            u, v = branch[pairs[p][0]], branch[pairs[p][1]]
            for z in options[p]:
                e1 = free_edge(u, z)
                if e1 is None:
                    continue
                used.add(e1)
                e2 = free_edge(z, v)
                if e2 is not None:
                    used.add(e2)
                    chosen[p] = [e1, e2]
                    if place(k + 1):
                        return True
                    used.discard(e2)
                used.discard(e1)
            failed.add(key)
            return False

        if place(0):
            paths = {pairs[p]: chosen[p] for p in range(len(pairs))}
            cert = ImmersionCertificate.from_paths(g.digest(), branch, paths, strong=require_strong, k=1)
            rep = verify_immersion(g, cert)
            if not rep.valid or rep.k_uniform != 1 or (require_strong and not rep.strong):
                raise InternalContradiction("oracle produced an invalid 1-immersion")
            return cert.with_flags(strong=rep.strong)
    return None


# ----------------------------------------------------------------------
# minimum-degree scan
# ----------------------------------------------------------------------


@dataclass
class ScanReport:
    t: int
    n_max: int
    exhaustive: dict[int, int] = field(default_factory=dict)  # n -> graphs checked
    sampled: dict[int, int] = field(default_factory=dict)
    counterexamples: list[SimpleGraph] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return sum(self.exhaustive.values()) + sum(self.sampled.values())

    @property
    def ok(self) -> bool:
        return not self.counterexamples


ATLAS_MAX_ORDER = 7


def atlas_graphs(n_max: int = ATLAS_MAX_ORDER) -> Iterator[SimpleGraph]:
    """Every simple graph on at most ``n_max <= 7`` vertices, one per isomorphism class."""
    import networkx as nx  # the atlas is the only thing taken from networkx

    if n_max > ATLAS_MAX_ORDER:
        raise InvalidInput(f"the graph atlas stops at {ATLAS_MAX_ORDER} vertices")
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() > n_max:
            break
        yield SimpleGraph(h.number_of_nodes(), sorted(tuple(sorted(e)) for e in h.edges()))


def _sample_min_degree(n: int, delta: int, rng: SplitMix64) -> SimpleGraph:
    """Rejection sample of ``G(n, p)`` conditioned on minimum degree ``delta``;
    ``p`` is redrawn uniformly from ``[delta/(n-1), 1]`` for each attempt."""
    lo = delta / (n - 1)
    while True:
        p = lo + (1 - lo) * rng.random()
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = SimpleGraph(n, edges)
        if min(g.degrees()) >= delta:
            return g


def min_degree_forcing_scan(
    t: int, n_max: int, samples: int = 500, seed: int = 0, budget: Budget = DEFAULT_BUDGET
) -> ScanReport:
    """Check that minimum degree ``t - 1`` forces a ``K_t`` immersion.

    Orders up to 7 are enumerated from the graph atlas; larger orders up to
    ``n_max`` get ``samples`` random graphs each.
    """
    if t > 4 or n_max > 10:
        raise BudgetExceeded("scan is limited to t <= 4 and n_max <= 10")
    report = ScanReport(t, n_max)
    delta = max(t - 1, 0)
    for g in atlas_graphs(min(n_max, ATLAS_MAX_ORDER)):
        if g.order < max(t, 1) or min(g.degrees()) < delta:
            continue
        report.exhaustive[g.order] = report.exhaustive.get(g.order, 0) + 1
        if brute_force_immersion(g, t, budget=budget) is None:
            report.counterexamples.append(g)
    rng = SplitMix64(seed)
    for n in range(ATLAS_MAX_ORDER + 1, n_max + 1):
        for _ in range(samples):
            g = _sample_min_degree(n, delta, rng)
            report.sampled[n] = report.sampled.get(n, 0) + 1
            if brute_force_immersion(g, t, budget=budget) is None:
                report.counterexamples.append(g)
    return report
