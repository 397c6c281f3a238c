"""Multigraphs with stable edge identifiers and the splitting-off primitives.

Edge ids are never reused.  Removing an edge tombstones its id and removing a
vertex (by splitting it) tombstones the vertex index, so split traces and
certificates can always name the exact edge they mean.
"""

from __future__ import annotations

import hashlib
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    BadEdge,
    BadPartition,
    BadVertex,
    GraphFormatError,
    InvalidInput,
    NotAdjacentEdges,
    NotSimple,
    PreconditionViolated,
    SameEdge,
    SameVertex,
)


class MultiGraph:
    """Undirected graph with loops and parallel edges.

    Vertices are integers ``0 .. n-1``; a vertex that has been split away is
    marked absent but keeps its index.  Edge ``e`` has endpoints
    ``ends(e)`` for as long as it is alive.  A loop contributes 2 to the degree.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise BadVertex("vertex count must be non-negative")
        self.n = n
        self._ends = array("i")
        self._alive = bytearray()
        self._present = bytearray(b"\x01") * n
        self._order = n
        self._m = 0
        self._deg = [0] * n
        self._inc: list[set[int]] | None = None
        for u, v in edges:
            self._add_edge(u, v)

    @classmethod
    def from_arrays(cls, n: int, us, vs):
        """Bulk constructor; edge ``i`` joins ``us[i]`` and ``vs[i]``."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.shape != vs.shape or us.ndim != 1:
            raise InvalidInput("endpoint arrays must be 1-d and equal length")
        if len(us) and (min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= n):
            raise BadVertex("endpoint out of range")
        g = cls.__new__(cls)
        MultiGraph.__init__(g, n)
        flat = np.empty(2 * len(us), dtype=np.int32)
        flat[0::2] = us
        flat[1::2] = vs
        g._ends = array("i")
        g._ends.frombytes(flat.tobytes())
        g._alive = bytearray(b"\x01") * len(us)
        g._m = len(us)
        g._deg = (np.bincount(us, minlength=n) + np.bincount(vs, minlength=n)).tolist()
        g._after_bulk_load()
        return g

    def _after_bulk_load(self) -> None:
        pass

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    @property
    def order(self) -> int:
        """Number of present vertices."""
        return self._order

    @property
    def num_edges(self) -> int:
        return self._m

    @property
    def capacity(self) -> int:
        """Number of edge ids ever issued; the next new edge gets this id."""
        return len(self._alive)

    def vertices(self) -> list[int]:
        return [v for v in range(self.n) if self._present[v]]

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self._present[v])

    def is_alive(self, e: int) -> bool:
        return 0 <= e < len(self._alive) and bool(self._alive[e])

    def ends(self, e: int) -> tuple[int, int]:
        if not self.is_alive(e):
            raise BadEdge(f"edge {e} does not exist")
        return self._ends[2 * e], self._ends[2 * e + 1]

    def other_end(self, e: int, v: int) -> int:
        a, b = self.ends(e)
        if a == v:
            return b
        if b == v:
            return a
        raise BadEdge(f"edge {e} is not incident with {v}")

    def edge_ids(self) -> list[int]:
        alive = self._alive
        return [e for e in range(len(alive)) if alive[e]]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(edge_id, u, v)`` for every live edge in id order."""
        ends = self._ends
        for e in self.edge_ids():
            yield e, ends[2 * e], ends[2 * e + 1]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self._deg[v]

    def degrees(self) -> list[int]:
        return list(self._deg)

    def incident(self, v: int) -> set[int]:
        """Ids of live edges at ``v`` (a loop is listed once).  Do not mutate."""
        self._check_vertex(v)
        return self._incidence()[v]

    def neighbors(self, v: int) -> set[int]:
        ends = self._ends
        out = set()
        for e in self.incident(v):
            a, b = ends[2 * e], ends[2 * e + 1]
            w = b if a == v else a
            if w != v:
                out.add(w)
        return out

    def edges_between(self, u: int, v: int) -> list[int]:
        inc = self._incidence()
        small, other = (u, v) if len(inc[u]) <= len(inc[v]) else (v, u)
        ends = self._ends
        out = []
        for e in inc[small]:
            a, b = ends[2 * e], ends[2 * e + 1]
            if (a == small and b == other) or (b == small and a == other):
                out.append(e)
        return sorted(out)

    def multiplicity(self, u: int, v: int) -> int:
        return len(self.edges_between(u, v))

    def ends_array(self) -> np.ndarray:
        """``(capacity, 2)`` int32 view of all endpoint slots, dead ones included."""
        return np.frombuffer(self._ends, dtype=np.int32).reshape(-1, 2)

    def alive_array(self) -> np.ndarray:
        return np.frombuffer(bytes(self._alive), dtype=np.uint8).astype(bool)

    def live_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(ids, us, vs)`` for live edges, as int64 arrays."""
        ids = np.flatnonzero(self.alive_array())
        ends = self.ends_array()
        return ids, ends[ids, 0].astype(np.int64), ends[ids, 1].astype(np.int64)

    def adjacency_matrix(self, dtype=np.int32) -> np.ndarray:
        """Dense multiplicity matrix; a loop adds 1 on the diagonal."""
        _, us, vs = self.live_arrays()
        mat = np.zeros((self.n, self.n), dtype=dtype)
        np.add.at(mat, (us, vs), 1)
        off = us != vs
        np.add.at(mat, (vs[off], us[off]), 1)
        return mat

    def is_simple(self) -> bool:
        _, us, vs = self.live_arrays()
        if np.any(us == vs):
            return False
        keys = np.minimum(us, vs) * self.n + np.maximum(us, vs)
        return len(np.unique(keys)) == len(keys)

    def digest(self) -> str:
        """Order-independent hash of ``n`` and the multiset of endpoint pairs."""
        _, us, vs = self.live_arrays()
        lo, hi = np.minimum(us, vs), np.maximum(us, vs)
        order = np.lexsort((hi, lo))
        pairs = np.stack([lo[order], hi[order]], axis=1).astype("<i8")
        h = hashlib.sha256()
        h.update(f"n={self.n};m={len(us)};".encode())
        h.update(pairs.tobytes())
        return h.hexdigest()

    def copy(self):
        g = self.__class__.__new__(self.__class__)
        g.n = self.n
        g._ends = array("i", self._ends)
        g._alive = bytearray(self._alive)
        g._present = bytearray(self._present)
        g._order = self._order
        g._m = self._m
        g._deg = list(self._deg)
        g._inc = None if self._inc is None else [set(s) for s in self._inc]
        return g

    def to_multigraph(self) -> MultiGraph:
        g = MultiGraph.copy(self)
        g.__class__ = MultiGraph
        return g

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(order={self._order}, edges={self._m})"

    # ------------------------------------------------------------------
    # internal mutation, only ever applied to an owned copy
    # ------------------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n) or not self._present[v]:
            raise BadVertex(f"vertex {v} is not in the graph")

    def _incidence(self) -> list[set[int]]:
        if self._inc is None:
            inc: list[set[int]] = [set() for _ in range(self.n)]
            ids, us, vs = self.live_arrays()
            for e, a, b in zip(ids.tolist(), us.tolist(), vs.tolist()):
                inc[a].add(e)
                inc[b].add(e)
            self._inc = inc
        return self._inc

    def _add_edge(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        e = len(self._alive)
        self._ends.append(u)
        self._ends.append(v)
        self._alive.append(1)
        self._m += 1
        self._deg[u] += 1
        self._deg[v] += 1
        if self._inc is not None:
            self._inc[u].add(e)
            self._inc[v].add(e)
        return e

    def _remove_edge(self, e: int) -> None:
        u, v = self.ends(e)
        self._alive[e] = 0
        self._m -= 1
        self._deg[u] -= 1
        self._deg[v] -= 1
        if self._inc is not None:
            self._inc[u].discard(e)
            self._inc[v].discard(e)

    def _remove_vertex(self, v: int) -> None:
        self._check_vertex(v)
        for e in list(self.incident(v)):
            self._remove_edge(e)
        self._present[v] = 0
        self._order -= 1


class SimpleGraph(MultiGraph):
    """A MultiGraph that is checked to have no loops and no parallel edges."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        super().__init__(n, edges)
        self._validate()

    def _after_bulk_load(self) -> None:
        self._validate()

    def _validate(self) -> None:
        if not self.is_simple():
            raise NotSimple("graph has a loop or a parallel edge")

    @classmethod
    def from_multigraph(cls, g: MultiGraph) -> SimpleGraph:
        """Same vertices and edge ids, checked for simplicity."""
        s = MultiGraph.copy(g)
        s.__class__ = cls
        s._validate()
        return s

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.edges_between(u, v))

    def edge_id(self, u: int, v: int) -> int:
        found = self.edges_between(u, v)
        if not found:
            raise BadEdge(f"no edge between {u} and {v}")
        return found[0]


def as_simple(g: MultiGraph) -> SimpleGraph:
    return g if isinstance(g, SimpleGraph) else SimpleGraph.from_multigraph(g)


# ----------------------------------------------------------------------
# split traces
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SplitRecord:
    """One vertex split: which incident edges were paired, which were dropped.

    ``pairs`` holds ``(e1, e2, new_edge)`` triples.  ``ends`` remembers the
    endpoints of every edge the record mentions, so a trace can be replayed
    without the intermediate graphs.
    """

    vertex: int
    pairs: tuple[tuple[int, int, int], ...]
    deleted: tuple[int, ...]
    ends: dict[int, tuple[int, int]] = field(compare=False)


@dataclass
class SplitTrace:
    records: list[SplitRecord] = field(default_factory=list)

    def append(self, record: SplitRecord) -> None:
        self.records.append(record)

    def extend(self, other: SplitTrace) -> None:
        self.records.extend(other.records)

    def parents(self) -> dict[int, tuple[int, int, int]]:
        """Replacement edge id -> ``(e1, e2, split vertex)``."""
        out = {}
        for rec in self.records:
            for e1, e2, new in rec.pairs:
                out[new] = (e1, e2, rec.vertex)
        return out

    def __len__(self) -> int:
        return len(self.records)


def _shared_vertex(g: MultiGraph, e1: int, e2: int, at: int | None) -> int:
    a1, b1 = g.ends(e1)
    a2, b2 = g.ends(e2)
    common = {a1, b1} & {a2, b2}
    if not common:
        raise NotAdjacentEdges(f"edges {e1} and {e2} share no endpoint")
    if at is not None:
        if at not in common:
            raise NotAdjacentEdges(f"edges {e1} and {e2} do not meet at {at}")
        return at
    if len(common) > 1:
        raise InvalidInput(f"edges {e1} and {e2} meet twice; pass at=")
    return common.pop()


def _split_off_inplace(g: MultiGraph, e1: int, e2: int, at: int | None = None) -> int:
    if e1 == e2:
        raise SameEdge(f"cannot split edge {e1} off with itself")
    v = _shared_vertex(g, e1, e2, at)
    u = g.other_end(e1, v)
    w = g.other_end(e2, v)
    g._remove_edge(e1)
    g._remove_edge(e2)
    return g._add_edge(u, w)


def split_off(g: MultiGraph, e1: int, e2: int, at: int | None = None) -> MultiGraph:
    """Replace ``e1 = uv`` and ``e2 = vw`` by a new edge ``uw``.

    The new edge gets id ``g.capacity``.  When the two edges are parallel the
    meeting vertex is ambiguous and must be passed as ``at``.
    """
    out = g.to_multigraph()
    _split_off_inplace(out, e1, e2, at)
    return out


def _split_vertex_inplace(
    g: MultiGraph, v: int, pairing: Sequence[tuple[int, int]], deleted: Iterable[int]
) -> SplitRecord:
    incident = g.incident(v)
    deleted = tuple(deleted)
    seen: set[int] = set()
    for e in [e for pair in pairing for e in pair] + list(deleted):
        if e not in incident:
            raise BadPartition(f"edge {e} is not incident with vertex {v}")
        if e in seen:
            raise BadPartition(f"edge {e} assigned twice")
        seen.add(e)
    if len(seen) != len(incident):
        missing = sorted(incident - seen)
        raise BadPartition(f"edges {missing} at vertex {v} are unassigned")

    ends = {e: g.ends(e) for e in incident}
    pairs = []
    for e1, e2 in pairing:
        x = g.other_end(e1, v)
        y = g.other_end(e2, v)
        if x == v or y == v:
            raise BadPartition(f"loop at {v} must be deleted, not paired")
        new = g._add_edge(x, y)
        ends[new] = (x, y)
        pairs.append((e1, e2, new))
    g._remove_vertex(v)
    return SplitRecord(v, tuple(pairs), deleted, ends)


def split_vertex(
    g: MultiGraph, v: int, pairing: Sequence[tuple[int, int]], deleted: Iterable[int] = ()
) -> tuple[MultiGraph, SplitRecord]:
    """Split off every pair in ``pairing`` at ``v``, drop ``deleted``, remove ``v``."""
    out = g.to_multigraph()
    rec = _split_vertex_inplace(out, v, pairing, deleted)
    return out, rec


def _greedy_complement_matching(g: MultiGraph, nbrs: list[int]) -> list[tuple[int, int]]:
    """Maximal matching of non-adjacent pairs, greedy in vertex-index order."""
    nbrs = sorted(nbrs)
    adj = {x: g.neighbors(x) for x in nbrs}
    matched: set[int] = set()
    out = []
    for i, x in enumerate(nbrs):
        if x in matched:
            continue
        for y in nbrs[i + 1:]:
            if y not in matched and y not in adj[x]:
                out.append((x, y))
                matched.update((x, y))
                break
    return out


def split_min_degree_vertex(g: SimpleGraph, u: int) -> tuple[SimpleGraph, SplitRecord]:
    """Split ``u`` so the result stays simple and loses little average degree.

    Neighbours of ``u`` that are non-adjacent are paired greedily; ``u``'s
    edges to the unpaired neighbours (a clique) are deleted.  If the graph has
    no ``K_q`` the average degree drops by at most ``(q-2)/(n-1)``.
    """
    g = as_simple(g)
    if g.order < 2:
        raise PreconditionViolated("need at least two vertices")
    if Fraction(g.degree(u)) > average_degree(g):
        raise PreconditionViolated(f"deg({u}) exceeds the average degree")
    matching = _greedy_complement_matching(g, list(g.neighbors(u)))
    eid = {g.other_end(e, u): e for e in g.incident(u)}
    pairing = [(eid[x], eid[y]) for x, y in matching]
    used = {x for pair in matching for x in pair}
    deleted = sorted(eid[x] for x in eid if x not in used)
    out = g.copy()
    rec = _split_vertex_inplace(out, u, pairing, deleted)
    return SimpleGraph.from_multigraph(out), rec


# ----------------------------------------------------------------------
# derived graphs and statistics
# ----------------------------------------------------------------------


def complement(g: SimpleGraph) -> SimpleGraph:
    """Complement on the present vertices; absent vertices stay absent."""
    g = as_simple(g)
    present = np.frombuffer(bytes(g._present), dtype=np.uint8).astype(bool)
    adj = g.adjacency_matrix(np.uint8) > 0
    mask = ~adj & present[:, None] & present[None, :]
    iu, ju = np.nonzero(np.triu(mask, k=1))
    out = SimpleGraph.from_arrays(g.n, iu, ju)
    for v in range(g.n):
        if not present[v]:
            out._present[v] = 0
            out._order -= 1
    return out


class InducedSubgraph(NamedTuple):
    graph: MultiGraph
    vertices: list[int]  # new index -> original vertex
    edge_ids: list[int]  # new edge id -> original edge id


def induced_subgraph(g: MultiGraph, S: Iterable[int]) -> InducedSubgraph:
    """Edges with both ends in ``S``, relabelled to ``0 .. |S|-1`` in sorted order."""
    verts = sorted(set(S))
    for v in verts:
        if not g.has_vertex(v):
            raise BadVertex(f"vertex {v} is not in the graph")
    index = np.full(g.n, -1, dtype=np.int64)
    index[verts] = np.arange(len(verts))
    ids, us, vs = g.live_arrays()
    keep = (index[us] >= 0) & (index[vs] >= 0) if len(ids) else np.zeros(0, dtype=bool)
    cls = SimpleGraph if isinstance(g, SimpleGraph) else MultiGraph
    sub = cls.from_arrays(len(verts), index[us[keep]], index[vs[keep]])
    return InducedSubgraph(sub, verts, ids[keep].tolist())


def codegree(g: MultiGraph, u: int, v: int) -> int:
    if u == v:
        raise SameVertex("codegree needs two distinct vertices")
    return len(g.neighbors(u) & g.neighbors(v))


def max_cut_bipartition(g: MultiGraph) -> tuple[list[int], list[int]]:
    """Local-search max cut: sweep vertices in index order, moving any vertex
    whose move increases the cut, until a full sweep makes no move.

    At a local optimum every vertex has at least half its non-loop edges
    crossing, so at least half of all non-loop edges cross.
    """
    adj = g.adjacency_matrix(np.int64)
    np.fill_diagonal(adj, 0)
    side = np.zeros(g.n, dtype=bool)
    # same[v] = edges from v to its own side
    same = adj.sum(axis=1)
    cross = np.zeros(g.n, dtype=np.int64)
    verts = g.vertices()
    moved = True
    while moved:
        moved = False
        for v in verts:
            if same[v] > cross[v]:
                row = adj[v]
                # neighbours on v's old side now see v across, and vice versa
                on_old = side == side[v]
                delta = np.where(on_old, -row, row)
                same += delta
                cross -= delta
                side[v] = not side[v]
                same[v], cross[v] = cross[v], same[v]
                moved = True
    A = [v for v in verts if not side[v]]
    B = [v for v in verts if side[v]]
    return A, B


def cut_size(g: MultiGraph, A: Iterable[int]) -> int:
    inside = set(A)
    return sum(1 for _, u, v in g.edges() if (u in inside) != (v in inside))


def average_degree(g: MultiGraph) -> Fraction:
    if g.order == 0:
        return Fraction(0)
    return Fraction(2 * g.num_edges, g.order)


@dataclass(frozen=True)
class GraphStats:
    min_degree: int
    avg_degree: Fraction
    is_all_degrees_even: bool
    edge_count: int


def basic_stats(g: MultiGraph) -> GraphStats:
    degs = [g._deg[v] for v in g.vertices()]
    return GraphStats(
        min_degree=min(degs) if degs else 0,
        avg_degree=average_degree(g),
        is_all_degrees_even=all(d % 2 == 0 for d in degs),
        edge_count=g.num_edges,
    )


# ----------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------


def parse_graph(text: str) -> MultiGraph:
    """Parse ``p <n> <m>`` / ``e <u> <v>`` text; returns a SimpleGraph when possible."""
    n = m = None
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "p":
                if n is not None:
                    raise GraphFormatError(f"line {lineno}: second problem line")
                n, m = int(parts[1]), int(parts[2])
            elif parts[0] == "e":
                if n is None:
                    raise GraphFormatError(f"line {lineno}: edge before problem line")
                us.append(int(parts[1]))
                vs.append(int(parts[2]))
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise GraphFormatError(f"line {lineno}: malformed {raw!r}") from exc
    if n is None:
        raise GraphFormatError("missing problem line")
    if len(us) != m:
        raise GraphFormatError(f"problem line declares {m} edges, found {len(us)}")
    try:
        g = MultiGraph.from_arrays(n, us, vs)
    except BadVertex as exc:
        raise GraphFormatError(str(exc)) from exc
    return SimpleGraph.from_multigraph(g) if g.is_simple() else g


def read_graph(path) -> MultiGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g: MultiGraph, comment: str | None = None) -> str:
    """Live edges in id order.  Edge ids are renumbered by position on reload,
    so graphs with tombstoned edges or removed vertices are rejected."""
    if g.capacity != g.num_edges or g.order != g.n:
        raise InvalidInput("graph has removed edges or vertices; ids would not round-trip")
    ends = g.ends_array()
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    lines.append(f"p {g.n} {g.num_edges}")
    lines.extend(f"e {a} {b}" for a, b in ends.tolist())
    return "\n".join(lines) + "\n"


def write_graph(g: MultiGraph, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g, comment))
