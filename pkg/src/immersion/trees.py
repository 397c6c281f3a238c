"""Global minimum edge cuts and edge-disjoint spanning-tree packing."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import Disconnected, InternalContradiction
from .graph import MultiGraph


def stoer_wagner(W: np.ndarray) -> tuple[int, np.ndarray]:
    """Minimum cut of a symmetric non-negative weight matrix.

    Returns ``(value, side)`` with ``side`` a boolean mask of one shore.  Ties
    in the maximum-adjacency order go to the lowest index, and the first
    minimum phase cut wins.
    """
    W = np.array(W, dtype=np.int64)
    n = len(W)
    if n < 2:
        raise ValueError("need at least two vertices")
    np.fill_diagonal(W, 0)
    active = np.ones(n, dtype=bool)
    members = [[i] for i in range(n)]
    best_val, best_side = None, None
    for _ in range(n - 1):
        avail = active.copy()
        start = int(np.flatnonzero(active)[0])
        avail[start] = False
        weight = W[start].copy()
        order = [start]
        cut = 0
        for _ in range(int(avail.sum())):
            z = int(np.where(avail, weight, -1).argmax())
            cut = int(weight[z])
            order.append(z)
            avail[z] = False
            weight += W[z]
        s, t = order[-2], order[-1]
        if best_val is None or cut < best_val:
            best_val = cut
            best_side = np.zeros(n, dtype=bool)
            best_side[members[t]] = True
        # merge t into s
        W[s] += W[t]
        W[:, s] += W[:, t]
        W[s, s] = 0
        W[t] = 0
        W[:, t] = 0
        active[t] = False
        members[s].extend(members[t])
    return best_val, best_side


def is_connected(g: MultiGraph, verts: Iterable[int] | None = None) -> bool:
    verts = set(g.vertices() if verts is None else verts)
    if not verts:
        return True
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in verts and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def min_edge_cut(g: MultiGraph) -> tuple[int, frozenset[int]]:
    """Global minimum edge cut; the reported side is the smaller shore."""
    verts = g.vertices()
    if len(verts) < 2:
        raise ValueError("need at least two vertices")
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    W = g.adjacency_matrix(np.int64)[np.ix_(verts, verts)]
    value, side = stoer_wagner(W)
    shore = [verts[i] for i in np.flatnonzero(side)]
    if 2 * len(shore) > len(verts):
        shore = sorted(set(verts) - set(shore))
    return value, frozenset(shore)


# ----------------------------------------------------------------------
# tree packing by matroid union
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TreePacking:
    vertices: frozenset[int]
    k: int
    trees: tuple[frozenset[int], ...] | None = None
    partition: tuple[frozenset[int], ...] | None = None
    crossing: int | None = None

    @property
    def found(self) -> bool:
        return self.trees is not None


class _Forests:
    """``k`` edge-disjoint forests with path queries by BFS inside a forest."""

    def __init__(self, g: MultiGraph, k: int):
        self.g = g
        self.k = k
        self.adj: list[dict[int, dict[int, int]]] = [dict() for _ in range(k)]
        self.owner: dict[int, int] = {}
        self.size = [0] * k

    def add(self, e: int, i: int) -> None:
        a, b = self.g.ends(e)
        self.adj[i].setdefault(a, {})[e] = b
        self.adj[i].setdefault(b, {})[e] = a
        self.owner[e] = i
        self.size[i] += 1

    def remove(self, e: int) -> None:
        i = self.owner.pop(e)
        a, b = self.g.ends(e)
        del self.adj[i][a][e]
        del self.adj[i][b][e]
        self.size[i] -= 1

    def path(self, i: int, x: int, y: int) -> list[int] | None:
        """Edge ids on the forest-``i`` path from x to y, or None if disconnected."""
        if x == y:
            return []
        adj = self.adj[i]
        if x not in adj or y not in adj:
            return None
        back = {x: None}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            for e, w in adj[v].items():
                if w not in back:
                    back[w] = (v, e)
                    if w == y:
                        out = []
                        while back[w] is not None:
                            w, e2 = back[w]
                            out.append(e2)
                        return out
                    queue.append(w)
        return None


def _search(forests: _Forests, sources: list[int], stop: bool):
    """BFS in the exchange graph from ``sources``.

    Returns ``(label, hit)`` where ``hit = (element, forest)`` if some reached
    element can enter a forest directly, else None.
    """
    g = forests.g
    label: dict[int, tuple[int, int] | None] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        a, b = g.ends(x)
        cur = forests.owner.get(x)
        for i in range(forests.k):
            if i == cur:
                continue
            p = forests.path(i, a, b)
            if p is None:
                if stop:
                    return label, (x, i)
                raise InternalContradiction("independent element left outside the union")
            for y in sorted(p):
                if y not in label:
                    label[y] = (x, i)
                    queue.append(y)
    return label, None


def _insert(forests: _Forests, e: int) -> bool:
    a, b = forests.g.ends(e)
    if a == b:
        return False
    label, hit = _search(forests, [e], stop=True)
    if hit is None:
        return False
    cur, target = hit
    while True:
        old = forests.owner.get(cur)
        if old is not None:
            forests.remove(cur)
        forests.add(cur, target)
        if label[cur] is None:
            return True
        prev, via = label[cur]
        if via != old:
            raise InternalContradiction("exchange chain inconsistent")
        cur, target = prev, old


def tree_packing(g: MultiGraph, k: int, vertices: Iterable[int] | None = None) -> TreePacking:
    """``k`` edge-disjoint spanning trees of ``g[vertices]`` or a partition
    witnessing that none exist (fewer than ``k(t-1)`` crossing edges).

    Edges are inserted in id order into ``k`` forests by shortest augmenting
    paths in the matroid-union exchange graph.
    """
    verts = sorted(g.vertices() if vertices is None else set(vertices))
    vset = set(verts)
    edges = [e for e, u, v in g.edges() if u in vset and v in vset and u != v]
    if k <= 0:
        return TreePacking(frozenset(verts), k, trees=())
    forests = _Forests(g, k)
    left_out = [e for e in edges if not _insert(forests, e)]
    need = len(verts) - 1
    if all(s == need for s in forests.size):
        trees = [set() for _ in range(k)]
        for e, i in forests.owner.items():
            trees[i].add(e)
        return TreePacking(frozenset(verts), k, trees=tuple(frozenset(t) for t in trees))

    # union rank = |E \ R| + k * rank(R) with R the reachable set, so the
    # components of (V, R) have fewer than k(t-1) crossing edges
    reach = set()
    if left_out:
        label, _ = _search(forests, left_out, stop=False)
        reach = set(label)
    comp = {v: v for v in verts}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for e in reach:
        a, b = g.ends(e)
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[max(ra, rb)] = min(ra, rb)
    blocks: dict[int, set[int]] = {}
    for v in verts:
        blocks.setdefault(find(v), set()).add(v)
    crossing = 0
    for e in edges:
        a, b = g.ends(e)
        if find(a) != find(b):
            crossing += 1
    parts = tuple(frozenset(blocks[r]) for r in sorted(blocks))
    if not (len(parts) >= 2 and crossing < k * (len(parts) - 1)):
        raise InternalContradiction("tree-packing witness failed to verify")
    return TreePacking(frozenset(verts), k, partition=parts, crossing=crossing)


def check_tree_packing(g: MultiGraph, packing: TreePacking) -> bool:
    """Independent check of either outcome."""
    verts = set(packing.vertices)
    if packing.trees is not None:
        if len(packing.trees) != packing.k:
            return False
        used: set[int] = set()
        for tree in packing.trees:
            if used & tree or len(tree) != len(verts) - 1:
                return False
            used |= tree
            parent = {v: v for v in verts}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for e in tree:
                a, b = g.ends(e)
                if a not in verts or b not in verts:
                    return False
                ra, rb = find(a), find(b)
                if ra == rb:
                    return False
                parent[ra] = rb
        return True
    blocks = packing.partition or ()
    where = {}
    for i, blk in enumerate(blocks):
        for v in blk:
            where[v] = i
    if set(where) != verts or len(blocks) < 2:
        return False
    crossing = sum(
        1 for _, a, b in g.edges() if a in verts and b in verts and where[a] != where[b]
    )
    return crossing == packing.crossing and crossing < packing.k * (len(blocks) - 1)
