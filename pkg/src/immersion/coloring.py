"""Proper edge colourings: Misra-Gries (Vizing bound) and round-robin for cliques."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import MultiGraph, SimpleGraph, as_simple


@dataclass(frozen=True)
class EdgeColoring:
    colors: dict[int, int]  # edge id -> colour index
    color_count: int

    def is_proper(self, g: MultiGraph) -> bool:
        seen: set[tuple[int, int]] = set()
        for e, c in self.colors.items():
            for v in set(g.ends(e)):
                if (v, c) in seen:
                    return False
                seen.add((v, c))
        return True


def misra_gries(n: int, edges: list[tuple[int, int]]) -> list[int]:
    """Colour simple-graph ``edges`` with at most max-degree + 1 colours.

    Returns the colour of each edge, in input order.  Edges are coloured one at
    a time: build a maximal fan at ``u``, flip the alternating cd-path from
    ``u``, rotate the fan prefix, colour the last fan edge with ``d``.
    """
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    palette = range(max(deg, default=0) + 1)
    # at[x][c] = the neighbour y such that edge xy has colour c
    at: list[dict[int, int]] = [{} for _ in range(n)]
    color: dict[tuple[int, int], int] = {}

    def key(x, y):
        return (x, y) if x < y else (y, x)

    def paint(x, y, c):
        color[key(x, y)] = c
        at[x][c] = y
        at[y][c] = x

    def erase(x, y):
        c = color.pop(key(x, y))
        del at[x][c]
        del at[y][c]
        return c

    def free(x):
        for c in palette:
            if c not in at[x]:
                return c
        raise AssertionError("no free colour; degree bound broken")

    for u, v in edges:
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            nxt = None
            for c in sorted(at[u]):
                y = at[u][c]
                if y not in in_fan and c not in at[last]:
                    nxt = y
                    break
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)

        c = free(u)
        d = free(fan[-1])
        if c != d:
            path = []
            x, want = u, d
            while want in at[x]:
                y = at[x][want]
                path.append((x, y))
                x = y
                want = c if want == d else d
            old = [erase(a, b) for a, b in path]
            for (a, b), oc in zip(path, old):
                paint(a, b, c if oc == d else d)

        # first fan vertex w with d free whose prefix is still a fan
        stop = None
        for i, w in enumerate(fan):
            if i > 0:
                cprev = color.get(key(u, w))
                if cprev is None or cprev in at[fan[i - 1]]:
                    break
            if d not in at[w]:
                stop = i
                break
        if stop is None:
            raise AssertionError("fan rotation failed")
        shifted = [erase(u, fan[j]) for j in range(1, stop + 1)]
        for j in range(stop):
            paint(u, fan[j], shifted[j])
        paint(u, fan[stop], d)

    if palette:
        _drop_top_color(len(palette) - 1, at, color, paint, erase)
    return [color[key(u, v)] for u, v in edges]


def _drop_top_color(top, at, color, paint, erase) -> None:
    """Best-effort: recolour edges of colour ``top`` with lower colours via
    Kempe swaps, so graphs of class 1 usually end with Δ colours."""
    for (u, v) in sorted(k for k, c in color.items() if c == top):
        low = range(top)
        common = [c for c in low if c not in at[u] and c not in at[v]]
        if common:
            erase(u, v)
            paint(u, v, common[0])
            continue
        a = next((c for c in low if c not in at[u]), None)
        b = next((c for c in low if c not in at[v]), None)
        if a is None or b is None:
            continue
        # a is free at u and used at v; flip the a/b chain leaving v
        chain, x, want = [], v, a
        while want in at[x]:
            y = at[x][want]
            chain.append((x, y))
            x = y
            want = b if want == a else a
        if x == u or any(u in pair for pair in chain):
            continue
        old = [erase(x, y) for x, y in chain]
        for (x, y), oc in zip(chain, old):
            paint(x, y, b if oc == a else a)
        erase(u, v)
        paint(u, v, a)


def vizing_edge_coloring(g: SimpleGraph) -> EdgeColoring:
    """Proper colouring with at most Δ+1 colours, edges processed in id order."""
    g = as_simple(g)
    ids, edges = [], []
    for e, u, v in g.edges():
        ids.append(e)
        edges.append((u, v))
    cols = misra_gries(g.n, edges)
    mapping = dict(zip(ids, cols))
    return EdgeColoring(mapping, len(set(cols)))


def round_robin_pairs(a: int) -> dict[tuple[int, int], int]:
    """Circle-method 1-factorization: colour of each pair ``(i, j)``, ``i < j``.

    Uses ``a - 1`` colours for even ``a`` and ``a`` colours for odd ``a``
    (a phantom vertex is added and its partners go uncoloured).
    """
    if a <= 1:
        return {}
    N = a if a % 2 == 0 else a + 1
    out = {}
    m = N - 1
    for r in range(m):
        pairs = [(N - 1, r)]
        for i in range(1, N // 2):
            pairs.append(((r + i) % m, (r - i) % m))
        for x, y in pairs:
            if x < a and y < a:
                out[(min(x, y), max(x, y))] = r
    return out


def complete_graph(n: int) -> SimpleGraph:
    """K_n with edge ids assigned to pairs in lexicographic order."""
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def clique_edge_coloring(a: int) -> EdgeColoring:
    if a < 1:
        raise ValueError("a must be at least 1")
    pairs = round_robin_pairs(a)
    k = complete_graph(a)
    mapping = {k.edge_id(i, j): c for (i, j), c in pairs.items()}
    return EdgeColoring(mapping, len(set(mapping.values())))
