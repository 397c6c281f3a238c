"""Immersion and line-graph clique-minor certificates.

An immersion certificate stores one host path per unordered pattern pair
``(i, j)``, ``i < j``, as a sequence of edge ids walked from ``branch[i]``
to ``branch[j]``.  Paths are kept in flat arrays (``offsets`` into
``edges``, pairs in lexicographic order) so certificates for cliques with
millions of pairs stay compact and can be verified with vectorized passes.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CertificateFormatError, DigestMismatch, InvalidInput, TraceMismatch
from .graph import InducedSubgraph, MultiGraph, SplitTrace

MAX_FAILURES = 200


def num_pairs(t: int) -> int:
    return t * (t - 1) // 2


def pair_index(i: int, j: int, t: int) -> int:
    if i > j:
        i, j = j, i
    return i * t - i * (i + 1) // 2 + (j - i - 1)


def pair_arrays(t: int) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically ordered ``(I, J)`` with ``I < J``."""
    return np.triu_indices(t, k=1)


@dataclass(frozen=True, eq=False)
class ImmersionCertificate:
    host_digest: str
    t: int
    branch: np.ndarray
    offsets: np.ndarray
    edges: np.ndarray
    strong: bool = False
    k: int | None = None

    @classmethod
    def from_paths(
        cls,
        host_digest: str,
        branch: Sequence[int],
        paths: Mapping[tuple[int, int], Sequence[int]],
        strong: bool = False,
        k: int | None = None,
    ) -> ImmersionCertificate:
        """Build from ``{(i, j): edge ids walked from branch[i] to branch[j]}``.

        A key ``(j, i)`` with ``j > i`` is accepted and its path reversed.
        """
        t = len(branch)
        table: list[Sequence[int] | None] = [None] * num_pairs(t)
        for (i, j), path in paths.items():
            if not (0 <= i < t and 0 <= j < t) or i == j:
                raise InvalidInput(f"bad pattern pair {(i, j)}")
            path = list(path) if i < j else list(reversed(path))
            table[pair_index(i, j, t)] = path
        missing = [p for p, path in enumerate(table) if path is None]
        if missing:
            raise InvalidInput(f"{len(missing)} pattern pairs have no path")
        lengths = np.fromiter((len(p) for p in table), dtype=np.int64, count=len(table))
        offsets = np.zeros(len(table) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        flat = np.fromiter(
            (e for p in table for e in p), dtype=np.int64, count=int(offsets[-1])
        )
        return cls(host_digest, t, np.asarray(branch, dtype=np.int64), offsets, flat, strong, k)

    @property
    def order(self) -> int:
        return self.t

    def path(self, i: int, j: int) -> list[int]:
        """Edge ids oriented from ``branch[i]`` to ``branch[j]``."""
        p = pair_index(i, j, self.t)
        out = self.edges[self.offsets[p]:self.offsets[p + 1]].tolist()
        return out if i < j else out[::-1]

    def paths(self) -> Iterator[tuple[tuple[int, int], list[int]]]:
        I, J = pair_arrays(self.t)
        for p, (i, j) in enumerate(zip(I.tolist(), J.tolist())):
            yield (i, j), self.edges[self.offsets[p]:self.offsets[p + 1]].tolist()

    def path_dict(self) -> dict[tuple[int, int], list[int]]:
        return dict(self.paths())

    def with_flags(self, strong: bool | None = None, k: int | None | str = "keep"):
        return ImmersionCertificate(
            self.host_digest,
            self.t,
            self.branch,
            self.offsets,
            self.edges,
            self.strong if strong is None else strong,
            self.k if k == "keep" else k,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImmersionCertificate):
            return NotImplemented
        return (
            self.host_digest == other.host_digest
            and self.t == other.t
            and self.strong == other.strong
            and self.k == other.k
            and np.array_equal(self.branch, other.branch)
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.edges, other.edges)
        )

    __hash__ = None


@dataclass(frozen=True)
class LineMinorCertificate:
    host_digest: str
    parts: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.parts)


# ----------------------------------------------------------------------
# verification
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    kind: str
    message: str
    pair: tuple[int, int] | None = None
    edge: int | None = None


@dataclass
class VerificationReport:
    valid: bool
    strong: bool
    k_uniform: int | None
    order: int
    failures: list[Failure] = field(default_factory=list)
    failure_count: int = 0

    def kinds(self) -> set[str]:
        return {f.kind for f in self.failures}


class _Failures:
    def __init__(self):
        self.items: list[Failure] = []
        self.count = 0

    def add(self, kind, message, pair=None, edge=None):
        self.count += 1
        if len(self.items) < MAX_FAILURES:
            self.items.append(Failure(kind, message, pair, edge))


def _pair_of(p: int, I: np.ndarray, J: np.ndarray) -> tuple[int, int]:
    return int(I[p]), int(J[p])


def verify_immersion(g: MultiGraph, cert: ImmersionCertificate) -> VerificationReport:
    """Check every certificate invariant; ``strong`` and ``k_uniform`` are
    computed from the paths and then compared with the declared flags.

    Failure kinds: BadBranch, BadTable, EmptyPath, BadEdge, EdgeReuse,
    BadPath (not a walk or wrong endpoint), NotSimple, NotStrong, WrongK.
    """
    if cert.host_digest != g.digest():
        raise DigestMismatch("certificate was issued for a different host graph")
    fails = _Failures()
    t = cert.t
    branch = np.asarray(cert.branch, dtype=np.int64)

    def done(strong, k_uniform):
        return VerificationReport(
            fails.count == 0, strong, k_uniform, t, fails.items, fails.count
        )

    if len(branch) != t or t < 0:
        fails.add("BadBranch", "branch map length differs from t")
        return done(False, None)
    for v in branch.tolist():
        if not g.has_vertex(v):
            fails.add("BadBranch", f"branch vertex {v} is not in the host")
    if len(set(branch.tolist())) != t:
        fails.add("BadBranch", "branch map is not injective")
    P = num_pairs(t)
    offsets = np.asarray(cert.offsets, dtype=np.int64)
    edges = np.asarray(cert.edges, dtype=np.int64)
    if (
        len(offsets) != P + 1
        or offsets[0] != 0
        or offsets[-1] != len(edges)
        or np.any(np.diff(offsets) < 0)
    ):
        fails.add("BadTable", "path table does not describe one path per pair")
    if fails.count:
        return done(False, None)

    if P == 0:
        return done(True, cert.k)

    I, J = pair_arrays(t)
    lengths = np.diff(offsets)
    ok = np.ones(P, dtype=bool)
    for p in np.flatnonzero(lengths == 0).tolist():
        fails.add("EmptyPath", "path has no edges", _pair_of(p, I, J))
        ok[p] = False

    path_of_slot = np.repeat(np.arange(P), lengths)
    alive = g.alive_array()
    in_range = (edges >= 0) & (edges < len(alive))
    valid_edge = in_range.copy()
    valid_edge[in_range] = alive[edges[in_range]]
    for s in np.flatnonzero(~valid_edge).tolist():
        p = int(path_of_slot[s])
        fails.add("BadEdge", f"edge {int(edges[s])} is not in the host", _pair_of(p, I, J), int(edges[s]))
        ok[p] = False

    if len(edges):
        order = np.argsort(edges, kind="stable")
        srt = edges[order]
        dup = np.flatnonzero(srt[1:] == srt[:-1])
        for d in dup.tolist():
            e = int(srt[d])
            p1, p2 = int(path_of_slot[order[d]]), int(path_of_slot[order[d + 1]])
            where = "the same path" if p1 == p2 else f"pairs {_pair_of(p1, I, J)} and {_pair_of(p2, I, J)}"
            fails.add("EdgeReuse", f"edge {e} used twice ({where})", _pair_of(p2, I, J), e)

    # walk every path position by position
    ends = g.ends_array().astype(np.int64)
    safe_edges = np.where(valid_edge, edges, 0)
    cur = branch[I].copy()
    nverts = lengths + 1
    vstart = offsets[:-1] + np.arange(P)
    vseq = np.empty(int(nverts.sum()), dtype=np.int64)
    vseq[vstart] = cur
    walk_ok = ok.copy()
    max_len = int(lengths.max())
    for step in range(max_len):
        idx = np.flatnonzero((lengths > step) & walk_ok)
        if len(idx) == 0:
            break
        e = safe_edges[offsets[idx] + step]
        a, b = ends[e, 0], ends[e, 1]
        c = cur[idx]
        good = (a == c) | (b == c)
        for p in idx[~good].tolist():
            fails.add(
                "BadPath",
                f"edge {int(edges[offsets[p] + step])} at step {step} does not continue the walk",
                _pair_of(p, I, J),
                int(edges[offsets[p] + step]),
            )
        walk_ok[idx[~good]] = False
        nxt = a + b - c
        cur[idx] = nxt
        vseq[vstart[idx] + step + 1] = nxt
    wrong_end = walk_ok & (cur != branch[J])
    for p in np.flatnonzero(wrong_end).tolist():
        fails.add("BadPath", "walk does not end at the second branch vertex", _pair_of(p, I, J))
    walk_ok &= ~wrong_end

    # vertex simplicity, only needed for paths of length >= 2
    long_paths = np.flatnonzero(walk_ok & (lengths >= 2))
    strong = bool(np.all(walk_ok))
    if len(long_paths):
        pid = np.repeat(long_paths, nverts[long_paths])
        pos = np.concatenate([np.arange(vstart[p], vstart[p] + nverts[p]) for p in long_paths.tolist()]) \
            if len(long_paths) < 2000 else _ranges(vstart[long_paths], nverts[long_paths])
        verts = vseq[pos]
        order = np.lexsort((verts, pid))
        sp, sv = pid[order], verts[order]
        rep = np.flatnonzero((sp[1:] == sp[:-1]) & (sv[1:] == sv[:-1]))
        for r in rep.tolist():
            p = int(sp[r])
            fails.add("NotSimple", f"vertex {int(sv[r])} repeats", _pair_of(p, I, J))
        # internal vertices must avoid the branch set for a strong immersion
        first = np.zeros(len(pos), dtype=bool)
        last = np.zeros(len(pos), dtype=bool)
        starts = np.concatenate([[0], np.cumsum(nverts[long_paths])[:-1]])
        first[starts] = True
        last[starts + nverts[long_paths] - 1] = True
        internal = verts[~first & ~last]
        in_branch = np.zeros(g.n, dtype=bool)
        in_branch[branch] = True
        hit = in_branch[internal]
        if np.any(hit):
            strong = False
            if cert.strong:
                owner = pid[~first & ~last][hit]
                for p, v in list(zip(owner.tolist(), internal[hit].tolist()))[:MAX_FAILURES]:
                    fails.add("NotStrong", f"branch vertex {v} is internal", _pair_of(p, I, J))

    k_uniform = int(lengths[0]) - 1 if np.all(lengths == lengths[0]) else None
    if cert.k is not None and k_uniform != cert.k:
        fails.add("WrongK", f"declared k={cert.k} but paths give k={k_uniform}")
    if fails.count:
        strong = strong and not any(f.kind in ("BadPath", "BadEdge", "EmptyPath") for f in fails.items)
    return done(strong, k_uniform)


def _ranges(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenation of ``arange(s, s + c)`` for each pair, vectorized."""
    total = int(counts.sum())
    rel = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return np.repeat(starts, counts) + rel


@dataclass
class LineMinorReport:
    valid: bool
    order: int
    failures: list[Failure] = field(default_factory=list)


def verify_line_minor(g: MultiGraph, cert: LineMinorCertificate) -> LineMinorReport:
    if cert.host_digest != g.digest():
        raise DigestMismatch("certificate was issued for a different host graph")
    fails = _Failures()
    owner: dict[int, int] = {}
    vmasks = []
    for idx, part in enumerate(cert.parts):
        if not part:
            fails.add("EmptyPart", f"part {idx} has no edges")
            vmasks.append(0)
            continue
        parent: dict[int, int] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        mask = 0
        for e in part:
            if not g.is_alive(e):
                fails.add("BadEdge", f"edge {e} of part {idx} is not in the host", edge=e)
                continue
            if e in owner:
                fails.add("EdgeReuse", f"edge {e} in parts {owner[e]} and {idx}", edge=e)
            owner[e] = idx
            a, b = g.ends(e)
            for v in (a, b):
                parent.setdefault(v, v)
                mask |= 1 << v
            parent[find(a)] = find(b)
        if len({find(v) for v in parent}) > 1:
            fails.add("Disconnected", f"part {idx} is not connected")
        vmasks.append(mask)
    for i in range(len(vmasks)):
        for j in range(i + 1, len(vmasks)):
            if not vmasks[i] & vmasks[j]:
                fails.add("Disjoint", f"parts {i} and {j} share no vertex")
    return LineMinorReport(fails.count == 0, len(cert.parts), fails.items)


# ----------------------------------------------------------------------
# walks, normalization, lifting, relabelling
# ----------------------------------------------------------------------


def walk_vertices(g_ends, start: int, edges: Sequence[int]) -> list[int]:
    """Vertex sequence of the walk; ``g_ends(e)`` gives the endpoints of ``e``."""
    out = [start]
    cur = start
    for e in edges:
        a, b = g_ends(e)
        if a == cur:
            cur = b
        elif b == cur:
            cur = a
        else:
            raise InvalidInput(f"edge {e} does not continue the walk at {cur}")
        out.append(cur)
    return out


def excise_cycles(vertices: Sequence[int], edges: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduce a walk to a path by cutting out the closed subwalk at each first
    repeated vertex, scanning left to right."""
    vs = [vertices[0]]
    es: list[int] = []
    pos = {vertices[0]: 0}
    for e, v in zip(edges, vertices[1:]):
        if v in pos:
            cut = pos[v]
            for dropped in vs[cut + 1:]:
                del pos[dropped]
            del vs[cut + 1:]
            del es[cut:]
        else:
            pos[v] = len(vs)
            vs.append(v)
            es.append(e)
    return vs, es


def normalize_certificate(g: MultiGraph, cert: ImmersionCertificate) -> ImmersionCertificate:
    """Route every adjacent branch pair along a direct edge.

    If ``v`` and ``w`` are adjacent but ``P_vw`` is longer, take an edge
    ``vw``; if another path used it, splice the old ``P_vw`` into that path in
    its place and cut the result back down to a path.  Edge-disjointness and
    strength are preserved.
    """
    report = verify_immersion(g, cert)
    if not report.valid:
        raise InvalidInput("certificate is not valid on this host")
    t = cert.t
    branch = cert.branch.tolist()
    paths = cert.path_dict()
    user = {e: pair for pair, p in paths.items() for e in p}
    changed = False
    for i in range(t):
        for j in range(i + 1, t):
            v, w = branch[i], branch[j]
            direct = g.edges_between(v, w)
            if not direct or len(paths[(i, j)]) == 1:
                continue
            changed = True
            free = [e for e in direct if e not in user]
            old = paths[(i, j)]
            if free:
                e = free[0]
                for x in old:
                    del user[x]
            else:
                e = direct[0]
                other = user[e]
                host = paths[other]
                spot = host.index(e)
                a = other[0]
                verts = walk_vertices(g.ends, branch[a], host)
                # orient the displaced path the way the host walk crossed e
                insert = old if verts[spot] == v else old[::-1]
                new = host[:spot] + insert + host[spot + 1:]
                nv = walk_vertices(g.ends, branch[a], new)
                _, new = excise_cycles(nv, new)
                for x in host:
                    user.pop(x, None)
                for x in old:
                    user.pop(x, None)
                paths[other] = new
                for x in new:
                    user[x] = other
            paths[(i, j)] = [e]
            user[e] = (i, j)
    if not changed:
        return cert
    return ImmersionCertificate.from_paths(cert.host_digest, branch, paths, cert.strong, None)


def lift_certificate(
    cert: ImmersionCertificate,
    trace: SplitTrace,
    g_original: MultiGraph,
    g_split: MultiGraph | None = None,
) -> ImmersionCertificate:
    """Undo the splits in ``trace``: each replacement edge ``uw`` expands back
    into its two parents ``uv, vw``, recursively, and the resulting walks are
    cut down to paths.  Branch vertices are never split, so strength carries
    over.
    """
    if g_split is not None and cert.host_digest != g_split.digest():
        raise TraceMismatch("certificate does not belong to the split graph")
    parents = trace.parents()
    known: dict[int, tuple[int, int]] = {}
    for rec in trace.records:
        known.update(rec.ends)

    def ends_of(e: int) -> tuple[int, int]:
        if e in known:
            return known[e]
        if g_split is not None and g_split.is_alive(e):
            return g_split.ends(e)
        if g_original.is_alive(e):
            return g_original.ends(e)
        raise TraceMismatch(f"edge {e} is unknown to the trace and both graphs")

    branch = cert.branch.tolist()
    lifted = {}
    for (i, j), path in cert.paths():
        cur = branch[i]
        out_edges: list[int] = []
        out_verts = [cur]
        stack = list(reversed(path))
        while stack:
            e = stack.pop()
            a, b = ends_of(e)
            if cur not in (a, b):
                raise TraceMismatch(f"edge {e} does not continue the walk at {cur}")
            if e in parents:
                e1, e2, v = parents[e]
                x1 = _other(ends_of(e1), v)
                first, second = (e1, e2) if x1 == cur else (e2, e1)
                stack.append(second)
                stack.append(first)
                continue
            if not g_original.is_alive(e) or g_original.ends(e) != (a, b):
                raise TraceMismatch(f"edge {e} is not an edge of the original graph")
            cur = b if a == cur else a
            out_edges.append(e)
            out_verts.append(cur)
        _, es = excise_cycles(out_verts, out_edges)
        lifted[(i, j)] = es
    return ImmersionCertificate.from_paths(g_original.digest(), branch, lifted, cert.strong, None)


def _other(ends: tuple[int, int], v: int) -> int:
    a, b = ends
    return b if a == v else a


def remap_certificate(
    cert: ImmersionCertificate, sub: InducedSubgraph, host: MultiGraph
) -> ImmersionCertificate:
    """Carry a certificate on an induced subgraph over to the host graph."""
    vmap = np.asarray(sub.vertices, dtype=np.int64)
    emap = np.asarray(sub.edge_ids, dtype=np.int64)
    return ImmersionCertificate(
        host.digest(),
        cert.t,
        vmap[cert.branch] if cert.t else cert.branch.copy(),
        cert.offsets.copy(),
        emap[cert.edges] if len(cert.edges) else cert.edges.copy(),
        cert.strong,
        cert.k,
    )


def restrict_certificate(cert: ImmersionCertificate, indices: Sequence[int]) -> ImmersionCertificate:
    """Sub-immersion on the pattern vertices ``indices`` (in the given order)."""
    idx = list(indices)
    if len(set(idx)) != len(idx) or any(not 0 <= i < cert.t for i in idx):
        raise InvalidInput("indices must be distinct pattern vertices")
    paths = {
        (a, b): cert.path(idx[a], idx[b]) for a in range(len(idx)) for b in range(a + 1, len(idx))
    }
    return ImmersionCertificate.from_paths(
        cert.host_digest, cert.branch[idx].tolist(), paths, cert.strong, cert.k
    )


def single_vertex_certificate(g: MultiGraph, v: int, k: int | None = None) -> ImmersionCertificate:
    return ImmersionCertificate.from_paths(g.digest(), [v], {}, strong=True, k=k)


# ----------------------------------------------------------------------
# JSON documents
# ----------------------------------------------------------------------


def _dump_immersion(cert: ImmersionCertificate, fh) -> None:
    fh.write('{"host_digest": ')
    fh.write(json.dumps(cert.host_digest))
    fh.write(f', "t": {cert.t}, "branch": ')
    fh.write(json.dumps(cert.branch.tolist()))
    fh.write(', "paths": [')
    I, J = pair_arrays(cert.t)
    offs = cert.offsets.tolist()
    flat = cert.edges.tolist()
    chunk = []
    for p, (i, j) in enumerate(zip(I.tolist(), J.tolist())):
        edges = ", ".join(map(str, flat[offs[p]:offs[p + 1]]))
        chunk.append(f'{{"pair": [{i}, {j}], "edges": [{edges}]}}')
        if len(chunk) >= 50000:
            fh.write(", ".join(chunk))
            fh.write(", ")
            chunk = []
    fh.write(", ".join(chunk))
    fh.write('], "strong": ')
    fh.write("true" if cert.strong else "false")
    fh.write(', "k": ')
    fh.write("null" if cert.k is None else str(int(cert.k)))
    fh.write("}\n")


def _dump_line_minor(cert: LineMinorCertificate, fh) -> None:
    doc = {"host_digest": cert.host_digest, "parts": [list(p) for p in cert.parts]}
    fh.write(json.dumps(doc))
    fh.write("\n")


def dump_certificate(cert, fh) -> None:
    if isinstance(cert, ImmersionCertificate):
        _dump_immersion(cert, fh)
    elif isinstance(cert, LineMinorCertificate):
        _dump_line_minor(cert, fh)
    else:
        raise TypeError(f"not a certificate: {type(cert).__name__}")


def dumps_certificate(cert) -> str:
    buf = io.StringIO()
    dump_certificate(cert, buf)
    return buf.getvalue()


def loads_certificate(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(str(exc)) from exc
    if not isinstance(doc, dict) or "host_digest" not in doc:
        raise CertificateFormatError("not a certificate document")
    try:
        if "parts" in doc:
            return LineMinorCertificate(
                str(doc["host_digest"]), tuple(tuple(int(e) for e in p) for p in doc["parts"])
            )
        t = int(doc["t"])
        if len(doc["branch"]) != t:
            raise CertificateFormatError(f"branch list has {len(doc['branch'])} entries, t = {t}")
        paths = {}
        for entry in doc["paths"]:
            i, j = entry["pair"]
            paths[(int(i), int(j))] = [int(e) for e in entry["edges"]]
        k = doc.get("k")
        return ImmersionCertificate.from_paths(
            str(doc["host_digest"]),
            [int(v) for v in doc["branch"]],
            paths,
            bool(doc["strong"]),
            None if k is None else int(k),
        )
    except (KeyError, TypeError, ValueError, InvalidInput) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def save_certificate(cert, path) -> None:
    with open(path, "w") as fh:
        dump_certificate(cert, fh)


def load_certificate(path):
    with open(path) as fh:
        return loads_certificate(fh.read())


def line_minor_from_parts(g: MultiGraph, parts: Iterable[Iterable[int]]) -> LineMinorCertificate:
    return LineMinorCertificate(g.digest(), tuple(tuple(sorted(p)) for p in parts))
