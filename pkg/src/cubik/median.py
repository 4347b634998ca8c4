"""Median-graph recognition, intervals, gates, convexity, and the CAT(0) test."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import CubeComplex, completion_from_graph
from .errors import (
    DisconnectedSetError,
    GraphNotConnectedError,
    NotConvexError,
    NotMedianError,
    UnknownVertexError,
)
from .graphs import Graph

_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)

DIRECT_CHECK_LIMIT = 512


@dataclass(frozen=True)
class Interval:
    """Metric interval I(u, v): vertices on shortest u-v paths."""

    u: int
    v: int
    members: frozenset


@dataclass(frozen=True)
class NoMedian:
    intersection: frozenset


@dataclass(frozen=True)
class MultipleMedians:
    intersection: frozenset


@dataclass(frozen=True)
class GateMap:
    target: frozenset
    gate: dict

    def __call__(self, v: int) -> int:
        return self.gate[v]


@dataclass
class MedianReport:
    is_median: bool
    median_witness: tuple | None = None  # (x, y, z, intersection) when not median
    triangle_free: bool = True
    triangle_witness: tuple | None = None
    quadrangle_ok: bool = True
    quadrangle_witness: tuple | None = None
    k23_free: bool = True
    k23_witness: tuple | None = None

    def __bool__(self):
        return self.is_median


@dataclass
class LinkReport:
    ok: bool
    witness: tuple | None = None  # (base cube id, (A, B, C))

    def __bool__(self):
        return self.ok


@dataclass
class Cat0Report:
    ok: bool
    reason: str | None = None  # "missing cubes" | "graph not median"
    median_report: MedianReport | None = None

    def __bool__(self):
        return self.ok


def interval(g: Graph, u: int, v: int) -> Interval:
    """Exact interval member set via two BFS sweeps."""
    du = g.bfs_distances(u)
    dv = g.bfs_distances(v)
    if v not in du:
        raise UnknownVertexError(f"no path between {u} and {v}")
    d = du[v]
    members = frozenset(z for z in du if z in dv and du[z] + dv[z] == d)
    return Interval(u, v, members)


def median_point(g: Graph, x: int, y: int, z: int):
    """The unique triple median, or a tagged NoMedian/MultipleMedians verdict."""
    ixy = interval(g, x, y).members
    iyz = interval(g, y, z).members
    izx = interval(g, z, x).members
    inter = ixy & iyz & izx
    if len(inter) == 1:
        return next(iter(inter))
    if not inter:
        return NoMedian(frozenset())
    return MultipleMedians(frozenset(inter))


def _interval_tensor(g: Graph) -> np.ndarray:
    """Packed boolean tensor P[i, j, :] = bitset over z of z in I(v_i, v_j)."""
    if "interval_tensor" in g._cache:
        return g._cache["interval_tensor"]
    D = g.distance_matrix().astype(np.int32)
    n = len(g.vertices)
    packed = np.empty((n, n, (n + 7) // 8), dtype=np.uint8)
    for i in range(n):
        row = D[i]
        mem = (row[None, :] + D) == row[:, None]  # mem[j, z]
        packed[i] = np.packbits(mem, axis=-1)
    g._cache["interval_tensor"] = packed
    return packed


def _direct_median_check(g: Graph) -> tuple[bool, tuple | None]:
    """All-triples check; returns (ok, witness) with witness = (x, y, z, count)."""
    n = len(g.vertices)
    P = _interval_tensor(g)
    idx = g.vertices
    for i in range(n):
        Pi = P[i]
        for j in range(i + 1, n):
            # rows over k: I(i,j) & I(i,k) & I(j,k), popcount per row must be 1
            m = Pi[j][None, :] & Pi & P[j]
            counts = _POPCOUNT8[m].sum(axis=1)
            bad = np.nonzero(counts != 1)[0]
            if bad.size:
                k = int(bad[0])
                members = np.unpackbits(m[k])[:n]
                inter = frozenset(idx[z] for z in np.nonzero(members)[0])
                return False, (idx[i], idx[j], idx[k], inter)
    return True, None


def _triangle_free(g: Graph) -> tuple[bool, tuple | None]:
    A = g.adjacency_matrix()
    tri = (A @ A) * A
    ii, jj = np.nonzero(np.triu(tri))
    if ii.size:
        i, j = int(ii[0]), int(jj[0])
        common = np.nonzero(A[i] & A[j])[0]
        return False, (g.vertices[i], g.vertices[j], g.vertices[int(common[0])])
    return True, None


def _k23_free(g: Graph) -> tuple[bool, tuple | None]:
    A = g.adjacency_matrix()
    common = (A.astype(np.int32) @ A.astype(np.int32))
    np.fill_diagonal(common, 0)
    ii, jj = np.nonzero(np.triu(common) >= 3)
    if ii.size:
        i, j = int(ii[0]), int(jj[0])
        mids = [g.vertices[z] for z in np.nonzero(A[i] & A[j])[0][:3]]
        return False, (g.vertices[i], g.vertices[j], tuple(mids))
    return True, None


def _quadrangle_check(g: Graph) -> tuple[bool, tuple | None]:
    """Whether every (u, v, w, z) configuration admits the required corner x."""
    D = g.distance_matrix()
    A = g.adjacency_matrix()
    n = len(g.vertices)
    verts = g.vertices
    for zi in range(n):
        nbrs = np.nonzero(A[zi])[0]
        for ai in range(len(nbrs)):
            for bi in range(ai + 1, len(nbrs)):
                vi, wi = int(nbrs[ai]), int(nbrs[bi])
                need = (D[:, vi] == D[:, wi]) & (D[:, vi] == D[:, zi] - 1) & (D[:, vi] >= 1)
                if not need.any():
                    continue
                cn = np.nonzero(A[vi] & A[wi])[0]
                ok = np.zeros(n, dtype=bool)
                for x in cn:
                    ok |= D[:, x] == D[:, vi] - 1
                bad = np.nonzero(need & ~ok)[0]
                if bad.size:
                    return False, (verts[int(bad[0])], verts[vi], verts[wi], verts[zi])
    return True, None


def is_median(g: Graph) -> MedianReport:
    """Median recognition with diagnostics.

    The all-triples check is authoritative up to ``DIRECT_CHECK_LIMIT``
    vertices; beyond that the triangle-free + quadrangle + K_{2,3}
    characterization decides.
    """
    g.require_connected()
    tri_ok, tri_wit = _triangle_free(g)
    k23_ok, k23_wit = _k23_free(g)
    quad_ok, quad_wit = _quadrangle_check(g)
    if len(g.vertices) <= DIRECT_CHECK_LIMIT:
        ok, wit = _direct_median_check(g)
    else:
        ok, wit = tri_ok and quad_ok and k23_ok, None
    return MedianReport(
        is_median=ok,
        median_witness=wit,
        triangle_free=tri_ok,
        triangle_witness=tri_wit,
        quadrangle_ok=quad_ok,
        quadrangle_witness=quad_wit,
        k23_free=k23_ok,
        k23_witness=k23_wit,
    )


def is_convex(g: Graph, s) -> bool:
    """2-convexity test for a connected set in a median graph."""
    rep = _require_median(g)
    s = frozenset(s)
    for v in s:
        if v not in g:
            raise UnknownVertexError(f"vertex {v} not in graph")
    if not g.is_connected_set(s):
        raise DisconnectedSetError(f"set {sorted(s)} does not induce a connected subgraph")
    members = sorted(s)
    D = g.distance_matrix()
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            x, y = members[i], members[j]
            if D[g.index_of(x), g.index_of(y)] == 2:
                if not interval(g, x, y).members <= s:
                    return False
    return True


def _require_median(g: Graph) -> MedianReport:
    rep = g._cache.get("median_report")
    if rep is None:
        rep = is_median(g)
        g._cache["median_report"] = rep
    if not rep.is_median:
        raise NotMedianError("graph is not median")
    return rep


def gate_map(g: Graph, a) -> GateMap:
    """Nearest-point projection onto a convex set, with gate verification."""
    a = frozenset(a)
    if not is_convex(g, a):
        raise NotConvexError(f"set {sorted(a)} is not convex")
    D = g.distance_matrix()
    targets = sorted(a)
    tcols = [g.index_of(t) for t in targets]
    gate = {}
    for x in g.vertices:
        xi = g.index_of(x)
        drow = D[xi, tcols]
        best = int(np.argmin(drow))
        g0 = targets[best]
        d0 = int(drow[best])
        for t, dt in zip(targets, drow):
            if d0 + D[g.index_of(g0), g.index_of(t)] != int(dt):
                raise NotConvexError(f"set {sorted(a)} is not gated at vertex {x}")
        gate[x] = g0
    return GateMap(a, gate)


def link_condition_check(c: CubeComplex) -> LinkReport:
    """Gromov-style flag check: triples of (n+2)-cubes over a common n-cube."""
    by_dim: dict[int, list[int]] = {}
    for i in range(len(c.cubes)):
        by_dim.setdefault(c.cube_dim(i), []).append(i)
    for q in range(len(c.cubes)):
        n = c.cube_dim(q)
        cands = [j for j in c.cubes_containing(q) if c.cube_dim(j) == n + 2]
        if len(cands) < 3:
            continue
        for ai in range(len(cands)):
            for bi in range(ai + 1, len(cands)):
                fa = c.common_face(cands[ai], cands[bi])
                if fa is None or c.cube_dim(fa) != n + 1:
                    continue
                for ci in range(bi + 1, len(cands)):
                    fb = c.common_face(cands[ai], cands[ci])
                    fc = c.common_face(cands[bi], cands[ci])
                    if fb is None or c.cube_dim(fb) != n + 1:
                        continue
                    if fc is None or c.cube_dim(fc) != n + 1:
                        continue
                    a, b, cc = cands[ai], cands[bi], cands[ci]
                    sup = set(c.cubes_containing(a)) & set(c.cubes_containing(b)) & set(c.cubes_containing(cc))
                    sup.discard(a)
                    sup.discard(b)
                    sup.discard(cc)
                    if not sup:
                        return LinkReport(False, (q, (a, b, cc)))
    return LinkReport(True)


def is_cat0(c: CubeComplex) -> Cat0Report:
    """Median underlying graph + graph-complete cube set."""
    cached = c._cache.get("cat0_report")
    if cached is not None:
        return cached
    g = c.underlying_graph()
    try:
        rep = is_median(g)
    except GraphNotConnectedError:
        rep = MedianReport(is_median=False)
    if not rep.is_median:
        out = Cat0Report(False, "graph not median", rep)
    else:
        full = completion_from_graph(g)
        if full == c:
            out = Cat0Report(True, None, rep)
        else:
            out = Cat0Report(False, "missing cubes", rep)
    c._cache["cat0_report"] = out
    return out


def require_cat0(c: CubeComplex):
    from .errors import NotCat0Error

    rep = is_cat0(c)
    if not rep.ok:
        raise NotCat0Error(f"complex is not CAT(0): {rep.reason}")
