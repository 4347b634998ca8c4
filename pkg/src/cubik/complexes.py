"""Finite cube complexes: construction, canonical cubes, validation, points.

A cube is stored as its corner array in binary-word order: corner ``i`` sits
at the 0/1 coordinates given by the bits of ``i`` (bit ``l`` = coordinate
along axis ``l``). Axes are ordered by ascending vertex id of corner 0's
axis neighbors, and corner 0 carries the minimum id. This makes the corner
array of a cube unique, so cubes compare and serialize deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BadGluingError,
    DanglingVertexError,
    DimensionTooLargeError,
    InputFormatError,
    NotAHypercubeError,
    OutOfRangeError,
)
from .graphs import Graph

MAX_DIM = 16

COMPLEX_FORMAT = "cubecomplex/1"


def _dim_of(n_corners: int) -> int:
    k = n_corners.bit_length() - 1
    if (1 << k) != n_corners:
        raise NotAHypercubeError(f"corner count {n_corners} is not a power of two")
    return k


def canonicalize_corners(arr: Sequence[int]) -> tuple[int, ...]:
    """Reorder a binary-word corner array into canonical form.

    The input must already be hypercube-consistent (corner ``i`` adjacent to
    corner ``i ^ (1 << l)``); this only normalizes the choice of origin and
    axis order.
    """
    arr = tuple(int(v) for v in arr)
    k = _dim_of(len(arr))
    if len(set(arr)) != len(arr):
        raise NotAHypercubeError(f"duplicate corners in {arr}")
    if k == 0:
        return arr
    i0 = min(range(len(arr)), key=lambda i: arr[i])
    axes = sorted(range(k), key=lambda m: arr[i0 ^ (1 << m)])
    out = []
    for w in range(1 << k):
        idx = i0
        for l in range(k):
            if (w >> l) & 1:
                idx ^= 1 << axes[l]
        out.append(arr[idx])
    return tuple(out)


def _face_corners(arr: tuple[int, ...], free_axes: Sequence[int], pinned_bits: int) -> tuple[int, ...]:
    """Corner array (in the parent's induced order) of one face of ``arr``."""
    base = 0
    k = _dim_of(len(arr))
    for l in range(k):
        if l not in free_axes and (pinned_bits >> l) & 1:
            base |= 1 << l
    out = []
    for w in range(1 << len(free_axes)):
        idx = base
        for j, l in enumerate(free_axes):
            if (w >> j) & 1:
                idx |= 1 << l
        out.append(arr[idx])
    return tuple(out)


def _is_subcoset(positions: set[int]) -> tuple[bool, int, int]:
    """Whether index set is a coordinate-aligned subcube; returns (ok, base, free_mask)."""
    base = None
    orr = 0
    andd = ~0
    for i in positions:
        orr |= i
        andd &= i
    free = orr & ~andd
    if len(positions) != (1 << bin(free).count("1")):
        return False, 0, 0
    base = andd
    for i in positions:
        if (i & ~free) != base:
            return False, 0, 0
    return True, base, free


@dataclass(frozen=True)
class PointLocation:
    """A point of the geometric realization: cube id plus local coordinates."""

    cube: int
    coords: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(x) for x in self.coords))


class CubeComplex:
    """Immutable finite cube complex, closed under faces.

    Use :func:`build_from_cubes` or :func:`completion_from_graph` to construct
    one; the constructor itself trusts its inputs.
    """

    def __init__(self, vertices: tuple[int, ...], cubes: tuple[tuple[int, ...], ...], _validated: bool = False):
        self.vertices = vertices
        self.cubes = cubes
        self._corner_sets = [frozenset(c) for c in cubes]
        self._by_corners = {c: i for i, c in enumerate(cubes)}
        self._by_corner_set = {fs: i for i, fs in enumerate(self._corner_sets)}
        edges = [c for c in cubes if len(c) == 2]
        self.graph = Graph(vertices, edges)
        self._cache: dict = {}

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, CubeComplex)
            and self.vertices == other.vertices
            and set(self.cubes) == set(other.cubes)
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self.cubes)))

    def __repr__(self):
        return f"CubeComplex(|V|={len(self.vertices)}, cubes={len(self.cubes)}, dim={self.dim})"

    # -- structure queries --------------------------------------------------

    @property
    def dim(self) -> int:
        return max((_dim_of(len(c)) for c in self.cubes), default=0)

    def cube_dim(self, cid: int) -> int:
        return _dim_of(len(self.cubes[cid]))

    def corners(self, cid: int) -> tuple[int, ...]:
        return self.cubes[cid]

    def corner_set(self, cid: int) -> frozenset:
        return self._corner_sets[cid]

    def cube_id(self, corners: Sequence[int]) -> int:
        """Id of the stored cube with this corner set (any order)."""
        fs = frozenset(int(v) for v in corners)
        try:
            return self._by_corner_set[fs]
        except KeyError:
            raise KeyError(f"no cube with corners {sorted(fs)}") from None

    def vertex_cube(self, v: int) -> int:
        return self._by_corners[(v,)]

    def cubes_of_dim(self, k: int) -> list[int]:
        return [i for i, c in enumerate(self.cubes) if len(c) == (1 << k)]

    def incident_cubes(self, v: int) -> tuple[int, ...]:
        """Ids of all cubes having ``v`` among their corners."""
        if "incident" not in self._cache:
            inc: dict[int, list[int]] = {u: [] for u in self.vertices}
            for i, fs in enumerate(self._corner_sets):
                for u in fs:
                    inc[u].append(i)
            self._cache["incident"] = {u: tuple(l) for u, l in inc.items()}
        return self._cache["incident"][v]

    def cubes_containing(self, cid: int) -> tuple[int, ...]:
        """Ids of cubes having cube ``cid`` as a face (including itself)."""
        key = ("containing", cid)
        if key not in self._cache:
            fs = self._corner_sets[cid]
            v0 = self.cubes[cid][0]
            out = tuple(j for j in self.incident_cubes(v0) if fs <= self._corner_sets[j])
            self._cache[key] = out
        return self._cache[key]

    def maximal_cubes(self) -> tuple[int, ...]:
        if "maximal" not in self._cache:
            out = []
            for i, fs in enumerate(self._corner_sets):
                sups = self.cubes_containing(i)
                if len(sups) == 1:
                    out.append(i)
            self._cache["maximal"] = tuple(out)
        return self._cache["maximal"]

    def face_id(self, cid: int, free_axes: Sequence[int], pinned_bits: int) -> int:
        arr = _face_corners(self.cubes[cid], list(free_axes), pinned_bits)
        return self._by_corners[canonicalize_corners(arr)]

    def common_face(self, c1: int, c2: int) -> int | None:
        """Id of the face shared by two cubes, or None if disjoint."""
        inter = self._corner_sets[c1] & self._corner_sets[c2]
        if not inter:
            return None
        return self._by_corner_set[inter]

    def maximal_adjacency(self) -> dict[int, tuple[int, ...]]:
        """Face-sharing adjacency restricted to maximal cubes."""
        if "max_adj" not in self._cache:
            maxc = self.maximal_cubes()
            adj: dict[int, set[int]] = {i: set() for i in maxc}
            maxset = set(maxc)
            for v in self.vertices:
                here = [i for i in self.incident_cubes(v) if i in maxset]
                for a in here:
                    for b in here:
                        if a != b:
                            adj[a].add(b)
            self._cache["max_adj"] = {i: tuple(sorted(ns)) for i, ns in adj.items()}
        return self._cache["max_adj"]

    def embedding(self, sub: int, sup: int) -> tuple[tuple[tuple[int, bool], ...], tuple[tuple[int, int], ...]]:
        """How face ``sub`` sits inside cube ``sup``.

        Returns ``(axes, pinned)`` where ``axes[j] = (sup_axis, flip)`` maps the
        j-th axis of the face and ``pinned = ((sup_axis, value), ...)`` fixes
        the remaining coordinates.
        """
        key = ("emb", sub, sup)
        if key in self._cache:
            return self._cache[key]
        sub_arr = self.cubes[sub]
        sup_arr = self.cubes[sup]
        pos_of = {v: i for i, v in enumerate(sup_arr)}
        try:
            pos = [pos_of[v] for v in sub_arr]
        except KeyError:
            raise ValueError(f"cube {sub} is not a face of cube {sup}") from None
        i0 = pos[0]
        ksub = _dim_of(len(sub_arr))
        axes = []
        used = 0
        for j in range(ksub):
            delta = pos[1 << j] ^ i0
            if bin(delta).count("1") != 1:
                raise ValueError(f"cube {sub} does not embed axis-aligned in {sup}")
            a = delta.bit_length() - 1
            flip = bool((i0 >> a) & 1)
            axes.append((a, flip))
            used |= 1 << a
        ksup = _dim_of(len(sup_arr))
        pinned = tuple((a, (i0 >> a) & 1) for a in range(ksup) if not (used >> a) & 1)
        out = (tuple(axes), pinned)
        self._cache[key] = out
        return out

    # -- points -----------------------------------------------------------

    def canonical_point(self, p: PointLocation) -> PointLocation:
        """Move a point to its minimal carrier face (coordinates in (0,1))."""
        if p.cube < 0 or p.cube >= len(self.cubes):
            raise KeyError(f"no cube with id {p.cube}")
        k = self.cube_dim(p.cube)
        if len(p.coords) != k:
            raise OutOfRangeError(f"expected {k} coordinates for cube {p.cube}, got {len(p.coords)}")
        for x in p.coords:
            if not (0.0 <= x <= 1.0):
                raise OutOfRangeError(f"coordinate {x} outside [0,1]")
        free = [l for l, x in enumerate(p.coords) if 0.0 < x < 1.0]
        if len(free) == k:
            return p
        pinned_bits = 0
        for l, x in enumerate(p.coords):
            if x == 1.0:
                pinned_bits |= 1 << l
        fid = self.face_id(p.cube, free, pinned_bits)
        axes, _ = self.embedding(fid, p.cube)
        coords = tuple(1.0 - p.coords[a] if flip else p.coords[a] for a, flip in axes)
        return PointLocation(fid, coords)

    def point_in(self, p: PointLocation, cid: int) -> tuple[float, ...]:
        """Coordinates of (canonical) point ``p`` in the frame of cube ``cid``."""
        if p.cube == cid:
            return p.coords
        axes, pinned = self.embedding(p.cube, cid)
        out = [0.0] * self.cube_dim(cid)
        for a, val in pinned:
            out[a] = float(val)
        for j, (a, flip) in enumerate(axes):
            out[a] = 1.0 - p.coords[j] if flip else p.coords[j]
        return tuple(out)

    def point_carriers(self, p: PointLocation) -> tuple[int, ...]:
        """All cubes whose closure contains canonical point ``p``."""
        return self.cubes_containing(p.cube)

    def underlying_graph(self) -> Graph:
        return self.graph

    def induced_subcomplex(self, keep: Iterable[int]) -> "CubeComplex":
        """Subcomplex on a vertex subset (cube survives iff all corners survive)."""
        ks = set(keep)
        cubes = tuple(c for c in self.cubes if all(v in ks for v in c))
        vertices = tuple(sorted(ks))
        for v in vertices:
            if (v,) not in self._by_corners:
                raise DanglingVertexError(f"vertex {v} not in complex")
        return CubeComplex(vertices, cubes, _validated=True)


def cube_adjacency(c: CubeComplex) -> list[tuple[int, int, int]]:
    """All cube pairs meeting in a nonempty common face, with the face's id."""
    out = []
    seen = set()
    for v in c.vertices:
        inc = c.incident_cubes(v)
        for ii in range(len(inc)):
            for jj in range(ii + 1, len(inc)):
                a, b = inc[ii], inc[jj]
                if a > b:
                    a, b = b, a
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                fid = c.common_face(a, b)
                if fid is not None:
                    out.append((a, b, fid))
    out.sort()
    return out


def _closure_of(raw: Sequence[tuple[int, ...]]) -> set[tuple[int, ...]]:
    """All faces of the given canonical cubes, canonicalized."""
    todo = list(raw)
    seen: set[tuple[int, ...]] = set()
    while todo:
        arr = todo.pop()
        if arr in seen:
            continue
        seen.add(arr)
        k = _dim_of(len(arr))
        for l in range(k):
            free = [m for m in range(k) if m != l]
            for bit in (0, 1):
                face = canonicalize_corners(_face_corners(arr, free, bit << l))
                if face not in seen:
                    todo.append(face)
    return seen


def build_from_cubes(vertices: Iterable[int], raw_cubes: Iterable[Sequence[int]]) -> CubeComplex:
    """Build and validate a complex from corner arrays in binary-word order."""
    vertices = tuple(sorted(set(int(v) for v in vertices)))
    vset = set(vertices)
    canon = []
    for arr in raw_cubes:
        arr = tuple(int(v) for v in arr)
        k = _dim_of(len(arr))
        if k > MAX_DIM:
            raise DimensionTooLargeError(f"cube of dimension {k} exceeds the maximum {MAX_DIM}")
        for v in arr:
            if v not in vset:
                raise NotAHypercubeError(f"cube {arr} references undeclared vertex {v}")
        canon.append(canonicalize_corners(arr))

    cubes = tuple(sorted(_closure_of(canon), key=lambda c: (len(c), c)))
    covered = set()
    for carr in cubes:
        covered.update(carr)
    for v in vertices:
        if v not in covered:
            raise DanglingVertexError(f"vertex {v} appears in no cube")

    cx = CubeComplex(vertices, cubes)
    _validate(cx)
    return cx


def _validate(cx: CubeComplex):
    # Induced-hypercube check: corner i ~ corner j in the 1-skeleton iff the
    # index words differ in exactly one bit.
    eset = cx.graph.edge_set()
    for arr in cx.cubes:
        k = _dim_of(len(arr))
        for i in range(len(arr)):
            for j in range(i + 1, len(arr)):
                adjacent = (arr[i], arr[j]) in eset or (arr[j], arr[i]) in eset
                want = bin(i ^ j).count("1") == 1
                if adjacent != want:
                    raise NotAHypercubeError(
                        f"corners {sorted(arr)} do not induce a hypercube "
                        f"(vertices {arr[i]},{arr[j]})"
                    )
    # Gluing: any two cubes meet in a common face or not at all.
    seen_pairs = set()
    for v in cx.vertices:
        inc = cx.incident_cubes(v)
        for ii in range(len(inc)):
            for jj in range(ii + 1, len(inc)):
                a, b = inc[ii], inc[jj]
                pair = (a, b) if a < b else (b, a)
                if pair in seen_pairs:
                    continue
                seen_pairs.add(pair)
                inter = cx._corner_sets[a] & cx._corner_sets[b]
                fid = cx._by_corner_set.get(inter)
                if fid is None:
                    raise BadGluingError(
                        f"cubes {cx.cubes[a]} and {cx.cubes[b]} intersect in {sorted(inter)}, not a stored face"
                    )
                if not _is_face_of(cx, fid, a) or not _is_face_of(cx, fid, b):
                    raise BadGluingError(
                        f"cubes {cx.cubes[a]} and {cx.cubes[b]} intersect in {sorted(inter)}, not a common face"
                    )


def _is_face_of(cx: CubeComplex, sub: int, sup: int) -> bool:
    sup_arr = cx.cubes[sup]
    pos_of = {v: i for i, v in enumerate(sup_arr)}
    positions = set()
    for v in cx.cubes[sub]:
        if v not in pos_of:
            return False
        positions.add(pos_of[v])
    ok, _, _ = _is_subcoset(positions)
    return ok


def completion_from_graph(g: Graph) -> CubeComplex:
    """Complex whose cubes are exactly the induced hypercube subgraphs of ``g``."""
    eset = g.edge_set()
    level: set[tuple[int, ...]] = {(min(e), max(e)) for e in g.edges}
    found: set[tuple[int, ...]] = {(v,) for v in g.vertices} | set(level)
    k = 1
    while level and k < MAX_DIM:
        nxt: set[tuple[int, ...]] = set()
        for arr in level:
            for u in g.neighbors(arr[0]):
                if u in arr:
                    continue
                cand = _extend_cube(g, eset, arr, u)
                for new_arr in cand:
                    nxt.add(canonicalize_corners(new_arr))
        level = nxt
        found |= nxt
        k += 1
    return build_from_cubes(g.vertices, sorted(found, key=lambda c: (len(c), c)))


def _extend_cube(g: Graph, eset, arr: tuple[int, ...], u: int) -> list[tuple[int, ...]]:
    """All induced-(k+1)-cubes extending ``arr`` by translating corner 0 to ``u``."""
    n = len(arr)
    results = []

    def rec(f: list[int], i: int):
        if i == n:
            corners = list(arr) + f
            if len(set(corners)) != 2 * n:
                return
            # verify induced hypercube structure on the doubled index set
            for a in range(2 * n):
                va = corners[a]
                for b in range(a + 1, 2 * n):
                    adjacent = (min(va, corners[b]), max(va, corners[b])) in eset
                    if adjacent != (bin(a ^ b).count("1") == 1):
                        return
            results.append(tuple(corners))
            return
        b = i & (-i)
        parent = f[i ^ b]
        base = arr[i]
        cands = [
            w
            for w in g.neighbors(base)
            if (min(w, parent), max(w, parent)) in eset and w not in arr and w not in f[:i]
        ]
        for w in cands:
            f.append(w)
            rec(f, i + 1)
            f.pop()

    rec([u], 1)
    return results


# -- serialization -------------------------------------------------------------


def to_obj(c: CubeComplex) -> dict:
    """JSON-ready dict in the ``cubecomplex/1`` schema (maximal cubes only)."""
    maximal = sorted((c.cubes[i] for i in c.maximal_cubes()), key=lambda a: (len(a), a))
    return {
        "format": COMPLEX_FORMAT,
        "vertices": list(c.vertices),
        "cubes": [list(arr) for arr in maximal],
    }


def from_obj(obj: dict) -> CubeComplex:
    if not isinstance(obj, dict) or obj.get("format") != COMPLEX_FORMAT:
        raise InputFormatError(f"expected format {COMPLEX_FORMAT!r}")
    try:
        vertices = [int(v) for v in obj["vertices"]]
        raw = [tuple(int(v) for v in arr) for arr in obj["cubes"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed complex object: {exc}") from exc
    for arr in raw:
        try:
            canon = canonicalize_corners(arr)
        except NotAHypercubeError as exc:
            raise InputFormatError(str(exc)) from exc
        if canon != arr:
            raise InputFormatError(
                f"cube {list(arr)} is not in canonical binary-word order (expected {list(canon)})"
            )
    try:
        return build_from_cubes(vertices, raw)
    except (NotAHypercubeError, BadGluingError, DanglingVertexError, DimensionTooLargeError) as exc:
        raise InputFormatError(str(exc)) from exc


def dumps(c: CubeComplex) -> str:
    return json.dumps(to_obj(c), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> CubeComplex:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from exc
    return from_obj(obj)
