"""Hyperplanes, halfspaces, crossing graph, width, extremality, coloring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import CubeComplex
from .errors import NotTwoComponentsError, TooLargeError
from .graphs import Graph
from .median import require_cat0


@dataclass(frozen=True)
class Hyperplane:
    """Equivalence class of edges under the opposite-in-a-square relation."""

    id: int
    dual_edges: frozenset  # of (u, v) tuples with u < v


@dataclass(frozen=True)
class Halfspace:
    hyperplane_id: int
    side: int  # 0 or 1
    vertices: frozenset


@dataclass(frozen=True)
class Coloring:
    assignment: dict  # hyperplane id -> color in 1..n
    n: int


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if ri > rj:
                ri, rj = rj, ri
            self.parent[rj] = ri


def compute_hyperplanes(c: CubeComplex) -> list[Hyperplane]:
    """Union-find over edges, joining opposite edge pairs of every square."""
    if "hyperplanes" in c._cache:
        return c._cache["hyperplanes"]
    edges = [arr for arr in c.cubes if len(arr) == 2]
    edge_index = {arr: i for i, arr in enumerate(edges)}

    def eidx(u, v):
        return edge_index[(u, v) if u < v else (v, u)]

    uf = _UnionFind(len(edges))
    for sq in c.cubes_of_dim(2):
        c0, c1, c2, c3 = c.corners(sq)
        uf.union(eidx(c0, c1), eidx(c2, c3))
        uf.union(eidx(c0, c2), eidx(c1, c3))
    classes: dict[int, list] = {}
    for i, arr in enumerate(edges):
        classes.setdefault(uf.find(i), []).append(arr)
    ordered = sorted(classes.values(), key=lambda es: min(es))
    out = [Hyperplane(i, frozenset(es)) for i, es in enumerate(ordered)]
    c._cache["hyperplanes"] = out
    return out


def halfspaces(c: CubeComplex, h: Hyperplane) -> tuple[Halfspace, Halfspace]:
    """The two components left after removing the dual edges."""
    key = ("halfspaces", h.id)
    if key in c._cache:
        return c._cache[key]
    g = c.underlying_graph()
    banned = h.dual_edges
    comp: dict[int, int] = {}
    n_comp = 0
    for start in c.vertices:
        if start in comp:
            continue
        stack = [start]
        comp[start] = n_comp
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                e = (u, w) if u < w else (w, u)
                if e in banned or w in comp:
                    continue
                comp[w] = n_comp
                stack.append(w)
        n_comp += 1
    if n_comp != 2:
        raise NotTwoComponentsError(
            f"hyperplane {h.id} splits the complex into {n_comp} components, not 2"
        )
    anchor = min(min(e) for e in h.dual_edges)
    side0_id = comp[anchor]
    side0 = frozenset(v for v, cc in comp.items() if cc == side0_id)
    side1 = frozenset(v for v, cc in comp.items() if cc != side0_id)
    out = (Halfspace(h.id, 0, side0), Halfspace(h.id, 1, side1))
    c._cache[key] = out
    return out


def all_halfspaces(c: CubeComplex) -> list[tuple[Halfspace, Halfspace]]:
    return [halfspaces(c, h) for h in compute_hyperplanes(c)]


def crossing_graph(c: CubeComplex) -> Graph:
    """Graph on hyperplane ids; edges between square-sharing hyperplanes."""
    if "crossing_graph" in c._cache:
        return c._cache["crossing_graph"]
    hps = compute_hyperplanes(c)
    edge_to_h = {}
    for h in hps:
        for e in h.dual_edges:
            edge_to_h[e] = h.id
    cross = set()
    for sq in c.cubes_of_dim(2):
        c0, c1, c2, c3 = c.corners(sq)
        h1 = edge_to_h[(c0, c1) if c0 < c1 else (c1, c0)]
        h2 = edge_to_h[(c0, c2) if c0 < c2 else (c2, c0)]
        if h1 != h2:
            cross.add((min(h1, h2), max(h1, h2)))
    g = Graph(range(len(hps)), cross)
    c._cache["crossing_graph"] = g
    return g


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _halfspace_masks(c: CubeComplex) -> list[tuple[int, int]]:
    if "hs_masks" not in c._cache:
        c._cache["hs_masks"] = [
            (_mask(a.vertices), _mask(b.vertices)) for a, b in all_halfspaces(c)
        ]
    return c._cache["hs_masks"]


def width(c: CubeComplex) -> int:
    """Longest chain of strictly nested halfspaces."""
    require_cat0(c)
    masks = [m for pair in _halfspace_masks(c) for m in pair]
    if not masks:
        return 0
    order = sorted(range(len(masks)), key=lambda i: bin(masks[i]).count("1"))
    best = [1] * len(masks)
    for pos, i in enumerate(order):
        mi = masks[i]
        for j in order[:pos]:
            mj = masks[j]
            if mj != mi and (mj | mi) == mi:
                best[i] = max(best[i], best[j] + 1)
    return max(best)


def extremal_hyperplanes(c: CubeComplex) -> list[tuple[Hyperplane, Halfspace]]:
    """Hyperplanes bounding an inclusion-minimal halfspace, with the chosen side.

    When both sides are minimal the smaller side wins, ties broken by the
    smaller minimum vertex id.
    """
    require_cat0(c)
    hps = compute_hyperplanes(c)
    pairs = all_halfspaces(c)
    masks = _halfspace_masks(c)
    flat = [(i, s) for i in range(len(hps)) for s in (0, 1)]
    flat_masks = {(i, s): masks[i][s] for i, s in flat}

    def minimal(i, s):
        m = flat_masks[(i, s)]
        for j, t in flat:
            mj = flat_masks[(j, t)]
            if mj != m and (mj | m) == m:
                return False
        return True

    out = []
    for i, h in enumerate(hps):
        m0, m1 = minimal(i, 0), minimal(i, 1)
        if not (m0 or m1):
            continue
        if m0 and m1:
            a, b = pairs[i]
            if len(a.vertices) != len(b.vertices):
                side = 0 if len(a.vertices) < len(b.vertices) else 1
            else:
                side = 0 if min(a.vertices) < min(b.vertices) else 1
        else:
            side = 0 if m0 else 1
        out.append((h, pairs[i][side]))
    return out


def separating_hyperplanes(c: CubeComplex, u: int, v: int) -> frozenset:
    """Ids of hyperplanes with u and v on opposite sides."""
    require_cat0(c)
    out = set()
    for a, b in all_halfspaces(c):
        if (u in a.vertices) != (v in a.vertices):
            out.add(a.hyperplane_id)
    return frozenset(out)


def separation_matrix(c: CubeComplex) -> np.ndarray:
    """Pairwise counts of separating hyperplanes, indexed by graph vertex order."""
    require_cat0(c)
    g = c.underlying_graph()
    n = len(g.vertices)
    hs = all_halfspaces(c)
    S = np.zeros((len(hs), n), dtype=np.int32)
    for i, (a, _) in enumerate(hs):
        for v in a.vertices:
            S[i, g.index_of(v)] = 1
    ones = S
    zeros = 1 - S
    return ones.T @ zeros + zeros.T @ ones


def color_greedy(cg: Graph) -> Coloring:
    """Greedy coloring in smallest-last (degeneracy) order."""
    deg = {v: cg.degree(v) for v in cg.vertices}
    alive = set(cg.vertices)
    order = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        order.append(v)
        alive.remove(v)
        for w in cg.neighbors(v):
            if w in alive:
                deg[w] -= 1
    assignment: dict[int, int] = {}
    for v in reversed(order):
        used = {assignment[w] for w in cg.neighbors(v) if w in assignment}
        color = 1
        while color in used:
            color += 1
        assignment[v] = color
    n = max(assignment.values(), default=0)
    return Coloring(assignment, n)


def _greedy_clique(cg: Graph) -> list[int]:
    best: list[int] = []
    for seed in sorted(cg.vertices, key=lambda v: -cg.degree(v))[:20]:
        clique = [seed]
        cand = set(cg.neighbors(seed))
        while cand:
            v = max(cand, key=lambda u: (len(cand & set(cg.neighbors(u))), -u))
            clique.append(v)
            cand &= set(cg.neighbors(v))
        if len(clique) > len(best):
            best = clique
    return best


def chromatic_exact(cg: Graph, node_budget: int = 2_000_000) -> tuple[int, Coloring]:
    """Exact chromatic number by branch and bound over k-colorings."""
    if not cg.vertices:
        return 0, Coloring({}, 0)
    greedy = color_greedy(cg)
    ub = greedy.n
    lb = max(1, len(_greedy_clique(cg)))
    order = sorted(cg.vertices, key=lambda v: -cg.degree(v))
    neighbors = {v: tuple(cg.neighbors(v)) for v in cg.vertices}
    budget = [node_budget]

    def feasible(k: int) -> dict | None:
        coloring: dict[int, int] = {}

        def rec(idx: int, used: int) -> bool:
            budget[0] -= 1
            if budget[0] <= 0:
                raise TooLargeError("chromatic search exceeded its node budget")
            if idx == len(order):
                return True
            v = order[idx]
            banned = {coloring[w] for w in neighbors[v] if w in coloring}
            for color in range(1, min(used + 1, k) + 1):
                if color in banned:
                    continue
                coloring[v] = color
                if rec(idx + 1, max(used, color)):
                    return True
                del coloring[v]
            return False

        return dict(coloring) if rec(0, 0) else None

    if lb == ub:
        return ub, greedy
    best = greedy.assignment
    k = ub
    while k > lb:
        sol = feasible(k - 1)
        if sol is None:
            break
        best = sol
        k -= 1
    return k, Coloring(best, k)


def coloring_is_valid(cg: Graph, coloring: Coloring) -> bool:
    return all(coloring.assignment[u] != coloring.assignment[v] for u, v in cg.edges)


def to_obj(c: CubeComplex) -> dict:
    """Hyperplane report in the ``hyperplanes/1`` schema."""
    from .median import is_cat0

    hps = compute_hyperplanes(c)
    cg = crossing_graph(c)
    coloring = color_greedy(cg)
    cat0 = is_cat0(c).ok
    report = {
        "format": "hyperplanes/1",
        "cat0": cat0,
        "hyperplanes": [],
        "crossing_edges": [list(e) for e in cg.edges],
        "coloring": {
            "colors": coloring.n,
            "assignment": {str(h): col for h, col in sorted(coloring.assignment.items())},
        },
        "width": width(c) if cat0 else None,
    }
    for h in hps:
        entry = {
            "id": h.id,
            "dual_edges": sorted([list(e) for e in h.dual_edges]),
        }
        try:
            a, b = halfspaces(c, h)
            entry["halfspaces"] = [sorted(a.vertices), sorted(b.vertices)]
        except NotTwoComponentsError:
            entry["halfspaces"] = None
        report["hyperplanes"].append(entry)
    return report
