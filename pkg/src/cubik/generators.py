"""Deterministic construction of test complexes and graphs.

Randomized constructions use SplitMix64 so corpora are reproducible across
platforms and implementations: state advances by the 64-bit constant
0x9E3779B97F4A7C15 and each output is finalized with the xor-shift/multiply
mix (0xBF58476D1CE4E5B9, 0x94D049BB133111EB, shifts 30/27/31).
"""

from __future__ import annotations

from itertools import combinations

from .collapse import CollapseStep, Decomposition, _expand_one
from .complexes import CubeComplex, build_from_cubes, completion_from_graph
from .errors import BadParamsError
from .graphs import Graph
from .hyperplanes import compute_hyperplanes

_MASK = (1 << 64) - 1


class SplitMix64:
    """Tiny portable PRNG; identical sequences for identical seeds everywhere."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = _MASK - (_MASK % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list):
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def uniform(self) -> float:
        return self.next_u64() / 2**64


def standard(kind: str, **params):
    """Named corpus objects. Complexes unless noted.

    kinds: path(n), tree(n, seed) or tree(edges=...), hypercube(n),
    grid(a, b), k23 (graph), tricorner, hollow_square, lshape.
    """
    if kind == "path":
        n = int(params.get("n", 1))
        if n < 1:
            raise BadParamsError("path needs n >= 1 edges")
        return build_from_cubes(range(n + 1), [[i, i + 1] for i in range(n)])
    if kind == "tree":
        if "edges" in params:
            edges = [(int(a), int(b)) for a, b in params["edges"]]
            vs = sorted({v for e in edges for v in e})
        else:
            n = int(params.get("n", 2))
            if n < 1:
                raise BadParamsError("tree needs n >= 1 vertices")
            rng = SplitMix64(int(params.get("seed", 0)))
            edges = [(rng.below(i), i) for i in range(1, n)]
            vs = list(range(n))
        g = Graph(vs, edges)
        g.require_connected()
        if len(g.edges) != len(g.vertices) - 1:
            raise BadParamsError("edge list does not describe a tree")
        if not g.edges:
            return build_from_cubes(vs, [[vs[0]]])
        return build_from_cubes(vs, [[u, v] for u, v in g.edges])
    if kind == "hypercube":
        n = int(params.get("n", 3))
        if not (0 <= n <= 16):
            raise BadParamsError("hypercube needs 0 <= n <= 16")
        if n == 0:
            return build_from_cubes([0], [[0]])
        return build_from_cubes(range(1 << n), [list(range(1 << n))])
    if kind == "grid":
        a, b = int(params.get("a", 2)), int(params.get("b", 2))
        if a < 1 or b < 1:
            raise BadParamsError("grid needs a, b >= 1")
        vid = lambda i, j: i * (b + 1) + j
        squares = [
            [vid(i, j), vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1)]
            for i in range(a)
            for j in range(b)
        ]
        return build_from_cubes(range((a + 1) * (b + 1)), squares)
    if kind == "k23":
        return Graph(range(5), [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
    if kind == "tricorner":
        verts = [v for v in range(8) if v != 7]
        squares = [[0, 1, 2, 3], [0, 1, 4, 5], [0, 2, 4, 6]]
        return build_from_cubes(verts, squares)
    if kind == "hollow_square":
        return build_from_cubes(range(4), [[0, 1], [0, 2], [1, 3], [2, 3]])
    if kind == "lshape":
        # three cells of a 2x2 grid (top-right cell missing)
        vid = lambda i, j: i * 3 + j
        squares = [
            [vid(0, 0), vid(0, 1), vid(1, 0), vid(1, 1)],
            [vid(0, 1), vid(0, 2), vid(1, 1), vid(1, 2)],
            [vid(1, 0), vid(1, 1), vid(2, 0), vid(2, 1)],
        ]
        verts = sorted({v for s in squares for v in s})
        return build_from_cubes(verts, squares)
    raise BadParamsError(f"unknown kind {kind!r}")


def mycielski(g: Graph) -> Graph:
    """Mycielski construction; preserves triangle-freeness, bumps chromatic number."""
    n = max(g.vertices) + 1 if g.vertices else 0
    shadow = {v: n + i for i, v in enumerate(g.vertices)}
    w = n + len(g.vertices)
    edges = list(g.edges)
    for u, v in g.edges:
        edges.append((shadow[u], v))
        edges.append((u, shadow[v]))
    for v in g.vertices:
        edges.append((shadow[v], w))
    return Graph(list(g.vertices) + list(shadow.values()) + [w], edges)


def mycielski_tower(n: int) -> Graph:
    """M_1 = K_2, M_{k+1} = mycielski(M_k)."""
    if n < 1:
        raise BadParamsError("mycielski tower starts at n = 1")
    g = Graph([0, 1], [(0, 1)])
    for _ in range(n - 1):
        g = mycielski(g)
    return g


def _cliques(g: Graph) -> list[frozenset]:
    """All cliques of g, including the empty clique."""
    out = [frozenset()]
    level = [frozenset([v]) for v in g.vertices]
    eset = g.edge_set()
    while level:
        out.extend(level)
        nxt = set()
        for cl in level:
            top = max(cl)
            for u in g.vertices:
                if u <= top or u in cl:
                    continue
                if all(((v, u) if v < u else (u, v)) in eset for v in cl):
                    nxt.add(cl | {u})
        level = sorted(nxt, key=sorted)
    return out


def simplex_graph(g: Graph) -> CubeComplex:
    """Complex on the cliques of ``g``; adjacent when cliques differ by one vertex."""
    cliques = sorted(_cliques(g), key=lambda c: (len(c), sorted(c)))
    index = {c: i for i, c in enumerate(cliques)}
    edges = []
    for c in cliques:
        for v in c:
            edges.append((index[c - {v}], index[c]))
    return completion_from_graph(Graph(range(len(cliques)), edges))


def simplex_vertex_hyperplane_map(c: CubeComplex, g: Graph, cliques=None) -> dict:
    """For a simplex-graph complex: hyperplane id -> generating vertex of ``g``.

    Each hyperplane's dual edges all add/remove the same vertex of ``g``; the
    map is the promised isomorphism between the crossing graph and ``g``.
    """
    if cliques is None:
        cliques = sorted(_cliques(g), key=lambda cl: (len(cl), sorted(cl)))
    out = {}
    for h in compute_hyperplanes(c):
        gens = set()
        for i, j in h.dual_edges:
            gens.add(next(iter(cliques[j] ^ cliques[i])))
        if len(gens) != 1:
            raise AssertionError("hyperplane mixes generators; input is not a simplex complex")
        out[h.id] = gens.pop()
    return out


def random_collapsible(
    seed: int, steps: int, max_cuboids_per_step: int, max_cuboid_dim: int | None = None
) -> tuple[CubeComplex, Decomposition]:
    """Grow a regularly collapsible complex from a point by random expansions.

    Each step picks pairwise-disjoint faces of the current complex (faces are
    always cuboids) and glues one prism per face. The returned decomposition
    is the by-construction record, so its round trip is exact by design.
    """
    if steps < 0:
        raise BadParamsError("steps must be >= 0")
    if max_cuboids_per_step < 1:
        raise BadParamsError("max_cuboids_per_step must be >= 1")
    rng = SplitMix64(seed)
    current = build_from_cubes([0], [[0]])
    collapse_steps: list[CollapseStep] = []
    for _ in range(steps):
        candidates = list(range(len(current.cubes)))
        if max_cuboid_dim is not None:
            candidates = [i for i in candidates if current.cube_dim(i) <= max_cuboid_dim]
        rng.shuffle(candidates)
        want = 1 + rng.below(max_cuboids_per_step)
        chosen: list[frozenset] = []
        used: set = set()
        for cid in candidates:
            cs = current.corner_set(cid)
            if used & cs:
                continue
            chosen.append(cs)
            used |= cs
            if len(chosen) == want:
                break
        removed = []
        cuboids = []
        vertex_map = {}
        for cuboid in chosen:
            expanded, fresh = _expand_one(current, cuboid)
            removed.append((None, frozenset(fresh.values())))
            cuboids.append(cuboid)
            for base, new in fresh.items():
                vertex_map[new] = base
            current = expanded
        collapse_steps.append(CollapseStep(removed, cuboids, vertex_map))
    collapse_steps.reverse()
    return current, Decomposition(collapse_steps, base_vertex=0)
