"""Regular collapse to a point, inverse expansion, and round-trip verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .complexes import CubeComplex, _is_subcoset, build_from_cubes
from .errors import (
    InputFormatError,
    NotACuboidError,
    NotDisjointError,
    NotExtremalError,
    OverlapError,
)
from .hyperplanes import (
    color_greedy,
    compute_hyperplanes,
    crossing_graph,
    extremal_hyperplanes,
)
from .median import require_cat0

DECOMP_FORMAT = "cubedecomp/1"


@dataclass
class CollapseStep:
    """One multicollapse: removed halfspaces, their gate-image cuboids, and the
    removed-vertex -> gate bijections (one dict per removed halfspace)."""

    removed: list  # [(hyperplane id at that stage, frozenset of removed vertices)]
    cuboids: list  # [frozenset]  gate images, aligned with ``removed``
    vertex_map: dict  # removed vertex -> gate vertex (union over halfspaces)


@dataclass
class Decomposition:
    steps: list  # CollapseStep, in collapse order
    base_vertex: int


@dataclass
class DecompositionVerdict:
    valid: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def _gate_pairs(h_dual_edges, removed: frozenset) -> dict:
    """removed vertex -> its neighbor across the hyperplane."""
    gate = {}
    for u, v in h_dual_edges:
        if u in removed and v in removed:
            raise NotExtremalError("dual edge inside the removed halfspace")
        if u in removed:
            if u in gate:
                raise NotExtremalError(f"vertex {u} has two dual edges")
            gate[u] = v
        elif v in removed:
            if v in gate:
                raise NotExtremalError(f"vertex {v} has two dual edges")
            gate[v] = u
    if set(gate) != set(removed):
        raise NotExtremalError("removed halfspace is not the gate image of its complement")
    return gate


def multicollapse_round(
    c: CubeComplex, hyperplane_ids, _trusted: bool = False
) -> tuple[CubeComplex, CollapseStep]:
    """Remove the minimal halfspaces of pairwise-disjoint extremal hyperplanes."""
    if not _trusted:
        require_cat0(c)
    ids = list(hyperplane_ids)
    extremal = {h.id: hs for h, hs in extremal_hyperplanes(c)}
    hps = {h.id: h for h in compute_hyperplanes(c)}
    for hid in ids:
        if hid not in extremal:
            raise NotExtremalError(f"hyperplane {hid} does not bound a minimal halfspace")
    cg = crossing_graph(c)
    eset = cg.edge_set()
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            a, b = min(ids[i], ids[j]), max(ids[i], ids[j])
            if a == b or (a, b) in eset:
                raise NotDisjointError(f"hyperplanes {a} and {b} are not disjoint")
    removed_sets = [extremal[hid].vertices for hid in ids]
    union: set = set()
    for rs in removed_sets:
        if union & rs:
            raise NotDisjointError("removed halfspaces overlap")
        union |= rs
    keep = [v for v in c.vertices if v not in union]
    # convexity of halfspaces guarantees no partial cubes; still assert it
    for arr in c.cubes:
        removed_positions = {i for i, v in enumerate(arr) if v in union}
        if removed_positions and len(removed_positions) != len(arr):
            ok, _, _ = _is_subcoset(removed_positions)
            if not ok:
                raise NotExtremalError(f"cube {arr} is cut non-facially by the removal")
    vertex_map = {}
    cuboids = []
    for hid, removed in zip(ids, removed_sets):
        gate = _gate_pairs(hps[hid].dual_edges, removed)
        vertex_map.update(gate)
        cuboids.append(frozenset(gate.values()))
    reduced = c.induced_subcomplex(keep)
    step = CollapseStep(
        removed=[(hid, rs) for hid, rs in zip(ids, removed_sets)],
        cuboids=cuboids,
        vertex_map=vertex_map,
    )
    return reduced, step


def collapse_all(c: CubeComplex) -> Decomposition:
    """Iterated multicollapse down to a single vertex.

    Each sweep colors the crossing graph once and walks the color classes in
    ascending order, recomputing extremality before every class round.
    """
    require_cat0(c)
    current = c
    steps: list[CollapseStep] = []
    while len(current.vertices) > 1:
        coloring = color_greedy(crossing_graph(current))
        edge_color = {}
        for h in compute_hyperplanes(current):
            col = coloring.assignment[h.id]
            for e in h.dual_edges:
                edge_color[e] = col
        for col in range(1, coloring.n + 1):
            if len(current.vertices) == 1:
                break
            chosen = [
                h.id
                for h, _ in extremal_hyperplanes(current)
                if edge_color[min(h.dual_edges)] == col
            ]
            if not chosen:
                continue
            current, step = multicollapse_round(current, chosen, _trusted=True)
            steps.append(step)
    return Decomposition(steps, base_vertex=current.vertices[0])


def _check_cuboid(c: CubeComplex, cuboid: frozenset):
    vs = set(c.vertices)
    if not cuboid <= vs:
        raise NotACuboidError(f"cuboid {sorted(cuboid)} has vertices outside the complex")
    if not c.underlying_graph().is_connected_set(cuboid):
        raise NotACuboidError(f"cuboid {sorted(cuboid)} is not connected")
    for arr in c.cubes:
        positions = {i for i, v in enumerate(arr) if v in cuboid}
        if not positions:
            continue
        ok, _, _ = _is_subcoset(positions)
        if not ok:
            raise NotACuboidError(
                f"cuboid {sorted(cuboid)} meets cube {arr} in a non-face", cube=arr
            )


def _expand_one(c: CubeComplex, cuboid: frozenset) -> tuple[CubeComplex, dict]:
    """Glue cuboid x [0,1]; returns the new complex and base -> fresh vertex map."""
    _check_cuboid(c, cuboid)
    next_id = max(c.vertices) + 1
    fresh = {}
    for v in sorted(cuboid):
        fresh[v] = next_id
        next_id += 1
    new_cubes = [arr for arr in c.cubes]
    for arr in c.cubes:
        if all(v in cuboid for v in arr):
            new_cubes.append(tuple(arr) + tuple(fresh[v] for v in arr))
    vertices = list(c.vertices) + list(fresh.values())
    return build_from_cubes(vertices, new_cubes), fresh


def expand_step(c: CubeComplex, cuboids) -> CubeComplex:
    """Glue one prism per cuboid (pairwise-disjoint vertex sets required)."""
    cuboids = [frozenset(l) for l in cuboids]
    seen: set = set()
    for l in cuboids:
        if seen & l:
            raise OverlapError("cuboids are not pairwise disjoint")
        seen |= l
    for l in cuboids:
        _check_cuboid(c, l)
    out = c
    for l in cuboids:
        out, _ = _expand_one(out, l)
    return out


def expand_all(d: Decomposition) -> tuple[CubeComplex, dict]:
    """Replay a decomposition from its base point.

    Returns the rebuilt complex together with the vertex relabeling
    rebuilt id -> original id that exhibits the isomorphism.
    """
    rebuilt = build_from_cubes([0], [[0]])
    to_orig = {0: d.base_vertex}
    from_orig = {d.base_vertex: 0}
    for step in reversed(d.steps):
        for (hid, removed), cuboid in zip(step.removed, step.cuboids):
            reb_cuboid = frozenset(from_orig[v] for v in cuboid)
            rebuilt, fresh = _expand_one(rebuilt, reb_cuboid)
            gate_to_removed: dict[int, list[int]] = {}
            for r in sorted(removed):
                gate_to_removed.setdefault(step.vertex_map[r], []).append(r)
            for base_orig in sorted(cuboid):
                rs = gate_to_removed[base_orig]
                if len(rs) != 1:
                    raise InputFormatError("vertex_map is not a bijection onto the cuboid")
                new_orig = rs[0]
                new_reb = fresh[from_orig[base_orig]]
                to_orig[new_reb] = new_orig
                from_orig[new_orig] = new_reb
    return rebuilt, to_orig


def is_isomorphic_by(c1: CubeComplex, c2: CubeComplex, relabel: dict) -> bool:
    """Whether ``relabel`` (c1 vertex -> c2 vertex) maps c1's cubes onto c2's."""
    if len(c1.vertices) != len(c2.vertices) or len(c1.cubes) != len(c2.cubes):
        return False
    if set(relabel) != set(c1.vertices) or set(relabel.values()) != set(c2.vertices):
        return False
    mapped = {frozenset(relabel[v] for v in arr) for arr in c1.cubes}
    return mapped == {frozenset(arr) for arr in c2.cubes}


def verify_decomposition(c: CubeComplex, d: Decomposition) -> DecompositionVerdict:
    """Replay every stage, checking the cuboid conditions and final isomorphism."""
    failures = []
    rebuilt = build_from_cubes([0], [[0]])
    to_orig = {0: d.base_vertex}
    from_orig = {d.base_vertex: 0}
    for si, step in enumerate(reversed(d.steps)):
        base = rebuilt
        if len(step.removed) != len(step.cuboids):
            failures.append(f"step {si}: removed/cuboid lists differ in length")
            break
        step_base = base
        ok_step = True
        for (hid, removed), cuboid in zip(step.removed, step.cuboids):
            try:
                reb_cuboid = frozenset(from_orig[v] for v in cuboid)
            except KeyError as exc:
                failures.append(f"step {si}: cuboid vertex missing from stage: {exc}")
                ok_step = False
                break
            try:
                _check_cuboid(step_base, reb_cuboid)
            except NotACuboidError as exc:
                failures.append(f"step {si}: NotACuboid: {exc}")
                ok_step = False
                break
            if len(removed) != len(cuboid):
                failures.append(f"step {si}: removed side and cuboid differ in size")
                ok_step = False
                break
            try:
                rebuilt, fresh = _expand_one(rebuilt, reb_cuboid)
            except NotACuboidError as exc:
                failures.append(f"step {si}: NotACuboid during expansion: {exc}")
                ok_step = False
                break
            gate_to_removed: dict[int, list[int]] = {}
            for r in sorted(removed):
                g = step.vertex_map.get(r)
                if g is None:
                    failures.append(f"step {si}: vertex {r} missing from vertex_map")
                    ok_step = False
                    break
                gate_to_removed.setdefault(g, []).append(r)
            if not ok_step:
                break
            for base_orig in sorted(cuboid):
                rs = gate_to_removed.get(base_orig, [])
                if len(rs) != 1:
                    failures.append(f"step {si}: vertex_map not bijective at gate {base_orig}")
                    ok_step = False
                    break
                new_orig = rs[0]
                new_reb = fresh[from_orig[base_orig]]
                to_orig[new_reb] = new_orig
                from_orig[new_orig] = new_reb
            if not ok_step:
                break
        # disjointness of the removed halfspaces within one step
        union: set = set()
        for _, removed in step.removed:
            if union & removed:
                failures.append(f"step {si}: removed halfspaces overlap")
                break
            union |= removed
        if not ok_step:
            break
    if not failures:
        if not is_isomorphic_by(rebuilt, c, to_orig):
            failures.append("NotIsomorphic: replayed complex does not match the original")
    return DecompositionVerdict(not failures, failures)


def coloring_from_decomposition(c: CubeComplex, d: Decomposition):
    """Color each hyperplane of ``c`` by the expansion step that created it.

    Crossing hyperplanes always come from different steps, so this is a valid
    coloring with at most ``len(d.steps)`` colors.
    """
    from .hyperplanes import Coloring, compute_hyperplanes

    rebuilt = build_from_cubes([0], [[0]])
    to_orig = {0: d.base_vertex}
    from_orig = {d.base_vertex: 0}
    vertical_step: dict[tuple, int] = {}  # vertical edge (in original ids) -> step no.
    for k, step in enumerate(reversed(d.steps), start=1):
        for (hid, removed), cuboid in zip(step.removed, step.cuboids):
            reb_cuboid = frozenset(from_orig[v] for v in cuboid)
            rebuilt, fresh = _expand_one(rebuilt, reb_cuboid)
            gate_to_removed: dict[int, list[int]] = {}
            for r in sorted(removed):
                gate_to_removed.setdefault(step.vertex_map[r], []).append(r)
            for base_orig in sorted(cuboid):
                (new_orig,) = gate_to_removed[base_orig]
                new_reb = fresh[from_orig[base_orig]]
                to_orig[new_reb] = new_orig
                from_orig[new_orig] = new_reb
                e = (base_orig, new_orig) if base_orig < new_orig else (new_orig, base_orig)
                vertical_step[e] = k
    if not is_isomorphic_by(rebuilt, c, to_orig):
        raise InputFormatError("decomposition does not replay to the given complex")
    assignment = {}
    for h in compute_hyperplanes(c):
        colors = {vertical_step[e] for e in h.dual_edges if e in vertical_step}
        if len(colors) != 1:
            raise AssertionError(f"hyperplane {h.id} spans {len(colors)} creation steps")
        assignment[h.id] = colors.pop()
    n = max(assignment.values(), default=0)
    return Coloring(assignment, n)


# -- serialization -------------------------------------------------------------


def to_obj(d: Decomposition) -> dict:
    steps_out = []
    for step in reversed(d.steps):  # file lists steps in expansion order
        pairs = []
        for (hid, removed), cuboid in zip(step.removed, step.cuboids):
            gate_to_removed = {}
            for r in sorted(removed):
                gate_to_removed[step.vertex_map[r]] = r
            for base in sorted(cuboid):
                pairs.append([base, gate_to_removed[base]])
        steps_out.append(
            {
                "cuboids": [sorted(l) for l in step.cuboids],
                "new_vertices": pairs,
            }
        )
    return {"format": DECOMP_FORMAT, "base_vertex": d.base_vertex, "steps": steps_out}


def from_obj(obj: dict) -> Decomposition:
    if not isinstance(obj, dict) or obj.get("format") != DECOMP_FORMAT:
        raise InputFormatError(f"expected format {DECOMP_FORMAT!r}")
    try:
        base = int(obj["base_vertex"])
        steps = []
        for entry in obj["steps"]:
            cuboids = [frozenset(int(v) for v in l) for l in entry["cuboids"]]
            pairs = [(int(a), int(b)) for a, b in entry["new_vertices"]]
            it = iter(pairs)
            removed = []
            vertex_map = {}
            for l in cuboids:
                chunk = [next(it) for _ in range(len(l))]
                removed.append((None, frozenset(b for _, b in chunk)))
                for a, b in chunk:
                    vertex_map[b] = a
            steps.append(CollapseStep(removed, cuboids, vertex_map))
    except (KeyError, TypeError, ValueError, StopIteration) as exc:
        raise InputFormatError(f"malformed decomposition object: {exc}") from exc
    steps.reverse()  # back to collapse order
    return Decomposition(steps, base)


def dumps(d: Decomposition) -> str:
    return json.dumps(to_obj(d), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> Decomposition:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from exc
    return from_obj(obj)
