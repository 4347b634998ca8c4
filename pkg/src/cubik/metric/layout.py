"""Gallery layouts: the box-constrained break-point problems behind distances.

A gallery is a cube sequence with consecutive members sharing a face. A
string through it is determined by one break point per shared face plus the
two endpoints; its length is a convex function of those points. The layout
flattens all coordinate bookkeeping (axis matchings, reflections, pinned
values) into arrays so the per-norm minimizers can run over plain loops.

Minimizers:
  p = 1    exact, per coordinate chain (interval walk),
  p = inf  exact, interval-covering LP solved greedily over chain windows,
  p = 2    cyclic coordinate descent with analytic per-coordinate updates,
  other p  coordinate descent with golden-section line minimization.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels

P_INF = 0.0  # internal code for the maximum norm


def p_code(p) -> float:
    if p in ("inf", "oo", math.inf):
        return P_INF
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1 or inf")
    return p


class Chain:
    """One coordinate chain: linked break-point coordinates between anchors."""

    __slots__ = ("vars", "parities", "edge_segs", "left_const", "left_seg", "right_const", "right_seg")

    def __init__(self, vars, parities, edge_segs, left_const, left_seg, right_const, right_seg):
        self.vars = vars              # absolute value indices, in chain order
        self.parities = parities      # z = 1 - t when parity is set
        self.edge_segs = edge_segs    # segments of the var-var links
        self.left_const = left_const  # z-frame const anchor or None
        self.left_seg = left_seg      # segment of the const edge (when present)
        self.right_const = right_const
        self.right_seg = right_seg


class GalleryLayout:
    def __init__(self, cx, cubes, src_frame: int, dst_frame: int | None):
        """``dst_frame`` None builds a prefix layout (free endpoint on the last face)."""
        self.cx = cx
        self.cubes = tuple(cubes)
        self.src_frame = src_frame
        self.dst_frame = dst_frame
        self.terminal = dst_frame is not None

        K = len(self.cubes) - 1
        faces = []
        for i in range(1, K + 1):
            fid = cx.common_face(self.cubes[i - 1], self.cubes[i])
            if fid is None:
                raise ValueError("consecutive gallery cubes share no face")
            faces.append(fid)
        frames = [src_frame] + faces
        if self.terminal:
            frames.append(dst_frame)
        self.frames = frames
        self.n_points = len(frames)
        self.point_dim = [cx.cube_dim(f) for f in frames]
        self.point_off = np.zeros(self.n_points + 1, dtype=np.int32)
        for j in range(self.n_points):
            self.point_off[j + 1] = self.point_off[j] + self.point_dim[j]
        total = int(self.point_off[-1])
        self.vals = np.zeros(total, dtype=np.float64)
        self.lo = np.zeros(total, dtype=np.float64)
        self.hi = np.ones(total, dtype=np.float64)

        self.nseg = K + 1 if self.terminal else K
        seg_dims = [cx.cube_dim(self.cubes[i]) for i in range(self.nseg)]
        self.seg_off = np.zeros(self.nseg + 1, dtype=np.int32)
        for i in range(self.nseg):
            self.seg_off[i + 1] = self.seg_off[i] + seg_dims[i]
        nax = int(self.seg_off[-1])
        self.seg_dim = np.array(seg_dims, dtype=np.int32)
        self.lidx = np.full(nax, -1, dtype=np.int32)
        self.lflip = np.zeros(nax, dtype=np.uint8)
        self.lbase = np.zeros(nax, dtype=np.float64)
        self.ridx = np.full(nax, -1, dtype=np.int32)
        self.rflip = np.zeros(nax, dtype=np.uint8)
        self.rbase = np.zeros(nax, dtype=np.float64)

        for i in range(self.nseg):
            cube = self.cubes[i]
            self._fill_side(i, frames[i], self.point_off[i], cube, self.lidx, self.lflip, self.lbase)
            self._fill_side(i, frames[i + 1], self.point_off[i + 1], cube, self.ridx, self.rflip, self.rbase)

        self._build_movables()
        self._build_chains()

    def _fill_side(self, seg, frame, off, cube, idx, flip, base):
        cx = self.cx
        o = int(self.seg_off[seg])
        if frame == cube:
            for l in range(self.seg_dim[seg]):
                idx[o + l] = off + l
            return
        axes, pinned = cx.embedding(frame, cube)
        for j, (a, fl) in enumerate(axes):
            idx[o + a] = off + j
            flip[o + a] = 1 if fl else 0
        for a, val in pinned:
            idx[o + a] = -1
            base[o + a] = float(val)

    # -- movable-coordinate metadata for coordinate descent -----------------

    def _build_movables(self):
        n = len(self.vals)
        app: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]  # (seg, axis, side)
        for i in range(self.nseg):
            o = int(self.seg_off[i])
            for l in range(self.seg_dim[i]):
                if self.lidx[o + l] >= 0:
                    app[self.lidx[o + l]].append((i, l, 0))
                if self.ridx[o + l] >= 0:
                    app[self.ridx[o + l]].append((i, l, 1))
        self.mov_seg1 = np.full(n, -1, dtype=np.int32)
        self.mov_ax1 = np.zeros(n, dtype=np.int32)
        self.mov_side1 = np.zeros(n, dtype=np.int32)
        self.mov_seg2 = np.full(n, -1, dtype=np.int32)
        self.mov_ax2 = np.zeros(n, dtype=np.int32)
        self.mov_side2 = np.zeros(n, dtype=np.int32)
        for v, entries in enumerate(app):
            if len(entries) >= 1:
                self.mov_seg1[v], self.mov_ax1[v], self.mov_side1[v] = entries[0]
            if len(entries) >= 2:
                self.mov_seg2[v], self.mov_ax2[v], self.mov_side2[v] = entries[1]
        self._appearances = app

    # -- chain extraction ---------------------------------------------------

    def _build_chains(self):
        n = len(self.vals)
        # neighbors[v] = list of (other var or None, const value in the OTHER
        # frame, seg, my_flip, other_flip)
        nbrs: list[list] = [[] for _ in range(n)]
        floor1 = np.zeros(self.nseg, dtype=np.float64)
        floorinf = np.zeros(self.nseg, dtype=np.float64)
        for i in range(self.nseg):
            o = int(self.seg_off[i])
            for l in range(self.seg_dim[i]):
                li, ri = self.lidx[o + l], self.ridx[o + l]
                lf, rf = bool(self.lflip[o + l]), bool(self.rflip[o + l])
                if li < 0 and ri < 0:
                    d = abs(self.lbase[o + l] - self.rbase[o + l])
                    floor1[i] += d
                    floorinf[i] = max(floorinf[i], d)
                elif li >= 0 and ri >= 0:
                    nbrs[li].append((ri, None, i, lf, rf))
                    nbrs[ri].append((li, None, i, rf, lf))
                elif li >= 0:
                    nbrs[li].append((None, self.rbase[o + l], i, lf, False))
                else:
                    nbrs[ri].append((None, self.lbase[o + l], i, rf, False))
        self.floor1 = floor1
        self.floorinf = floorinf

        chains: list[Chain] = []
        visited = [False] * n
        for v in range(n):
            if visited[v] or not nbrs[v]:
                continue
            # walk to one end first
            links = nbrs[v]
            var_links = [e for e in links if e[0] is not None]
            if len(var_links) == 2:
                continue  # interior var; will be reached from an end
            chains.append(self._walk_chain(v, nbrs, visited))
        # a cycle of var-var links would have no end; galleries are paths, so
        # each coordinate chain is a path too, but guard anyway
        for v in range(n):
            if nbrs[v] and not visited[v]:
                chains.append(self._walk_chain(v, nbrs, visited))
        self.chains = chains

    def _walk_chain(self, start, nbrs, visited) -> Chain:
        vars_ = [start]
        parities = [False]
        edge_segs: list[int] = []
        left_const = None
        left_seg = -1
        consts = [e for e in nbrs[start] if e[0] is None]
        if consts:
            _, c, seg, myf, _ = consts[0]
            left_const = (1.0 - c) if myf else c  # in start's t-frame; z == t at parity False
            left_seg = seg
        visited[start] = True
        prev = None
        cur = start
        parity = False
        right_const = None
        right_seg = -1
        while True:
            nxts = [e for e in nbrs[cur] if e[0] is not None and e[0] != prev]
            if not nxts:
                tail_consts = [e for e in nbrs[cur] if e[0] is None]
                if cur != start and tail_consts:
                    _, c, seg, myf, _ = tail_consts[0]
                    cz = (1.0 - c) if myf else c
                    right_const = (1.0 - cz) if parity else cz
                    right_seg = seg
                elif cur == start and len(tail_consts) > 1:
                    _, c, seg, myf, _ = tail_consts[1]
                    right_const = (1.0 - c) if myf else c
                    right_seg = seg
                break
            other, _, seg, myf, of = nxts[0]
            # residual |emb_my(t) - emb_other(t')|: emb equal when flips equal
            edge_segs.append(seg)
            parity = parity ^ (myf != of)
            vars_.append(other)
            parities.append(parity)
            visited[other] = True
            prev, cur = cur, other
        return Chain(vars_, parities, edge_segs, left_const, left_seg, right_const, right_seg)

    # -- endpoints ----------------------------------------------------------

    def set_source(self, lo, hi):
        o = int(self.point_off[0])
        d = self.point_dim[0]
        self.lo[o : o + d] = lo
        self.hi[o : o + d] = hi
        self.vals[o : o + d] = 0.5 * (np.asarray(lo) + np.asarray(hi))

    def set_target(self, lo, hi):
        if not self.terminal:
            raise ValueError("prefix layout has no terminal endpoint")
        o = int(self.point_off[-2])
        d = self.point_dim[-1]
        self.lo[o : o + d] = lo
        self.hi[o : o + d] = hi
        self.vals[o : o + d] = 0.5 * (np.asarray(lo) + np.asarray(hi))

    def reset_interior(self):
        for j in range(self.n_points):
            is_src = j == 0
            is_dst = self.terminal and j == self.n_points - 1
            if is_src or is_dst:
                continue
            o, d = int(self.point_off[j]), self.point_dim[j]
            self.lo[o : o + d] = 0.0
            self.hi[o : o + d] = 1.0
            self.vals[o : o + d] = 0.5

    # -- anchors in z-frame ---------------------------------------------------

    def _chain_anchors(self, ch: Chain):
        """Anchor intervals (z-frame) and the full segment window of a chain."""
        if ch.left_const is not None:
            la, lb = ch.left_const, ch.left_const
        else:
            v = ch.vars[0]
            lo, hi = self.lo[v], self.hi[v]
            la, lb = (1.0 - hi, 1.0 - lo) if ch.parities[0] else (lo, hi)
        if ch.right_const is not None:
            ra, rb = ch.right_const, ch.right_const
        else:
            v = ch.vars[-1]
            lo, hi = self.lo[v], self.hi[v]
            ra, rb = (1.0 - hi, 1.0 - lo) if ch.parities[-1] else (lo, hi)
        segs = list(ch.edge_segs)
        if ch.left_seg >= 0:
            segs.append(ch.left_seg)
        if ch.right_seg >= 0:
            segs.append(ch.right_seg)
        return (la, lb), (ra, rb), segs

    # -- solvers --------------------------------------------------------------

    def solve(self, p, assign: bool = False, max_sweeps: int = 10000, tol: float = 1e-12) -> float:
        code = p_code(p)
        if code == 1.0:
            return self._solve_p1(assign)
        if code == P_INF:
            return self._solve_pinf(assign)
        return self._solve_descent(code, max_sweeps, tol)

    def _solve_p1(self, assign: bool) -> float:
        total = float(self.floor1.sum())
        for ch in self.chains:
            boxes = self._chain_boxes(ch)
            cost, zs = _walk_intervals(boxes, assign)
            total += cost
            if assign:
                npad = 1 if ch.left_const is not None else 0
                for v, par, z in zip(ch.vars, ch.parities, zs[npad : npad + len(ch.vars)]):
                    self.vals[v] = 1.0 - z if par else z
        return total

    def _chain_boxes(self, ch: Chain):
        """Node boxes along a chain in the z-frame (consts are degenerate)."""
        boxes = []
        if ch.left_const is not None:
            boxes.append((ch.left_const, ch.left_const))
        for v, par in zip(ch.vars, ch.parities):
            lo, hi = self.lo[v], self.hi[v]
            boxes.append((1.0 - hi, 1.0 - lo) if par else (lo, hi))
        if ch.right_const is not None:
            boxes.append((ch.right_const, ch.right_const))
        return boxes

    def _solve_pinf(self, assign: bool) -> float:
        wins = []
        for ch in self.chains:
            (la, lb), (ra, rb), segs = self._chain_anchors(ch)
            gap = max(0.0, la - rb, ra - lb)
            if not segs:
                continue
            wins.append((min(segs), max(segs), gap, ch))
        wins.sort(key=lambda w: (w[1], w[0]))
        if wins:
            wl = np.array([w[0] for w in wins], dtype=np.int32)
            wr = np.array([w[1] for w in wins], dtype=np.int32)
            gaps = np.array([w[2] for w in wins], dtype=np.float64)
        else:
            wl = np.zeros(0, dtype=np.int32)
            wr = np.zeros(0, dtype=np.int32)
            gaps = np.zeros(0, dtype=np.float64)
        s = self.floorinf.copy()
        value = kernels.greedy_cover(s, wl, wr, gaps)
        if assign:
            self._assign_pinf(s, wins)
        return value

    def _assign_pinf(self, s, wins):
        for _, _, gap, ch in wins:
            (la, lb), (ra, rb), _ = self._chain_anchors(ch)
            if gap <= 0.0:
                zlo, zhi = max(la, ra), min(lb, rb)
                zs = [0.5 * (zlo + zhi)] * len(ch.vars)
            else:
                if la > rb:
                    start, end = la, rb
                else:
                    start, end = lb, ra
                sign = 1.0 if end >= start else -1.0
                cur = start
                if ch.left_seg >= 0:
                    cur = start + sign * min(abs(end - start), s[ch.left_seg])
                zs = [cur]
                for seg in ch.edge_segs:
                    cur = cur + sign * min(abs(end - cur), s[seg])
                    zs.append(cur)
            for v, par, z in zip(ch.vars, ch.parities, zs):
                t = 1.0 - z if par else z
                self.vals[v] = min(max(t, self.lo[v]), self.hi[v])

    def _solve_descent(self, code: float, max_sweeps: int, tol: float) -> float:
        # warm start from the exact l1 assignment
        self._solve_p1(assign=True)
        return kernels.cd_minimize(
            code,
            self.nseg,
            self.seg_off,
            self.seg_dim,
            self.lidx,
            self.lflip,
            self.lbase,
            self.ridx,
            self.rflip,
            self.rbase,
            self.vals,
            self.lo,
            self.hi,
            self.mov_seg1,
            self.mov_ax1,
            self.mov_side1,
            self.mov_seg2,
            self.mov_ax2,
            self.mov_side2,
            max_sweeps,
            tol,
        )

    def length(self, p) -> float:
        code = p_code(p)
        return kernels.eval_length(
            code,
            self.nseg,
            self.seg_off,
            self.seg_dim,
            self.lidx,
            self.lflip,
            self.lbase,
            self.ridx,
            self.rflip,
            self.rbase,
            self.vals,
        )

    def point_coords(self, j: int) -> tuple[float, ...]:
        o, d = int(self.point_off[j]), self.point_dim[j]
        return tuple(float(x) for x in self.vals[o : o + d])


def _walk_intervals(boxes, assign):
    """Min total movement through a sequence of interval constraints.

    Returns (cost, positions); positions come from a clamping backward pass
    over the forward reachability intervals, so they are feasible and optimal.
    """
    cost = 0.0
    lo, hi = boxes[0]
    reach = [(lo, hi)]
    for blo, bhi in boxes[1:]:
        nlo, nhi = max(lo, blo), min(hi, bhi)
        if nlo > nhi:
            if blo > hi:
                cost += blo - hi
                nlo = nhi = blo
            else:
                cost += lo - bhi
                nlo = nhi = bhi
        lo, hi = nlo, nhi
        reach.append((lo, hi))
    if not assign:
        return cost, None
    zs = [0.0] * len(boxes)
    zs[-1] = 0.5 * (reach[-1][0] + reach[-1][1])
    for i in range(len(boxes) - 2, -1, -1):
        zs[i] = min(max(zs[i + 1], reach[i][0]), reach[i][1])
    return cost, zs
