"""Pure-Python gallery kernels; semantics mirrored by the compiled _speed module."""

from __future__ import annotations

import math

BACKEND = "python"

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _side_value(idx, flip, base, pos, vals):
    i = idx[pos]
    if i < 0:
        return base[pos]
    v = vals[i]
    return 1.0 - v if flip[pos] else v


def eval_length(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals):
    total = 0.0
    for s in range(nseg):
        o = seg_off[s]
        d = seg_dim[s]
        if code == 1.0:
            acc = 0.0
            for l in range(o, o + d):
                acc += abs(
                    _side_value(lidx, lflip, lbase, l, vals)
                    - _side_value(ridx, rflip, rbase, l, vals)
                )
        elif code == 0.0:  # max norm
            acc = 0.0
            for l in range(o, o + d):
                r = abs(
                    _side_value(lidx, lflip, lbase, l, vals)
                    - _side_value(ridx, rflip, rbase, l, vals)
                )
                if r > acc:
                    acc = r
        elif code == 2.0:
            acc = 0.0
            for l in range(o, o + d):
                r = _side_value(lidx, lflip, lbase, l, vals) - _side_value(
                    ridx, rflip, rbase, l, vals
                )
                acc += r * r
            acc = math.sqrt(acc)
        else:
            acc = 0.0
            for l in range(o, o + d):
                r = abs(
                    _side_value(lidx, lflip, lbase, l, vals)
                    - _side_value(ridx, rflip, rbase, l, vals)
                )
                acc += r**code
            acc = acc ** (1.0 / code)
        total += acc
    return total


def greedy_cover(s, win_l, win_r, gaps):
    """Minimal total raise of s meeting interval sum constraints.

    Windows must arrive sorted by right endpoint; deficits are added at the
    rightmost segment, which is optimal for interval constraint systems.
    """
    for w in range(len(gaps)):
        need = gaps[w]
        for i in range(win_l[w], win_r[w] + 1):
            need -= s[i]
        if need > 0.0:
            s[win_r[w]] += need
    total = 0.0
    for i in range(len(s)):
        total += s[i]
    return total


def _gather(code, v, seg, ax, side, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals):
    """Target (in the variable's own frame) and the residual mass of the other axes."""
    o = seg_off[seg]
    pos = o + ax
    if side == 0:
        opp = _side_value(ridx, rflip, rbase, pos, vals)
        myflip = lflip[pos]
    else:
        opp = _side_value(lidx, lflip, lbase, pos, vals)
        myflip = rflip[pos]
    tau = 1.0 - opp if myflip else opp
    mass = 0.0
    for l in range(o, o + seg_dim[seg]):
        if l == pos:
            continue
        r = abs(
            _side_value(lidx, lflip, lbase, l, vals)
            - _side_value(ridx, rflip, rbase, l, vals)
        )
        if code == 2.0:
            mass += r * r
        else:
            mass += r**code
    return tau, mass


def _p2_point(tau1, m1, tau2, m2, lo, hi):
    if m1 <= 0.0 and m2 <= 0.0:
        a, b = (tau1, tau2) if tau1 <= tau2 else (tau2, tau1)
        fl, fh = max(lo, a), min(hi, b)
        if fl <= fh:
            return 0.5 * (fl + fh)
        return lo if a > hi else hi
    if m1 <= 0.0:
        t = tau1
    elif m2 <= 0.0:
        t = tau2
    else:
        s1, s2 = math.sqrt(m1), math.sqrt(m2)
        t = (tau1 * s2 + tau2 * s1) / (s1 + s2)
    return min(max(t, lo), hi)


def _golden(f, lo, hi, iters=80):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def cd_minimize(
    code,
    nseg,
    seg_off,
    seg_dim,
    lidx,
    lflip,
    lbase,
    ridx,
    rflip,
    rbase,
    vals,
    lo,
    hi,
    mov_seg1,
    mov_ax1,
    mov_side1,
    mov_seg2,
    mov_ax2,
    mov_side2,
    max_sweeps,
    tol,
):
    """Cyclic coordinate descent; exact per-coordinate minimizers for p = 2."""
    n = len(vals)
    prev = eval_length(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals)
    for _ in range(max_sweeps):
        for v in range(n):
            if mov_seg1[v] < 0 or lo[v] >= hi[v]:
                continue
            tau1, m1 = _gather(
                code, v, mov_seg1[v], mov_ax1[v], mov_side1[v],
                seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals,
            )
            if mov_seg2[v] >= 0:
                tau2, m2 = _gather(
                    code, v, mov_seg2[v], mov_ax2[v], mov_side2[v],
                    seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals,
                )
            else:
                tau2, m2 = tau1, m1
            if code == 2.0:
                if mov_seg2[v] >= 0:
                    vals[v] = _p2_point(tau1, m1, tau2, m2, lo[v], hi[v])
                else:
                    vals[v] = min(max(tau1, lo[v]), hi[v])
            else:
                if mov_seg2[v] >= 0:
                    f = lambda t: (abs(t - tau1) ** code + m1) ** (1.0 / code) + (
                        abs(t - tau2) ** code + m2
                    ) ** (1.0 / code)
                else:
                    f = lambda t: (abs(t - tau1) ** code + m1) ** (1.0 / code)
                vals[v] = _golden(f, lo[v], hi[v])
        cur = eval_length(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals)
        if prev - cur < tol:
            return cur
        prev = cur
    return prev
