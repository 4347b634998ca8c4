# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gallery kernels; semantics mirror _speed_py exactly."""

from libc.math cimport sqrt, fabs, pow

BACKEND = "cython"

DEF GOLDEN = 0.6180339887498949


cdef inline double _side_value(const int[:] idx, const unsigned char[:] flip,
                               const double[:] base, Py_ssize_t pos,
                               const double[:] vals) nogil:
    cdef int i = idx[pos]
    if i < 0:
        return base[pos]
    if flip[pos]:
        return 1.0 - vals[i]
    return vals[i]


cdef double _eval(double code, int nseg, const int[:] seg_off, const int[:] seg_dim,
                  const int[:] lidx, const unsigned char[:] lflip, const double[:] lbase,
                  const int[:] ridx, const unsigned char[:] rflip, const double[:] rbase,
                  const double[:] vals) nogil:
    cdef double total = 0.0, acc, r
    cdef Py_ssize_t s, l, o, d
    for s in range(nseg):
        o = seg_off[s]
        d = seg_dim[s]
        acc = 0.0
        if code == 1.0:
            for l in range(o, o + d):
                acc += fabs(_side_value(lidx, lflip, lbase, l, vals)
                            - _side_value(ridx, rflip, rbase, l, vals))
        elif code == 0.0:
            for l in range(o, o + d):
                r = fabs(_side_value(lidx, lflip, lbase, l, vals)
                         - _side_value(ridx, rflip, rbase, l, vals))
                if r > acc:
                    acc = r
        elif code == 2.0:
            for l in range(o, o + d):
                r = _side_value(lidx, lflip, lbase, l, vals) \
                    - _side_value(ridx, rflip, rbase, l, vals)
                acc += r * r
            acc = sqrt(acc)
        else:
            for l in range(o, o + d):
                r = fabs(_side_value(lidx, lflip, lbase, l, vals)
                         - _side_value(ridx, rflip, rbase, l, vals))
                acc += pow(r, code)
            acc = pow(acc, 1.0 / code)
        total += acc
    return total


def eval_length(double code, int nseg, const int[:] seg_off, const int[:] seg_dim,
                const int[:] lidx, const unsigned char[:] lflip, const double[:] lbase,
                const int[:] ridx, const unsigned char[:] rflip, const double[:] rbase,
                const double[:] vals):
    return _eval(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals)


def greedy_cover(double[:] s, const int[:] win_l, const int[:] win_r, const double[:] gaps):
    cdef Py_ssize_t w, i
    cdef double need, total = 0.0
    for w in range(gaps.shape[0]):
        need = gaps[w]
        for i in range(win_l[w], win_r[w] + 1):
            need -= s[i]
        if need > 0.0:
            s[win_r[w]] += need
    for i in range(s.shape[0]):
        total += s[i]
    return total


cdef void _gather(double code, int seg, int ax, int side,
                  const int[:] seg_off, const int[:] seg_dim,
                  const int[:] lidx, const unsigned char[:] lflip, const double[:] lbase,
                  const int[:] ridx, const unsigned char[:] rflip, const double[:] rbase,
                  const double[:] vals, double* tau, double* mass) nogil:
    cdef Py_ssize_t o = seg_off[seg]
    cdef Py_ssize_t pos = o + ax
    cdef double opp, r
    cdef unsigned char myflip
    cdef Py_ssize_t l
    if side == 0:
        opp = _side_value(ridx, rflip, rbase, pos, vals)
        myflip = lflip[pos]
    else:
        opp = _side_value(lidx, lflip, lbase, pos, vals)
        myflip = rflip[pos]
    tau[0] = 1.0 - opp if myflip else opp
    mass[0] = 0.0
    for l in range(o, o + seg_dim[seg]):
        if l == pos:
            continue
        r = fabs(_side_value(lidx, lflip, lbase, l, vals)
                 - _side_value(ridx, rflip, rbase, l, vals))
        if code == 2.0:
            mass[0] += r * r
        else:
            mass[0] += pow(r, code)


cdef inline double _p2_point(double tau1, double m1, double tau2, double m2,
                             double lo, double hi) nogil:
    cdef double a, b, fl, fh, s1, s2, t
    if m1 <= 0.0 and m2 <= 0.0:
        if tau1 <= tau2:
            a = tau1; b = tau2
        else:
            a = tau2; b = tau1
        fl = lo if lo > a else a
        fh = hi if hi < b else b
        if fl <= fh:
            return 0.5 * (fl + fh)
        return lo if a > hi else hi
    if m1 <= 0.0:
        t = tau1
    elif m2 <= 0.0:
        t = tau2
    else:
        s1 = sqrt(m1); s2 = sqrt(m2)
        t = (tau1 * s2 + tau2 * s1) / (s1 + s2)
    if t < lo:
        t = lo
    if t > hi:
        t = hi
    return t


cdef inline double _gp_obj(double t, double tau1, double m1, double tau2, double m2,
                           double code, bint two) nogil:
    cdef double g = pow(pow(fabs(t - tau1), code) + m1, 1.0 / code)
    if two:
        g += pow(pow(fabs(t - tau2), code) + m2, 1.0 / code)
    return g


cdef double _golden(double tau1, double m1, double tau2, double m2, double code,
                    bint two, double lo, double hi) nogil:
    cdef double a = lo, b = hi, c, d, fc, fd
    cdef int it
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = _gp_obj(c, tau1, m1, tau2, m2, code, two)
    fd = _gp_obj(d, tau1, m1, tau2, m2, code, two)
    for it in range(80):
        if fc < fd:
            b = d; d = c; fd = fc
            c = b - GOLDEN * (b - a)
            fc = _gp_obj(c, tau1, m1, tau2, m2, code, two)
        else:
            a = c; c = d; fc = fd
            d = a + GOLDEN * (b - a)
            fd = _gp_obj(d, tau1, m1, tau2, m2, code, two)
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def cd_minimize(double code, int nseg, const int[:] seg_off, const int[:] seg_dim,
                const int[:] lidx, const unsigned char[:] lflip, const double[:] lbase,
                const int[:] ridx, const unsigned char[:] rflip, const double[:] rbase,
                double[:] vals, const double[:] lo, const double[:] hi,
                const int[:] mov_seg1, const int[:] mov_ax1, const int[:] mov_side1,
                const int[:] mov_seg2, const int[:] mov_ax2, const int[:] mov_side2,
                int max_sweeps, double tol):
    cdef Py_ssize_t n = vals.shape[0]
    cdef double prev, cur, tau1, m1, tau2, m2, t
    cdef Py_ssize_t v
    cdef int sweep
    cdef bint two
    prev = _eval(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals)
    for sweep in range(max_sweeps):
        for v in range(n):
            if mov_seg1[v] < 0 or lo[v] >= hi[v]:
                continue
            _gather(code, mov_seg1[v], mov_ax1[v], mov_side1[v], seg_off, seg_dim,
                    lidx, lflip, lbase, ridx, rflip, rbase, vals, &tau1, &m1)
            two = mov_seg2[v] >= 0
            if two:
                _gather(code, mov_seg2[v], mov_ax2[v], mov_side2[v], seg_off, seg_dim,
                        lidx, lflip, lbase, ridx, rflip, rbase, vals, &tau2, &m2)
            else:
                tau2 = tau1; m2 = m1
            if code == 2.0:
                if two:
                    vals[v] = _p2_point(tau1, m1, tau2, m2, lo[v], hi[v])
                else:
                    t = tau1
                    if t < lo[v]:
                        t = lo[v]
                    if t > hi[v]:
                        t = hi[v]
                    vals[v] = t
            else:
                vals[v] = _golden(tau1, m1, tau2, m2, code, two, lo[v], hi[v])
        cur = _eval(code, nseg, seg_off, seg_dim, lidx, lflip, lbase, ridx, rflip, rbase, vals)
        if prev - cur < tol:
            return cur
        prev = cur
    return prev
