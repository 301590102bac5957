# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free sparse row reduction on int64.

Same algorithm and output contract as :func:`hhbv.linalg._reduce.reduce_rows`.
Every multiply/subtract is overflow-checked; on overflow ``OverflowError`` is
raised and the caller re-runs the reduction with Python integers.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    static inline int hh_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int hh_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    bint hh_mul_ovf(long long a, long long b, long long *r) nogil
    bint hh_sub_ovf(long long a, long long b, long long *r) nogil

DEF LL_MIN = -9223372036854775807 - 1


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef tuple _combine(long long ca, long long[::1] ac, long long[::1] av,
                    long long cb, long long[::1] bc, long long[::1] bv):
    cdef Py_ssize_t na = ac.shape[0], nb = bc.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0, t
    oc = np.empty(na + nb, dtype=np.int64)
    ov = np.empty(na + nb, dtype=np.int64)
    cdef long long[::1] occ = oc
    cdef long long[::1] ovv = ov
    cdef long long t1, t2, v, g = 0
    cdef bint bad = False
    while i < na and j < nb:
        if ac[i] == bc[j]:
            bad = hh_mul_ovf(ca, av[i], &t1) or hh_mul_ovf(cb, bv[j], &t2) or hh_sub_ovf(t1, t2, &v)
            if bad:
                raise OverflowError
            if v != 0:
                occ[k] = ac[i]
                ovv[k] = v
                k += 1
            i += 1
            j += 1
        elif ac[i] < bc[j]:
            if hh_mul_ovf(ca, av[i], &v):
                raise OverflowError
            occ[k] = ac[i]
            ovv[k] = v
            k += 1
            i += 1
        else:
            if hh_mul_ovf(cb, bv[j], &t2) or hh_sub_ovf(0, t2, &v):
                raise OverflowError
            occ[k] = bc[j]
            ovv[k] = v
            k += 1
            j += 1
    while i < na:
        if hh_mul_ovf(ca, av[i], &v):
            raise OverflowError
        occ[k] = ac[i]
        ovv[k] = v
        k += 1
        i += 1
    while j < nb:
        if hh_mul_ovf(cb, bv[j], &t2) or hh_sub_ovf(0, t2, &v):
            raise OverflowError
        occ[k] = bc[j]
        ovv[k] = v
        k += 1
        j += 1
    for t in range(k):
        if ovv[t] == LL_MIN:
            raise OverflowError
        g = _gcd(g, ovv[t])
        if g == 1:
            break
    if g > 1:
        for t in range(k):
            ovv[t] = ovv[t] // g
    return oc[:k], ov[:k]


cdef Py_ssize_t _find(long long[::1] cols, long long c):
    cdef Py_ssize_t lo = 0, hi = cols.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cols[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef tuple _eliminate(object cols, object vals, long long col, tuple prow):
    cdef long long[::1] rc = cols
    cdef long long[::1] rv = vals
    cdef long long[::1] pc = prow[0]
    cdef long long[::1] pv = prow[1]
    cdef Py_ssize_t k = _find(rc, col)
    cdef long long a = pv[0], b = rv[k]
    cdef long long g = _gcd(a, b)
    return _combine(a // g, rc, rv, b // g, pc, pv)


cdef tuple _positive(object cols, object vals):
    cdef long long[::1] v = vals
    if v.shape[0] and v[0] < 0:
        return cols, -vals
    return cols, vals


def reduce_rows(list rows, Py_ssize_t ncols):
    """Fully reduce integer rows given as ``(cols, vals)`` int64 array pairs."""
    lead_arr = np.full(max(ncols, 1), -1, dtype=np.int64)
    cdef long long[::1] lead_of = lead_arr
    cdef list stored = []
    cdef long long k, c0
    cdef Py_ssize_t idx
    cdef long long[::1] cv
    for row in rows:
        cols = np.ascontiguousarray(row[0], dtype=np.int64)
        vals = np.ascontiguousarray(row[1], dtype=np.int64)
        while cols.shape[0] > 0:
            cv = cols
            c0 = cv[0]
            k = lead_of[c0]
            if k < 0:
                break
            cols, vals = _eliminate(cols, vals, c0, stored[k])
        if cols.shape[0] == 0:
            continue
        cols, vals = _combine(1, cols, vals, 0, cols[:0], vals[:0])
        cols, vals = _positive(cols, vals)
        cv = cols
        lead_of[cv[0]] = len(stored)
        stored.append((cols, vals))

    order = sorted(range(len(stored)), key=lambda i: int(stored[i][0][0]))
    for idx in reversed(range(len(order))):
        k = order[idx]
        cols, vals = stored[k]
        cv = cols
        c0 = cv[0]
        targets = [int(c) for c in cols[1:] if lead_of[c] >= 0]
        for c in targets:
            cols, vals = _eliminate(cols, vals, c, stored[lead_of[c]])
        cols, vals = _positive(cols, vals)
        stored[k] = (cols, vals)
    pivots = [int(stored[k][0][0]) for k in order]
    return pivots, [stored[k] for k in order]


# ------------------------------------------------------------------ modular


cdef extern from *:
    """
    static inline long long hh_mulmod(long long a, long long b, long long p) {
        return (long long)(((__int128)a * b) % p);
    }
    """
    long long hh_mulmod(long long a, long long b, long long p) nogil


cdef long long _invmod(long long a, long long p):
    cdef long long t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t, nt = nt, tmp
        tmp = r - q * nr
        r, nr = nr, tmp
    if t < 0:
        t += p
    return t


cdef tuple _axpy_mod(long long[::1] ac, long long[::1] av, long long f,
                     long long[::1] bc, long long[::1] bv, long long p):
    """``a - f b`` mod ``p``; both rows sorted by column."""
    cdef Py_ssize_t na = ac.shape[0], nb = bc.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0
    oc = np.empty(na + nb, dtype=np.int64)
    ov = np.empty(na + nb, dtype=np.int64)
    cdef long long[::1] occ = oc
    cdef long long[::1] ovv = ov
    cdef long long v
    while i < na or j < nb:
        if j >= nb or (i < na and ac[i] < bc[j]):
            occ[k] = ac[i]
            ovv[k] = av[i]
            k += 1
            i += 1
        elif i >= na or bc[j] < ac[i]:
            v = p - hh_mulmod(f, bv[j], p)
            if v == p:
                v = 0
            if v:
                occ[k] = bc[j]
                ovv[k] = v
                k += 1
            j += 1
        else:
            v = av[i] - hh_mulmod(f, bv[j], p)
            if v < 0:
                v += p
            if v:
                occ[k] = ac[i]
                ovv[k] = v
                k += 1
            i += 1
            j += 1
    return oc[:k], ov[:k]


cdef tuple _monic(object cols, object vals, long long p):
    cdef long long[::1] v = vals
    cdef long long inv = _invmod(v[0], p)
    cdef Py_ssize_t t
    out = np.empty(v.shape[0], dtype=np.int64)
    cdef long long[::1] o = out
    for t in range(v.shape[0]):
        o[t] = hh_mulmod(v[t], inv, p)
    return cols, out


def reduce_rows_mod(list rows, Py_ssize_t ncols, long long p):
    """Reduced echelon form over ``Z/p`` (``p`` prime below ``2^62``).

    Rows are ``(cols, vals)`` int64 pairs with ``0 <= vals < p``.  Returns
    ``(pivots, rows)`` with monic, fully reduced rows sorted by pivot.
    """
    lead_arr = np.full(max(ncols, 1), -1, dtype=np.int64)
    cdef long long[::1] lead_of = lead_arr
    cdef list stored = []
    cdef long long k, c0
    cdef Py_ssize_t idx, pos
    cdef long long[::1] cv
    cdef long long[::1] vv
    for row in rows:
        cols = np.ascontiguousarray(row[0], dtype=np.int64)
        vals = np.ascontiguousarray(row[1], dtype=np.int64)
        while cols.shape[0] > 0:
            cv = cols
            vv = vals
            c0 = cv[0]
            k = lead_of[c0]
            if k < 0:
                break
            cols, vals = _axpy_mod(cols, vals, vv[0], stored[k][0], stored[k][1], p)
        if cols.shape[0] == 0:
            continue
        cols, vals = _monic(cols, vals, p)
        cv = cols
        lead_of[cv[0]] = len(stored)
        stored.append((cols, vals))

    order = sorted(range(len(stored)), key=lambda i: int(stored[i][0][0]))
    for idx in reversed(range(len(order))):
        k = order[idx]
        cols, vals = stored[k]
        for c in [int(c) for c in cols[1:] if lead_of[c] >= 0]:
            cv = cols
            vv = vals
            pos = _find(cv, c)
            if pos < cv.shape[0] and cv[pos] == c:
                cols, vals = _axpy_mod(cols, vals, vv[pos], stored[lead_of[c]][0], stored[lead_of[c]][1], p)
        stored[k] = (cols, vals)
    pivots = [int(stored[k][0][0]) for k in order]
    return pivots, [stored[k] for k in order]
