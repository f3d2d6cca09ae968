# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled circumsquare kernels.

Same contract as ``pardelaunay._fallback``.  Points are walked in increasing
``u`` order so that the interior scan of a candidate square only touches the
points whose ``u`` lies inside it.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline int _candidates(double ui, double vi, double uj, double vj, double uk, double vk,
                            double tol, double[:, ::1] out) noexcept nogil:
    """Write up to four candidate squares (u0, v0, t) for a u-sorted triple."""
    cdef int m = 0
    cdef double t, lo, hi, vmin, vmax, tv
    t = uk - ui
    lo = vi if vi < vk else vk
    hi = vi if vi > vk else vk
    if lo >= vj - tol and hi <= vj + t + tol:
        out[m, 0] = ui; out[m, 1] = vj; out[m, 2] = t; m += 1
    if lo >= vj - t - tol and hi <= vj + tol:
        out[m, 0] = ui; out[m, 1] = vj - t; out[m, 2] = t; m += 1
    vmin = vi
    if vj < vmin: vmin = vj
    if vk < vmin: vmin = vk
    vmax = vi
    if vj > vmax: vmax = vj
    if vk > vmax: vmax = vk
    tv = vmax - vmin
    if vi > vmin and vi < vmax and uk <= ui + tv + tol:
        out[m, 0] = ui; out[m, 1] = vmin; out[m, 2] = tv; m += 1
    if vk > vmin and vk < vmax and ui >= uk - tv - tol:
        out[m, 0] = uk - tv; out[m, 1] = vmin; out[m, 2] = tv; m += 1
    return m


cdef inline bint _same(double[:, ::1] sq, int a, int b, double tol) noexcept nogil:
    return (fabs(sq[a, 0] - sq[b, 0]) <= tol and fabs(sq[a, 1] - sq[b, 1]) <= tol
            and fabs(sq[a, 2] - sq[b, 2]) <= tol)


cdef inline int _lower(double[::1] us, int n, double x) noexcept nogil:
    """First sorted index with us[idx] > x."""
    cdef int lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if us[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef bint _is_empty(double[::1] us, double[::1] vs, int n, double u0, double v0, double t,
                    double tol, int i, int j, int k) noexcept nogil:
    # the triple itself is on the boundary by construction; skipping it keeps
    # rounding in u0 + t (far sentinel squares) from flagging it as inside
    cdef int p = _lower(us, n, u0 + tol)
    cdef double ulim = u0 + t - tol
    cdef double vlo = v0 + tol, vhi = v0 + t - tol
    while p < n and us[p] < ulim:
        if vs[p] > vlo and vs[p] < vhi and p != i and p != j and p != k:
            return False
        p += 1
    return True


def empty_squares(u, v, double tol=1e-9):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ua = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] va = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = ua.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(ua, kind="stable").astype(np.int64)
    cdef double[::1] us = np.ascontiguousarray(ua[order])
    cdef double[::1] vs = np.ascontiguousarray(va[order])
    cdef double[:, ::1] sq = np.empty((4, 3), dtype=np.float64)
    cdef int i, j, k, m, a, b
    cdef bint dup
    rows = []
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                m = _candidates(us[i], vs[i], us[j], vs[j], us[k], vs[k], tol, sq)
                for a in range(m):
                    dup = False
                    for b in range(a):
                        if _same(sq, a, b, tol):
                            dup = True
                            break
                    if dup:
                        continue
                    if _is_empty(us, vs, n, sq[a, 0], sq[a, 1], sq[a, 2], tol, i, j, k):
                        tri = sorted((order[i], order[j], order[k]))
                        rows.append((tri[0], tri[1], tri[2], sq[a, 0], sq[a, 1], sq[a, 2]))
    rows.sort()
    kept = []
    last = None
    for r in rows:
        if (last is not None and r[:3] == last[:3]
                and fabs(r[3] - last[3]) <= tol and fabs(r[4] - last[4]) <= tol
                and fabs(r[5] - last[5]) <= tol):
            continue
        kept.append(r)
        last = r
    tris = np.array([r[:3] for r in kept], dtype=np.int64).reshape(-1, 3)
    squares = np.array([r[3:] for r in kept], dtype=np.float64).reshape(-1, 3)
    return tris, squares


def boundary_quadruples(u, v, double tol=1e-9, Py_ssize_t limit=1000):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ua = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] va = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = ua.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(ua, kind="stable").astype(np.int64)
    cdef double[::1] us = np.ascontiguousarray(ua[order])
    cdef double[::1] vs = np.ascontiguousarray(va[order])
    cdef double[:, ::1] sq = np.empty((4, 3), dtype=np.float64)
    cdef int i, j, k, m, a, p
    cdef double u0, v0, t, x, y
    cdef bint closed, inner
    found = set()
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                m = _candidates(us[i], vs[i], us[j], vs[j], us[k], vs[k], tol, sq)
                for a in range(m):
                    u0 = sq[a, 0]; v0 = sq[a, 1]; t = sq[a, 2]
                    p = _lower(us, n, u0 - tol)
                    while p > 0 and us[p - 1] >= u0 - tol:
                        p -= 1
                    while p < n and us[p] <= u0 + t + tol:
                        if p != i and p != j and p != k:
                            x = us[p]; y = vs[p]
                            closed = y >= v0 - tol and y <= v0 + t + tol
                            inner = (x > u0 + tol and x < u0 + t - tol
                                     and y > v0 + tol and y < v0 + t - tol)
                            if closed and not inner:
                                tri = sorted((order[i], order[j], order[k]))
                                found.add((tri[0], tri[1], tri[2], order[p]))
                                if len(found) >= limit:
                                    return np.array(sorted(found), dtype=np.int64).reshape(-1, 4)
                        p += 1
    return np.array(sorted(found), dtype=np.int64).reshape(-1, 4)
