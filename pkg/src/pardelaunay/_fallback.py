"""Numpy implementation of the circumsquare kernels.

Same contract as the compiled ``_kernels`` module; used when the extension
is not built or when ``PARDELAUNAY_PURE_PYTHON=1`` is set.

Points are processed in increasing ``u`` order.  For a triple ``i < j < k``
in that order, every axis-aligned square with all three points on its
boundary is one of four kinds:

* left side through ``i``, right side through ``k``, ``j`` on the bottom,
* the same with ``j`` on the top,
* bottom and top through the extreme-``v`` points, ``i`` on the left side
  (only when ``i`` has the middle ``v``),
* the same with ``k`` on the right side (only when ``k`` has the middle ``v``).
"""

from __future__ import annotations

import numpy as np


def _candidates(us, vs, i, tol):
    """Candidate squares for all triples (i, j, k) with i fixed.

    Returns ``(j, k, u0, v0, t)`` arrays of the geometrically valid squares.
    """
    n = len(us)
    jj, kk = np.triu_indices(n - i - 1, k=1)
    jj = jj + i + 1
    kk = kk + i + 1
    ui, vi = us[i], vs[i]
    uj, vj = us[jj], vs[jj]
    uk, vk = us[kk], vs[kk]

    out_j, out_k, out_u0, out_v0, out_t = [], [], [], [], []

    def take(mask, u0, v0, t):
        out_j.append(jj[mask])
        out_k.append(kk[mask])
        out_u0.append(np.broadcast_to(u0, mask.shape)[mask])
        out_v0.append(np.broadcast_to(v0, mask.shape)[mask])
        out_t.append(np.broadcast_to(t, mask.shape)[mask])

    t = uk - ui
    lo_ik = np.minimum(vi, vk)
    hi_ik = np.maximum(vi, vk)
    # j on the bottom side
    take((lo_ik >= vj - tol) & (hi_ik <= vj + t + tol), ui, vj, t)
    # j on the top side
    take((lo_ik >= vj - t - tol) & (hi_ik <= vj + tol), ui, vj - t, t)

    vmin = np.minimum(np.minimum(vi, vj), vk)
    vmax = np.maximum(np.maximum(vi, vj), vk)
    tv = vmax - vmin
    i_mid = (vi > vmin) & (vi < vmax)
    k_mid = (vk > vmin) & (vk < vmax)
    take(i_mid & (uk <= ui + tv + tol), ui, vmin, tv)
    take(k_mid & (ui >= uk - tv - tol), uk - tv, vmin, tv)

    return (np.concatenate(out_j), np.concatenate(out_k), np.concatenate(out_u0),
            np.concatenate(out_v0), np.concatenate(out_t))


def _dedupe(rows, tol):
    """Drop squares repeated for the same triple (rows sorted lexicographically)."""
    keep = []
    last = None
    for r in rows:
        if last is not None and r[:3] == last[:3] and all(abs(a - b) <= tol for a, b in zip(r[3:], last[3:])):
            continue
        keep.append(r)
        last = r
    return keep


def empty_squares(u, v, tol=1e-9):
    """Triples that have a circumsquare with empty interior.

    Returns ``(tris, squares)``: ``tris`` is an ``(m, 3)`` int array of point
    indices (ascending per row), ``squares`` the matching ``(u0, v0, side)``.
    A triple with several distinct empty squares appears once per square.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = len(u)
    order = np.argsort(u, kind="stable")
    us, vs = u[order], v[order]
    rows = []
    for i in range(n - 2):
        j, k, u0, v0, t = _candidates(us, vs, i, tol)
        if len(j) == 0:
            continue
        for start in range(0, len(j), 4096):
            sl = slice(start, start + 4096)
            a0, b0, tt = u0[sl, None], v0[sl, None], t[sl, None]
            inside = ((us[None, :] > a0 + tol) & (us[None, :] < a0 + tt - tol)
                      & (vs[None, :] > b0 + tol) & (vs[None, :] < b0 + tt - tol))
            # the triple lies on its own boundary; rounding in a0 + tt must not
            # count it as inside
            rows_idx = np.arange(inside.shape[0])
            inside[:, i] = False
            inside[rows_idx, j[sl]] = False
            inside[rows_idx, k[sl]] = False
            empty = ~inside.any(axis=1)
            for jj, kk, a, b, s in zip(j[sl][empty], k[sl][empty], u0[sl][empty], v0[sl][empty], t[sl][empty]):
                tri = sorted((int(order[i]), int(order[jj]), int(order[kk])))
                rows.append((tri[0], tri[1], tri[2], float(a), float(b), float(s)))
    rows.sort()
    rows = _dedupe(rows, tol)
    tris = np.array([r[:3] for r in rows], dtype=np.int64).reshape(-1, 3)
    squares = np.array([r[3:] for r in rows], dtype=float).reshape(-1, 3)
    return tris, squares


def boundary_quadruples(u, v, tol=1e-9, limit=1000):
    """Report (i, j, k, m): point m lies on the boundary of a circumsquare of i, j, k.

    Stops after ``limit`` findings.  Rows are ascending in the triple.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = len(u)
    order = np.argsort(u, kind="stable")
    us, vs = u[order], v[order]
    found = set()
    for i in range(n - 2):
        j, k, u0, v0, t = _candidates(us, vs, i, tol)
        for start in range(0, len(j), 4096):
            sl = slice(start, start + 4096)
            a0, b0, tt = u0[sl, None], v0[sl, None], t[sl, None]
            closed = ((us[None, :] >= a0 - tol) & (us[None, :] <= a0 + tt + tol)
                      & (vs[None, :] >= b0 - tol) & (vs[None, :] <= b0 + tt + tol))
            inner = ((us[None, :] > a0 + tol) & (us[None, :] < a0 + tt - tol)
                     & (vs[None, :] > b0 + tol) & (vs[None, :] < b0 + tt - tol))
            on = closed & ~inner
            on[:, i] = False
            rows_idx = np.arange(on.shape[0])
            on[rows_idx, j[sl]] = False
            on[rows_idx, k[sl]] = False
            for r, m in zip(*np.nonzero(on)):
                tri = sorted((int(order[i]), int(order[j[sl][r]]), int(order[k[sl][r]])))
                found.add((tri[0], tri[1], tri[2], int(order[m])))
                if len(found) >= limit:
                    return np.array(sorted(found), dtype=np.int64).reshape(-1, 4)
    return np.array(sorted(found), dtype=np.int64).reshape(-1, 4)
