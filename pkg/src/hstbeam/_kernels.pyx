# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; mirrors ``_kernels_py`` operation for operation."""

import numpy as np
cimport numpy as cnp

from libc.math cimport NAN

cnp.import_array()

BACKEND = "cython"


cdef void _processing_order(const double[:] dist, Py_ssize_t[:] proc) noexcept nogil:
    # insertion sort by (distance, index); K is small
    cdef Py_ssize_t K = dist.shape[0]
    cdef Py_ssize_t i, j, key
    for i in range(K):
        proc[i] = i
    for i in range(1, K):
        key = proc[i]
        j = i - 1
        while j >= 0 and dist[proc[j]] > dist[key]:
            proc[j + 1] = proc[j]
            j -= 1
        proc[j + 1] = key


cdef void _reselect(cnp.uint8_t[:] row, const Py_ssize_t[:] order_row,
                    Py_ssize_t[:] claimed, Py_ssize_t need) noexcept nogil:
    cdef Py_ssize_t i, n
    for i in range(order_row.shape[0]):
        if need == 0:
            break
        n = order_row[i]
        if not row[n] and claimed[n] < 0:
            row[n] = 1
            need -= 1


cdef Py_ssize_t _resolve(cnp.uint8_t[:, :] rows, const Py_ssize_t[:, :] order,
                         const double[:] dist, Py_ssize_t[:] proc,
                         Py_ssize_t[:] claimed, cnp.uint8_t[:] settled) noexcept nogil:
    cdef Py_ssize_t K = rows.shape[0]
    cdef Py_ssize_t N = rows.shape[1]
    cdef Py_ssize_t p, k, j, n, side, stripped, lost
    cdef Py_ssize_t swept = 0

    _processing_order(dist, proc)

    for n in range(N):
        claimed[n] = -1
    for k in range(K):
        settled[k] = 0
    for p in range(K):
        k = proc[p]
        for n in range(N):
            if rows[k, n]:
                claimed[n] = k
        settled[k] = 1
        for side in range(2):
            j = k + 1 if side == 0 else k - 1
            if j < 0 or j >= K or settled[j]:
                continue
            stripped = 0
            for n in range(N):
                if rows[k, n] and rows[j, n]:
                    rows[j, n] = 0
                    stripped += 1
            if stripped:
                _reselect(rows[j], order[j], claimed, stripped)

    for n in range(N):
        claimed[n] = -1
    for p in range(K):
        k = proc[p]
        lost = 0
        for n in range(N):
            if rows[k, n] and claimed[n] >= 0:
                rows[k, n] = 0
                lost += 1
        for n in range(N):
            if rows[k, n]:
                claimed[n] = k
        if lost:
            swept += lost
            _reselect(rows[k], order[k], claimed, lost)
            for n in range(N):
                if rows[k, n]:
                    claimed[n] = k
    return swept


def resolve_conflicts_batch(cnp.uint8_t[:, :, :] assign, const Py_ssize_t[:, :, :] order,
                            const double[:, :] dist, Py_ssize_t ns):
    cdef Py_ssize_t T = assign.shape[0]
    cdef Py_ssize_t K = assign.shape[1]
    cdef Py_ssize_t N = assign.shape[2]
    cdef Py_ssize_t t
    swept_arr = np.zeros(T, dtype=np.int64)
    cdef cnp.int64_t[:] swept = swept_arr
    cdef Py_ssize_t[:] proc = np.empty(K, dtype=np.intp)
    cdef Py_ssize_t[:] claimed = np.empty(N, dtype=np.intp)
    cdef cnp.uint8_t[:] settled = np.empty(K, dtype=np.uint8)
    with nogil:
        for t in range(T):
            swept[t] = _resolve(assign[t], order[t], dist[t], proc, claimed, settled)
    return swept_arr


cdef Py_ssize_t _waterfill(const double[:] g, double total_power, double[:] f,
                           cnp.uint8_t[:] active, double* level_out) noexcept nogil:
    cdef Py_ssize_t K = g.shape[0]
    cdef Py_ssize_t k, it, m = 0
    cdef double s, mean_inv, level = 0.0
    cdef bint changed
    for k in range(K):
        active[k] = g[k] > 0.0
    for it in range(K):
        m = 0
        s = 0.0
        for k in range(K):
            if active[k]:
                m += 1
                s += 1.0 / g[k]
        if m == 0:
            break
        level = (total_power + s) / m
        changed = False
        for k in range(K):
            if active[k] and level - 1.0 / g[k] <= 0.0:
                active[k] = 0
                changed = True
        if not changed:
            break
    if m == 0:
        for k in range(K):
            f[k] = 0.0
        return 0
    m = 0
    s = 0.0
    for k in range(K):
        if active[k]:
            m += 1
            s += 1.0 / g[k]
    mean_inv = s / m
    for k in range(K):
        if active[k]:
            f[k] = 1.0 / m + (mean_inv - 1.0 / g[k]) / total_power
        else:
            f[k] = 0.0
    level_out[0] = level
    return m


def waterfill_batch(const double[:, :] g, double total_power):
    cdef Py_ssize_t T = g.shape[0]
    cdef Py_ssize_t K = g.shape[1]
    cdef Py_ssize_t t
    cdef double lev
    f_arr = np.zeros((T, K))
    level_arr = np.empty(T)
    count_arr = np.empty(T, dtype=np.int64)
    cdef double[:, :] f = f_arr
    cdef double[:] level = level_arr
    cdef cnp.int64_t[:] count = count_arr
    cdef cnp.uint8_t[:] active = np.empty(K, dtype=np.uint8)
    with nogil:
        for t in range(T):
            lev = 0.0
            count[t] = _waterfill(g[t], total_power, f[t], active, &lev)
            level[t] = lev if count[t] > 0 else NAN
    return f_arr, level_arr, count_arr
