# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled float kernels: pivoted determinants with error bounds, Newton tables."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double UNIT_ROUNDOFF = 1.1102230246251565e-16
cdef double INPUT_ERR = 4.0 * 1.1102230246251565e-16


cdef int _det_bound(const double[:, :] a, double* work, int* perm, double* out) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double piv, best, m, tmp, det, gamma, s, r, ai, bound, prod
    cdef int sgn = 1
    for i in range(n):
        perm[i] = <int>i
        for j in range(n):
            work[i * n + j] = a[i, j]
    for k in range(n):
        p = k
        best = fabs(work[k * n + k])
        for i in range(k + 1, n):
            tmp = fabs(work[i * n + k])
            if tmp > best:
                best = tmp
                p = i
        if p != k:
            for j in range(n):
                tmp = work[k * n + j]
                work[k * n + j] = work[p * n + j]
                work[p * n + j] = tmp
            j = perm[k]
            perm[k] = perm[p]
            perm[p] = <int>j
            sgn = -sgn
        piv = work[k * n + k]
        if piv == 0.0:
            for i in range(k + 1, n):
                work[i * n + k] = 0.0
            continue
        for i in range(k + 1, n):
            m = work[i * n + k] / piv
            work[i * n + k] = m
            for j in range(k + 1, n):
                work[i * n + j] -= m * work[k * n + j]
    det = <double>sgn
    for k in range(n):
        det *= work[k * n + k]
    gamma = n * UNIT_ROUNDOFF / (1.0 - n * UNIT_ROUNDOFF)
    # row error e_i = gamma*||(|L||U|)_i|| + INPUT_ERR*||A_i||, stored in out[2 + i]
    # row norm ||A_i|| stored in out[2 + n + i]
    for i in range(n):
        s = 0.0
        for j in range(n):
            r = 0.0
            for k in range(0, (i if i < j else j) + 1):
                if k == i:
                    r += fabs(work[k * n + j])
                else:
                    r += fabs(work[i * n + k]) * fabs(work[k * n + j])
            s += r * r
        ai = 0.0
        for j in range(n):
            ai += a[perm[i], j] * a[perm[i], j]
        ai = sqrt(ai)
        out[2 + i] = gamma * sqrt(s) + INPUT_ERR * ai
        out[2 + n + i] = ai
    bound = 0.0
    for i in range(n):
        prod = out[2 + i]
        for k in range(n):
            if k != i:
                prod *= out[2 + n + k] + out[2 + k]
        bound += prod
    bound += (n + 1) * UNIT_ROUNDOFF * fabs(det)
    out[0] = det
    out[1] = bound
    return 0


def det_with_bound(a):
    """Determinant of a square float matrix and an absolute error bound."""
    cdef double[:, :] m = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("matrix must be square")
    if n == 0:
        return 1.0, 0.0
    cdef double* work = <double*>malloc(n * n * sizeof(double))
    cdef int* perm = <int*>malloc(n * sizeof(int))
    cdef double* out = <double*>malloc((2 + 2 * n) * sizeof(double))
    try:
        with nogil:
            _det_bound(m, work, perm, out)
        return out[0], out[1]
    finally:
        free(work)
        free(perm)
        free(out)


def batch_det_with_bound(a):
    """Vectorised ``det_with_bound`` over a stack of shape ``(N, n, n)``."""
    cdef double[:, :, :] m = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t N = m.shape[0]
    cdef Py_ssize_t n = m.shape[1]
    cdef Py_ssize_t t
    if m.shape[2] != n:
        raise ValueError("matrices must be square")
    dets = np.empty(N, dtype=np.float64)
    bounds = np.empty(N, dtype=np.float64)
    cdef double[:] dv = dets
    cdef double[:] bv = bounds
    if n == 0:
        dets[:] = 1.0
        bounds[:] = 0.0
        return dets, bounds
    cdef double* work = <double*>malloc(n * n * sizeof(double))
    cdef int* perm = <int*>malloc(n * sizeof(int))
    cdef double* out = <double*>malloc((2 + 2 * n) * sizeof(double))
    try:
        with nogil:
            for t in range(N):
                _det_bound(m[t], work, perm, out)
                dv[t] = out[0]
                bv[t] = out[1]
        return dets, bounds
    finally:
        free(work)
        free(perm)
        free(out)


def newton_table(x, y):
    """Newton coefficients ``[x0..xk; y]`` for k = 0..n-1 (rows of a batch)."""
    cdef double[:, :] xs = np.atleast_2d(np.ascontiguousarray(x, dtype=np.float64))
    cdef double[:, :] ys = np.array(np.atleast_2d(y), dtype=np.float64, copy=True)
    cdef Py_ssize_t N = xs.shape[0]
    cdef Py_ssize_t n = xs.shape[1]
    cdef Py_ssize_t t, j, i
    with nogil:
        for t in range(N):
            for j in range(1, n):
                for i in range(n - 1, j - 1, -1):
                    ys[t, i] = (ys[t, i] - ys[t, i - 1]) / (xs[t, i] - xs[t, i - j])
    return np.asarray(ys)
