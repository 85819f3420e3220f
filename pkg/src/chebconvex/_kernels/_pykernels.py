"""Pure-Python/numpy fallback with the same contract as the compiled kernels."""

from __future__ import annotations

import numpy as np

UNIT_ROUNDOFF = 2.0 ** -53
INPUT_ERR = 4.0 * UNIT_ROUNDOFF


def _lu(m: np.ndarray):
    """Batched partially pivoted LU; returns (LU-packed, permutation, sign)."""
    w = m.copy()
    N, n, _ = w.shape
    perm = np.tile(np.arange(n), (N, 1))
    sgn = np.ones(N)
    rows = np.arange(N)
    for k in range(n):
        p = k + np.argmax(np.abs(w[:, k:, k]), axis=1)
        swap = p != k
        if swap.any():
            r = rows[swap]
            pk = p[swap]
            w[r, k], w[r, pk] = w[r, pk].copy(), w[r, k].copy()
            perm[r, k], perm[r, pk] = perm[r, pk].copy(), perm[r, k].copy()
            sgn[swap] = -sgn[swap]
        piv = w[:, k, k]
        safe = np.where(piv == 0.0, 1.0, piv)
        mult = np.where(piv[:, None] == 0.0, 0.0, w[:, k + 1:, k] / safe[:, None])
        w[:, k + 1:, k] = mult
        w[:, k + 1:, k + 1:] -= mult[:, :, None] * w[:, k, None, k + 1:]
    return w, perm, sgn


def batch_det_with_bound(a):
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 3 or m.shape[1] != m.shape[2]:
        raise ValueError("matrices must be square")
    N, n, _ = m.shape
    if n == 0:
        return np.ones(N), np.zeros(N)
    w, perm, sgn = _lu(m)
    diag = np.diagonal(w, axis1=1, axis2=2)
    dets = sgn * np.prod(diag, axis=1)
    L = np.tril(np.abs(w), -1) + np.eye(n)
    U = np.triu(np.abs(w))
    LU = L @ U
    gamma = n * UNIT_ROUNDOFF / (1.0 - n * UNIT_ROUNDOFF)
    pa = np.take_along_axis(m, perm[:, :, None], axis=1)
    a_norm = np.linalg.norm(pa, axis=2)
    e = gamma * np.linalg.norm(LU, axis=2) + INPUT_ERR * a_norm
    bounds = np.zeros(N)
    for i in range(n):
        prod = e[:, i].copy()
        for k in range(n):
            if k != i:
                prod *= a_norm[:, k] + e[:, k]
        bounds += prod
    bounds += (n + 1) * UNIT_ROUNDOFF * np.abs(dets)
    return dets, bounds


def det_with_bound(a):
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    d, b = batch_det_with_bound(m[None])
    return float(d[0]), float(b[0])


def newton_table(x, y):
    xs = np.atleast_2d(np.asarray(x, dtype=np.float64))
    ys = np.array(np.atleast_2d(y), dtype=np.float64, copy=True)
    n = xs.shape[1]
    for j in range(1, n):
        ys[:, j:] = (ys[:, j:] - ys[:, j - 1:-1]) / (xs[:, j:] - xs[:, :n - j])
    return ys
