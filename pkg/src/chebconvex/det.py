"""Collocation determinants with an exact and a floating-point engine.

Matrices are oriented rows = functions, columns = points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from ._parallel import parallel_map
from .scalars import ExpSum, is_exact, point_value, sign, to_float


class Mode(str, enum.Enum):
    EXACT = "EXACT"
    FLOAT = "FLOAT"

    @classmethod
    def coerce(cls, mode) -> Optional["Mode"]:
        if mode is None or isinstance(mode, Mode):
            return mode
        return cls(str(mode).upper())


@dataclass(frozen=True)
class DetValue:
    """A determinant (or derived quantity) with its provenance.

    EXACT values carry a zero error bound; FLOAT values are sign-definite only
    when ``abs(value) > abs_error_bound``.
    """

    value: object
    mode: Mode
    abs_error_bound: float = 0.0

    @property
    def sign(self) -> int:
        """+1/-1 when sign-definite, 0 for exact zero or an indeterminate float."""
        if self.mode is Mode.EXACT:
            return sign(self.value)
        v = float(self.value)
        if v > self.abs_error_bound:
            return 1
        if v < -self.abs_error_bound:
            return -1
        return 0

    @property
    def is_nonnegative(self) -> bool:
        if self.mode is Mode.EXACT:
            return sign(self.value) >= 0
        return float(self.value) >= -self.abs_error_bound

    @property
    def is_zero(self) -> bool:
        if self.mode is Mode.EXACT:
            return self.value == 0
        return abs(float(self.value)) <= self.abs_error_bound

    @property
    def is_negative(self) -> bool:
        return self.sign < 0

    def __float__(self):
        return to_float(self.value)


@dataclass(frozen=True)
class SimplexTuple:
    """A strictly increasing tuple of points."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for a, b in zip(pts, pts[1:]):
            if not point_value(a) < point_value(b):
                raise ValueError(f"tuple is not strictly increasing: {_fmt(a)} >= {_fmt(b)}")

    @property
    def arity(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _fmt(x):
    return str(point_value(x))


def as_tuple(t) -> SimplexTuple:
    return t if isinstance(t, SimplexTuple) else SimplexTuple(tuple(t))


# -- exact engine -----------------------------------------------------------

def _bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    a = [row[:] for row in m]
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sgn = -sgn
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sgn * a[n - 1][n - 1]


def _bareiss_field(m: list[list]) -> object:
    """Fraction-free elimination over a field (divisions are exact)."""
    n = len(m)
    a = [row[:] for row in m]
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sgn = -sgn
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) / prev
        prev = akk
    out = a[n - 1][n - 1]
    return out if sgn > 0 else -out


def _laplace(m: list[list]) -> object:
    """Division-free cofactor expansion, memoised on column subsets (any commutative ring)."""
    n = len(m)
    memo: dict[tuple[int, int], object] = {}

    def minor(row: int, cols: int):
        # determinant of rows row..n-1 restricted to the column bitmask
        if row == n:
            return Fraction(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = Fraction(0)
        parity = 0
        for j in range(n):
            if cols >> j & 1:
                e = m[row][j]
                if e != 0:
                    sub = minor(row + 1, cols & ~(1 << j))
                    acc = acc - e * sub if parity else acc + e * sub
                parity ^= 1
        memo[key] = acc
        return acc

    return minor(0, (1 << n) - 1)


def det_exact(matrix: Sequence[Sequence]) -> object:
    """Exact determinant; the sign of the result is authoritative."""
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 0:
        return Fraction(1)
    flat = [e for r in rows for e in r]
    for e in flat:
        if not is_exact(e):
            raise TypeError(f"det_exact needs exact entries, got {e!r}")
    if all(isinstance(e, (int, Fraction)) for e in flat):
        scale = 1
        row_scales = []
        for r in rows:
            s = 1
            for e in r:
                d = Fraction(e).denominator
                s = s * d // math.gcd(s, d)
            row_scales.append(s)
            scale *= s
        ints = [[int(Fraction(e) * s) for e in r] for r, s in zip(rows, row_scales)]
        return Fraction(_bareiss_int(ints), scale)
    if any(isinstance(e, ExpSum) for e in flat):
        return _laplace(rows)
    return _bareiss_field(rows)


# -- float engine -----------------------------------------------------------

def det_float(matrix) -> DetValue:
    """Partially pivoted determinant with a growth-factor based error bound."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    value, bound = _kernels.det_with_bound(m)
    return DetValue(float(value), Mode.FLOAT, float(bound))


def det_float_batch(stack: np.ndarray) -> list[DetValue]:
    stack = np.asarray(stack, dtype=np.float64)
    if stack.size and not np.all(np.isfinite(stack)):
        raise ValueError("matrix stack has non-finite entries")
    dets, bounds = _kernels.batch_det_with_bound(stack)
    return [DetValue(float(d), Mode.FLOAT, float(b)) for d, b in zip(dets, bounds)]


# -- functionals ------------------------------------------------------------

def resolve_mode(mode, funcs: Sequence, points: Sequence) -> Mode:
    """Pick EXACT when every point and function allows it, unless overridden."""
    mode = Mode.coerce(mode)
    exact_ok = all(is_exact(p) for p in points) and all(f.exact_capable for f in funcs)
    if mode is None:
        return Mode.EXACT if exact_ok else Mode.FLOAT
    if mode is Mode.EXACT and not exact_ok:
        raise ValueError("exact mode requested but some point or function is inexact")
    return mode


def collocation_matrix(funcs: Sequence, points: Sequence, exact: bool) -> list[list]:
    return [[f.evaluate(x, exact) for x in points] for f in funcs]


def phi(funcs: Sequence, points, mode=None) -> DetValue:
    """Determinant of ``[f_i(x_j)]`` for arbitrary rows ``funcs``."""
    pts = as_tuple(points).points
    if len(pts) != len(funcs):
        raise ValueError(f"arity mismatch: {len(pts)} points for {len(funcs)} functions")
    mode = resolve_mode(mode, funcs, pts)
    mat = collocation_matrix(funcs, pts, mode is Mode.EXACT)
    if mode is Mode.EXACT:
        return DetValue(det_exact(mat), Mode.EXACT)
    return det_float(mat)


def _phi_chunk(funcs, chunk, exact):
    if exact:
        return [det_exact(collocation_matrix(funcs, pts, True)) for pts in chunk]
    stack = np.array([collocation_matrix(funcs, pts, False) for pts in chunk], dtype=np.float64)
    stack = stack.reshape(len(chunk), len(funcs), len(funcs))
    dets, bounds = _kernels.batch_det_with_bound(stack)
    return list(zip(dets.tolist(), bounds.tolist()))


def phi_many(funcs: Sequence, tuples: Sequence, mode=None, workers: Optional[int] = None) -> list[DetValue]:
    """``phi`` over many tuples; float mode is batched through the kernels.

    Results are in input order and do not depend on ``workers``.
    """
    tuples = [as_tuple(t).points for t in tuples]
    if not tuples:
        return []
    for pts in tuples:
        if len(pts) != len(funcs):
            raise ValueError(f"arity mismatch: {len(pts)} points for {len(funcs)} functions")
    all_pts = [p for pts in tuples for p in pts]
    mode = resolve_mode(mode, funcs, all_pts)
    exact = mode is Mode.EXACT
    raw = parallel_map(_phi_chunk, tuples, workers=workers, args=(funcs,), kwargs={"exact": exact})
    if exact:
        return [DetValue(v, Mode.EXACT) for v in raw]
    for d, _ in raw:
        if not math.isfinite(d):
            raise ValueError("non-finite determinant in float mode")
    return [DetValue(d, Mode.FLOAT, b) for d, b in raw]


def phi_system(system, points, mode=None) -> DetValue:
    """Collocation determinant of the system at an increasing tuple of its dimension."""
    pts = as_tuple(points)
    if pts.arity != system.dim:
        raise ValueError(f"arity {pts.arity} does not match system dimension {system.dim}")
    return phi(system.components, pts, mode)


def phi_bordered(system, f, points, mode=None) -> DetValue:
    """Determinant of the system rows bordered below by a row of ``f`` values."""
    pts = as_tuple(points)
    if pts.arity != system.dim + 1:
        raise ValueError(f"arity {pts.arity} must equal dimension + 1 = {system.dim + 1}")
    return phi(tuple(system.components) + (f,), pts, mode)


def vandermonde_product(points) -> object:
    """``prod_{i<j} (x_j - x_i)``."""
    pts = [point_value(p) for p in points]
    acc = Fraction(1) if all(is_exact(p) for p in pts) else 1.0
    for j in range(len(pts)):
        for i in range(j):
            acc = acc * (pts[j] - pts[i])
    return acc


__all__ = [
    "Mode",
    "DetValue",
    "SimplexTuple",
    "det_exact",
    "det_float",
    "det_float_batch",
    "phi",
    "phi_many",
    "phi_system",
    "phi_bordered",
    "vandermonde_product",
    "resolve_mode",
]
