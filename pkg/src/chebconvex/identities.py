"""Closed-form identities checked exactly or within float bounds.

Each check computes both sides by independent routes and reports them in the
``both_sides`` field of a report.  Divided differences use the Newton
recursion; the determinant ratio is kept only as a cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .certify import check_omega_jensen, check_omega_convex, wright_sums
from .det import DetValue, Mode, det_exact, phi, resolve_mode
from .funcs import ONE, FuncHandle, Quotient, Tabulated
from .report import Certificate, Property, Record, Verdict, Witness, sorted_witnesses
from .sampling import sample_simplex_tuples
from .scalars import is_exact, parse_scalar, point_value, sign, to_float
from .systems import ChebSystem, ExtendedSystem, Interval, make_polynomial_system

UNIT_ROUNDOFF = 2.0 ** -53


def _eval(g, x, exact: bool):
    if isinstance(g, FuncHandle):
        return g.evaluate(x, exact)
    v = g(x)
    return v if exact else to_float(v)


def _all_exact(g, pts) -> bool:
    cap = g.exact_capable if isinstance(g, FuncHandle) else True
    return cap and all(is_exact(p) for p in pts)


@dataclass(frozen=True)
class DividedDiff:
    nodes: tuple
    value: object

    @classmethod
    def of(cls, g, nodes) -> "DividedDiff":
        return cls(tuple(nodes), divided_difference(g, nodes))


def divided_difference(g, nodes: Sequence, exact: Optional[bool] = None):
    """``[x_0, ..., x_k; g]`` by the Newton recursion."""
    pts = tuple(nodes.points if hasattr(nodes, "points") else nodes)
    if not pts:
        raise ValueError("need at least one node")
    vals = [point_value(p) for p in pts]
    if len(set(vals)) != len(vals):
        raise ValueError("divided differences need distinct nodes")
    if exact is None:
        exact = _all_exact(g, pts)
    col = [_eval(g, p, exact) for p in pts]
    if not exact:
        xs = [to_float(v) for v in vals]
        return float(_kernels.newton_table(np.array([xs]), np.array([col]))[0, -1])
    for j in range(1, len(pts)):
        col = [(col[i + 1] - col[i]) / (vals[i + j] - vals[i]) for i in range(len(pts) - j)]
    return col[0]


def divided_difference_ratio(g, nodes: Sequence):
    """Oracle ``Phi_(pi_n, g) / Phi_(pi_{n+1})`` at ``n + 1`` nodes."""
    pts = tuple(nodes.points if hasattr(nodes, "points") else nodes)
    k = len(pts)
    exact = _all_exact(g, pts)
    vals = [point_value(p) for p in pts]
    rows = [[v ** i if exact else to_float(v) ** i for v in vals] for i in range(k - 1)]
    num = rows + [[_eval(g, p, exact) for p in pts]]
    den = rows + [[v ** (k - 1) if exact else to_float(v) ** (k - 1) for v in vals]]
    if exact:
        return det_exact(num) / det_exact(den)
    return float(np.linalg.det(np.array(num, dtype=float)) / np.linalg.det(np.array(den, dtype=float)))


def finite_difference(g, x, steps: Sequence, domain: Optional[Interval] = None):
    """``Delta_{h_1} ... Delta_{h_n} g(x)`` as a signed sum over the ``2^n`` subsets of steps."""
    steps = tuple(steps)
    exact = _all_exact(g, (x,) + steps)
    n = len(steps)
    acc = Fraction(0) if exact else 0.0
    for mask in itertools.product((0, 1), repeat=n):
        p = x
        for bit, h in zip(mask, steps):
            if bit:
                p = p + h
        if domain is not None and not domain.contains(p):
            raise ValueError(f"finite difference leaves the domain at {point_value(p)}")
        term = _eval(g, p, exact)
        acc = acc + term if (n - sum(mask)) % 2 == 0 else acc - term
    return acc


# -- report helpers -----------------------------------------------------------

def _equal(left, right, mode: Mode, bound: float, rel_tol: float):
    """(equal, abs diff, relative diff)."""
    if mode is Mode.EXACT:
        d = left - right
        return d == 0, d, Fraction(0) if d == 0 else None
    lf, rf = to_float(left), to_float(right)
    diff = abs(lf - rf)
    scale = max(abs(lf), abs(rf))
    rel = diff / scale if scale else 0.0
    tol = bound + 8 * UNIT_ROUNDOFF * scale
    return diff <= tol or rel <= rel_tol, lf - rf, rel


def _report(prop: Property, rows, mode: Mode, seed=None, notes=None, both_sides=None) -> Certificate:
    """``rows`` holds ``(config, left, right, bound)``; inequality gives a witness."""
    notes = dict(notes or {})
    witnesses, records = [], []
    max_rel = 0.0
    rel_tol = notes.pop("_rel_tol", 0.0)
    for cfg, left, right, bound in rows:
        ok, diff, rel = _equal(left, right, mode, bound, rel_tol)
        if mode is Mode.FLOAT:
            max_rel = max(max_rel, rel)
        val = DetValue(diff, mode, bound if mode is Mode.FLOAT else 0.0)
        cfg = {**cfg, "left": left, "right": right}
        records.append(Record(cfg, val, not ok))
        if not ok:
            witnesses.append(Witness(cfg, val))
    if mode is Mode.FLOAT:
        notes["max_relative_error"] = max_rel
    verdict = Verdict.VIOLATED if witnesses else Verdict.SATISFIED_SAMPLED
    if both_sides is None and len(rows) == 1:
        both_sides = (rows[0][1], rows[0][2])
    return Certificate(prop, verdict, len(rows), mode, seed, sorted_witnesses(witnesses, 16),
                       violations=len(witnesses), notes=notes, both_sides=both_sides, records=records)


def _tuples(arg) -> list[tuple]:
    """Accept one tuple or a list of tuples."""
    items = list(arg.points if hasattr(arg, "points") else arg)
    if items and isinstance(items[0], (tuple, list)) or (items and hasattr(items[0], "points")):
        return [tuple(t.points if hasattr(t, "points") else t) for t in items]
    return [tuple(items)]


# -- weight factorization -------------------------------------------------------

def factorization_check(system: ChebSystem, f: Optional[FuncHandle], tuples, mode=None,
                        rel_tol: float = 0.0, seed=None) -> Certificate:
    """Both sides of ``Phi_omega = prod w0(x_j) det(M) Phi_pi`` (or the bordered version with
    ``f`` on the left and ``f / w0`` on the right)."""
    if system.factorized is None:
        raise ValueError("factorization_check needs a weight-factorized system")
    tuples = _tuples(tuples)
    n = system.dim
    arity = n if f is None else n + 1
    w0 = system.weight
    pi = make_polynomial_system(n, system.domain).components
    left_funcs = tuple(system.components) + (() if f is None else (f,))
    right_funcs = tuple(pi) + (() if f is None else (f if w0 == ONE else Quotient(f, w0),))
    mode = resolve_mode(mode, left_funcs + right_funcs + (w0,), [p for t in tuples for p in t])
    exact = mode is Mode.EXACT
    m = system.factorized.coeff_matrix
    det_m = det_exact(m) if exact else to_float(system.factorized.det)
    rows = []
    for pts in tuples:
        if len(pts) != arity:
            raise ValueError(f"tuple arity must be {arity}")
        left = phi(left_funcs, pts, mode)
        inner = phi(right_funcs, pts, mode)
        scale = det_m
        for p in pts:
            scale = scale * w0.evaluate(p, exact)
        right = scale * inner.value
        bound = 0.0
        if not exact:
            bound = left.abs_error_bound + abs(scale) * inner.abs_error_bound + \
                (2 * len(pts) + 4) * UNIT_ROUNDOFF * abs(right)
        rows.append(({"points": pts}, left.value, right, bound))
    notes = {"system": str(system), "bordered": f is not None, "_rel_tol": rel_tol}
    return _report(Property.FACTORIZATION, rows, mode, seed, notes)


# -- ChWC identities ------------------------------------------------------------

def _require_power(ext: ExtendedSystem):
    if not ext.from_power:
        raise ValueError("this identity needs the extension by t^n * w0 (extend_with_power)")


def chwc_ratio_check(ext: ExtendedSystem, f: FuncHandle, tuples, mode=None, seed=None) -> Certificate:
    """``Phi_(omega,f) / Phi_ext`` against ``[x_0, ..., x_n; f / w0]``."""
    _require_power(ext)
    tuples = _tuples(tuples)
    base = ext.base
    w0 = base.weight
    g = f if w0 == ONE else Quotient(f, w0)
    num_funcs = tuple(base.components) + (f,)
    mode = resolve_mode(mode, num_funcs + tuple(ext.components), [p for t in tuples for p in t])
    exact = mode is Mode.EXACT
    rows, unresolved = [], 0
    for pts in tuples:
        if len(pts) != base.dim + 1:
            raise ValueError(f"tuple arity must be {base.dim + 1}")
        num = phi(num_funcs, pts, mode)
        den = phi(ext.components, pts, mode)
        if den.sign == 0 and not exact and float(den.value) > 0:
            # too close to call in floating point; compared nowhere, counted below
            unresolved += 1
            continue
        if den.sign <= 0:
            raise RuntimeError(f"extension determinant {den.value} is not positive at {pts}")
        if exact:
            left, bound = num.value / den.value, 0.0
        else:
            a, b = float(num.value), float(den.value)
            left = a / b
            bound = (num.abs_error_bound + abs(left) * den.abs_error_bound) / (b - den.abs_error_bound)
        right = divided_difference(g, pts, exact=exact)
        if not exact:
            bound += 2 ** len(pts) * 8 * UNIT_ROUNDOFF * max(abs(left), abs(to_float(right))) * \
                _spread(pts)
        rows.append(({"points": pts}, left, right, bound))
    notes = {"extension": str(ext)}
    if unresolved:
        notes["unresolved_denominators"] = unresolved
    return _report(Property.CHWC_RATIO, rows, mode, seed, notes)


def _spread(pts) -> float:
    """Conditioning factor of the Newton recursion on ``pts``."""
    vals = [to_float(p) for p in pts]
    width = vals[-1] - vals[0]
    gap = min(b - a for a, b in zip(vals, vals[1:]))
    scale = max(1.0, max(abs(v) for v in vals))
    return (scale / gap) ** (len(vals) - 1) if gap > 0 and width > 0 else math.inf


def chwc_perm_sum_check(ext: ExtendedSystem, f: FuncHandle, configs, mode=None, seed=None) -> Certificate:
    """Permutation sum of ratios against ``Delta_{h_1}...Delta_{h_n}(f / w0)(x) / (h_1 ... h_n)``.

    ``configs`` is one ``(x, steps)`` pair or a list of them.
    """
    _require_power(ext)
    configs = [configs] if _is_single_config(configs) else list(configs)
    base = ext.base
    w0 = base.weight
    g = f if w0 == ONE else Quotient(f, w0)
    sums, indet = wright_sums(ext, f, [(x, tuple(hs)) for x, hs in configs], mode=mode)
    resolved = sums[0].mode
    rows, unresolved = [], 0
    for (x, hs), s, ind in zip(configs, sums, indet):
        if ind:
            unresolved += 1
            continue
        fd = finite_difference(g, x, hs, base.domain)
        prod = Fraction(1) if resolved is Mode.EXACT else 1.0
        for h in hs:
            prod = prod * (point_value(h) if resolved is Mode.EXACT else to_float(h))
        right = fd / prod if resolved is Mode.EXACT else to_float(fd) / prod
        bound = 0.0
        if resolved is Mode.FLOAT:
            bound = s.abs_error_bound + 2 ** len(hs) * 8 * UNIT_ROUNDOFF * \
                max(abs(to_float(_eval(g, x, False))), 1.0) / abs(prod) * 4
        rows.append(({"x": x, "h": tuple(hs)}, s.value, right, bound))
    notes = {"extension": str(ext)}
    if unresolved:
        notes["unresolved_denominators"] = unresolved
    return _report(Property.CHWC_PERM_SUM, rows, resolved, seed, notes)


def _is_single_config(configs) -> bool:
    return isinstance(configs, tuple) and len(configs) == 2 and isinstance(configs[1], (tuple, list)) \
        and not isinstance(configs[0], (tuple, list))


# -- affine recovery ------------------------------------------------------------

@dataclass
class AffineFit:
    coeffs: tuple
    residual: object
    grid: tuple
    report: Certificate

    @property
    def exact_member(self) -> bool:
        return sign(self.residual) == 0 if is_exact(self.residual) else self.residual == 0.0


def validation_grid(domain: Interval, size: int = 100, exact: bool = True) -> tuple:
    """``size`` equally spaced points covering the domain (open ends nudged inside)."""
    lo, hi = (Fraction(domain.lo), Fraction(domain.hi)) if exact else (to_float(domain.lo), to_float(domain.hi))
    step = (hi - lo) / (size + 1 if (domain.lo_open or domain.hi_open) else size - 1)
    start = lo + step if domain.lo_open else lo
    return tuple(start + k * step for k in range(size))


def fit_omega_affine(system: ChebSystem, f: FuncHandle, nodes, grid: Optional[Sequence] = None,
                     grid_size: int = 100, mode=None) -> AffineFit:
    """Coefficients ``alpha_i = (-1)^(n-i) Phi_(omega without omega_i, f)(nodes) / Phi_omega(nodes)``."""
    pts = tuple(nodes.points if hasattr(nodes, "points") else nodes)
    n = system.dim
    if len(pts) != n:
        raise ValueError(f"need {n} nodes")
    for a, b in zip(pts, pts[1:]):
        if not point_value(a) < point_value(b):
            raise ValueError("nodes must be strictly increasing")
    comps = tuple(system.components)
    mode = resolve_mode(mode, comps + (f,), pts)
    exact = mode is Mode.EXACT
    den = phi(comps, pts, mode)
    if den.sign == 0:
        raise ValueError("node matrix is singular; the system is not Chebyshev on these nodes")
    coeffs = []
    for i in range(n):
        rows = comps[:i] + comps[i + 1:] + (f,)
        num = phi(rows, pts, mode)
        c = num.value / den.value if exact else float(num.value) / float(den.value)
        coeffs.append(c if (n - 1 - i) % 2 == 0 else -c)
    if grid is None:
        grid = validation_grid(system.domain, grid_size, exact=exact)
    residual = Fraction(0) if exact else 0.0
    rows = []
    for x in grid:
        fx = f.evaluate(x, exact)
        fit = Fraction(0) if exact else 0.0
        for c, w in zip(coeffs, comps):
            fit = fit + c * w.evaluate(x, exact)
        r = abs(fx - fit)
        if r > residual:
            residual = r
        rows.append(({"x": x}, fx, fit, 0.0 if exact else 8 * UNIT_ROUNDOFF * max(abs(fx), 1.0) * n))
    report = _report(Property.AFFINE_FIT, rows, mode, notes={"nodes": list(pts),
                                                              "coeffs": coeffs, "residual": residual})
    return AffineFit(tuple(coeffs), residual, tuple(grid), report)


# -- quadratic-polynomial test --------------------------------------------------

def qp_equation_check(rho: FuncHandle, triples, derivative: Optional[FuncHandle] = None,
                      domain: Optional[Interval] = None, mode=None, seed=None) -> Certificate:
    """``(rho(z) - rho(y)) / (z - y) == (rho(z+u) - rho(y-u)) / (z - y + 2u)`` on each ``(u, y, z)``.

    With ``derivative`` the central-difference family
    ``rho'(y) == (rho(y+u) - rho(y-u)) / (2u)`` (``u > 0``) is checked as well.
    """
    triples = [tuple(t) for t in triples]
    if not triples:
        raise ValueError("empty triple set")
    pts = [p for t in triples for p in (t[1] - t[0], t[1] + t[0], t[2] - t[0], t[2] + t[0], t[1], t[2])]
    handles = (rho,) + ((derivative,) if derivative is not None else ())
    mode = resolve_mode(mode, handles, pts)
    exact = mode is Mode.EXACT
    rows = []
    for u, y, z in triples:
        if point_value(u) < 0:
            raise ValueError("u must be nonnegative")
        if point_value(z) == point_value(y):
            raise ValueError("degenerate triple: z == y")
        if point_value(z) + point_value(u) < point_value(y):
            raise ValueError("triple violates z + u >= y")
        if domain is not None:
            for p in (y - u, y + u, z - u, z + u):
                if not domain.contains(p):
                    raise ValueError(f"triple leaves the domain at {point_value(p)}")
        r = lambda p: rho.evaluate(p, exact)
        if exact:
            left = (r(z) - r(y)) / (z - y)
            right = (r(z + u) - r(y - u)) / (z - y + 2 * u)
            bound = 0.0
        else:
            uf, yf, zf = to_float(u), to_float(y), to_float(z)
            left = (r(zf) - r(yf)) / (zf - yf)
            right = (r(zf + uf) - r(yf - uf)) / (zf - yf + 2 * uf)
            mag = max(abs(r(p)) for p in (yf, zf, yf - uf, zf + uf))
            bound = 8 * UNIT_ROUNDOFF * mag * (1 / abs(zf - yf) + 1 / abs(zf - yf + 2 * uf))
        rows.append(({"u": u, "y": y, "z": z}, left, right, bound))
        if derivative is not None and point_value(u) > 0:
            if exact:
                dl = derivative.evaluate(y, True)
                dr = (r(y + u) - r(y - u)) / (2 * u)
                db = 0.0
            else:
                uf, yf = to_float(u), to_float(y)
                dl = derivative.evaluate(yf, False)
                dr = (r(yf + uf) - r(yf - uf)) / (2 * uf)
                db = 8 * UNIT_ROUNDOFF * max(abs(r(yf + uf)), abs(r(yf - uf))) / uf
            rows.append(({"u": u, "y": y, "identity": "central"}, dl, dr, db))
    cert = _report(Property.QP_EQUATION, rows, mode, seed, {"derivative_family": derivative is not None})
    return cert


# -- dense-grid extension -------------------------------------------------------

@dataclass(frozen=True)
class GridFunction:
    """Samples on ``offset + k * step`` for ``k = 0 .. len(values) - 1``."""

    step: object
    offset: object
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "step", parse_scalar(self.step))
        object.__setattr__(self, "offset", parse_scalar(self.offset))
        object.__setattr__(self, "values", tuple(parse_scalar(v) if isinstance(v, str) else v
                                                 for v in self.values))
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if not self.values:
            raise ValueError("empty grid")

    @property
    def exact(self) -> bool:
        return is_exact(self.step) and is_exact(self.offset) and all(is_exact(v) for v in self.values)

    @property
    def points(self) -> tuple:
        return tuple(self.offset + k * self.step for k in range(len(self.values)))

    @property
    def domain(self) -> Interval:
        return Interval(self.offset, self.offset + (len(self.values) - 1) * self.step)

    @classmethod
    def from_pairs(cls, xs: Sequence, ys: Sequence) -> "GridFunction":
        """Equally spaced abscissae only; gaps or uneven spacing are rejected."""
        if len(xs) != len(ys):
            raise ValueError("ragged samples")
        if len(xs) < 2:
            raise ValueError("a grid needs at least two samples")
        step = xs[1] - xs[0]
        for k, x in enumerate(xs):
            expected = xs[0] + k * step
            ok = x == expected if is_exact(x) and is_exact(step) else abs(x - expected) <= 1e-12 * max(1, abs(x))
            if not ok:
                raise ValueError(f"grid has a gap or uneven spacing at x = {x}")
        return cls(step, xs[0], tuple(ys))

    @classmethod
    def sample(cls, f: FuncHandle, domain: Interval, step) -> "GridFunction":
        step = parse_scalar(step)
        lo, hi = domain.lo, domain.hi
        count = int((hi - lo) / step) + 1
        exact = f.exact_capable and is_exact(step) and is_exact(lo)
        xs = [lo + k * step for k in range(count)]
        return cls(step, lo, tuple(f.evaluate(x, exact) for x in xs))


class GridInterpolant(FuncHandle):
    """Piecewise Newton interpolation of local degree ``n - 1`` of ``g / w0``, times ``w0``."""

    def __init__(self, grid: GridFunction, n: int, weight: FuncHandle = ONE):
        if len(grid.values) < n:
            raise ValueError(f"grid needs at least {n} samples")
        self.grid = grid
        self.n = n
        self.weight = weight
        pts = grid.points
        exact = grid.exact and weight.exact_capable
        self._reduced = tuple(v / weight.evaluate(p, exact) if weight != ONE else v
                              for p, v in zip(pts, grid.values))
        self._reduced_float = tuple(to_float(v) for v in self._reduced)

    @property
    def exact_capable(self):
        return self.grid.exact and self.weight.exact_capable

    def _window(self, x) -> int:
        g = self.grid
        k = math.floor(to_float((point_value(x) - g.offset) / g.step)) if is_exact(point_value(x)) and \
            is_exact(g.step) else math.floor((to_float(x) - to_float(g.offset)) / to_float(g.step))
        start = k - (self.n - 1) // 2 if self.n > 2 else k
        return max(0, min(start, len(g.values) - self.n))

    def evaluate(self, x, exact: bool):
        g = self.grid
        v = point_value(x)
        if not g.domain.contains(v):
            raise ValueError(f"{v} lies outside the grid range {g.domain}")
        s = self._window(v)
        if exact:
            xs = [g.offset + (s + i) * g.step for i in range(self.n)]
            ys = list(self._reduced[s:s + self.n])
            w = Fraction(1) if self.weight == ONE else self.weight.evaluate(v, True)
        else:
            v = to_float(v)
            xs = [to_float(g.offset) + (s + i) * to_float(g.step) for i in range(self.n)]
            ys = list(self._reduced_float[s:s + self.n])
            w = 1.0 if self.weight == ONE else self.weight.evaluate(v, False)
        coef = list(ys)
        for j in range(1, self.n):
            for i in range(self.n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
        acc = coef[-1]
        for i in range(self.n - 2, -1, -1):
            acc = acc * (v - xs[i]) + coef[i]
        return acc * w

    def __str__(self):
        return f"interp[n={self.n}, step={self.grid.step}]"


def _grid_jensen_configs(grid: GridFunction, n: int) -> list[tuple]:
    pts = grid.points
    out = []
    for m in range(1, (len(pts) - 1) // n + 1):
        h = m * grid.step
        for k in range(len(pts) - n * m):
            out.append((pts[k], h))
    return out


def extend_from_dense_grid(system: ChebSystem, grid: GridFunction, refine: int = 1000, seed: int = 0,
                           eps: float = 1e-10, workers: Optional[int] = None):
    """Interpolate grid samples and certify the extension by sampling off-grid tuples.

    Returns ``(handle, report)``.  The grid must first pass the Jensen check on
    every equidistant tuple it contains.
    """
    if system.factorized is None:
        raise ValueError("extension needs a weight-factorized system")
    n = system.dim
    sub = ChebSystem(system.components, grid.domain, system.factorized, system.name)
    tab_points = grid.points
    tab = Tabulated(tuple(tab_points), tuple(grid.values), name="grid")
    jensen = check_omega_jensen(sub, tab, _grid_jensen_configs(grid, n), minimize=False,
                                mode=Mode.EXACT if grid.exact and system.exact_capable else Mode.FLOAT)
    if not jensen.verdict.passed:
        raise ValueError(f"grid samples fail the Jensen check ({jensen.verdict.value}); "
                         "the extension is undefined")
    handle = GridInterpolant(grid, n, system.weight)
    exact = handle.exact_capable
    agree = all(handle.evaluate(p, exact) == v if exact else
                abs(handle.evaluate(p, False) - to_float(v)) <= 8 * UNIT_ROUNDOFF * max(1.0, abs(to_float(v)))
                for p, v in zip(tab_points, grid.values))
    tuples = sample_simplex_tuples(grid.domain, n + 1, refine, seed, exact=False)
    cert = check_omega_convex(sub, handle, tuples, mode=Mode.FLOAT, seed=seed, minimize=False,
                              workers=workers)
    min_phi = min(float(r.value.value) for r in cert.records)
    passed = agree and min_phi >= -eps
    notes = {"grid_agreement": agree, "min_phi": min_phi, "eps": eps, "jensen_configs": jensen.samples,
             "certified_by": "sampling", "off_grid_tuples": len(tuples)}
    witnesses = [] if min_phi >= -eps else [w for w in cert.witnesses]
    report = Certificate(Property.EXTENSION, Verdict.PASS_SAMPLED if passed else Verdict.REFUTED,
                         len(tuples), Mode.FLOAT, seed, witnesses,
                         violations=sum(1 for r in cert.records if float(r.value.value) < -eps),
                         notes=notes, records=cert.records)
    return handle, report


__all__ = [
    "DividedDiff",
    "divided_difference",
    "divided_difference_ratio",
    "finite_difference",
    "factorization_check",
    "chwc_ratio_check",
    "chwc_perm_sum_check",
    "fit_omega_affine",
    "AffineFit",
    "validation_grid",
    "qp_equation_check",
    "GridFunction",
    "GridInterpolant",
    "extend_from_dense_grid",
]
