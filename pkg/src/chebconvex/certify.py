"""Sampled certification of convexity with respect to a Chebyshev system.

All checks reduce to signs of bordered collocation determinants evaluated on
an explicit configuration set.  Nonnegativity checks treat float values within
their error bound as nonnegative; affine checks treat them as zero.  A failed
check returns witnesses shrunk by repeatedly halving the steps while the
violation persists.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .det import DetValue, Mode, phi_many, resolve_mode
from .report import Certificate, Property, Record, Verdict, Witness, sorted_witnesses
from .scalars import is_exact, parse_scalar, point_value, to_float
from .systems import ChebSystem, ExtendedSystem

MAX_WITNESSES = 16
MAX_SHRINK_STEPS = 40
MAX_WRIGHT_DIM = 8
# witnesses are not shrunk below this fraction of the domain width
SHRINK_FLOOR = 1 / 1024


def _check_domain(system, pts) -> None:
    for p in pts:
        if not system.domain.contains(p):
            raise ValueError(f"point {point_value(p)} lies outside the domain {system.domain}")


def _chain(x, increments) -> tuple:
    pts = [x]
    for d in increments:
        pts.append(pts[-1] + d)
    return tuple(pts)


def _half(h):
    return h * Fraction(1, 2) if is_exact(h) else h / 2


def _below_floor(h, system) -> bool:
    return to_float(h) < SHRINK_FLOOR * to_float(system.domain.width)


def _violates(value: DetValue, affine: bool) -> bool:
    return value.sign != 0 if affine else value.sign < 0


def _finish(prop: Property, configs, values, affine, evaluate, shrink, mode: Mode, seed,
            notes: dict, minimize: bool, indeterminate: Sequence[bool] = ()) -> Certificate:
    bad_idx = [i for i, v in enumerate(values) if _violates(v, affine)]
    indet = [bool(x) for x in indeterminate] if indeterminate else [False] * len(values)
    near_zero = sum(1 for v in values if v.mode is Mode.FLOAT and v.sign == 0)
    records = [Record(c, v, i in set(bad_idx)) for i, (c, v) in enumerate(zip(configs, values))]
    chosen = sorted_witnesses([Witness(configs[i], values[i]) for i in bad_idx], MAX_WITNESSES)
    witnesses = []
    for w in chosen:
        cfg, val = w.config, w.value
        if minimize:
            for _ in range(MAX_SHRINK_STEPS):
                smaller = shrink(cfg)
                if smaller is None:
                    break
                v2 = evaluate(smaller)
                if v2 is None or not _violates(v2, affine):
                    break
                cfg, val = smaller, v2
        note = "" if cfg is w.config else "shrunk"
        witnesses.append(Witness(cfg, val, note))
    n_indet = sum(1 for i, flag in enumerate(indet) if flag and i not in set(bad_idx))
    if bad_idx:
        verdict = Verdict.REFUTED
    elif n_indet:
        verdict = Verdict.INDETERMINATE
    else:
        verdict = Verdict.PASS_SAMPLED
    if near_zero:
        notes = {**notes, "near_zero_float_values": near_zero}
    return Certificate(prop, verdict, len(configs), mode, seed, sorted_witnesses(witnesses),
                       violations=len(bad_idx), indeterminate=n_indet, notes=notes, records=records)


def _single(funcs, pts, mode) -> DetValue:
    return phi_many(funcs, [pts], mode=mode, workers=1)[0]


def _h_domain(hs) -> str:
    if all(isinstance(h, (int, Fraction)) for h in hs):
        return "rational"
    if all(hasattr(h, "coords") for h in hs):
        return "module"
    return "real"


def check_t_omega_convex(system: ChebSystem, f, steps: Sequence, configs: Iterable, *, affine: bool = False,
                         mode=None, seed: Optional[int] = None, minimize: bool = True,
                         workers: Optional[int] = None) -> Certificate:
    """Test ``Phi_(omega,f)(x, x+t1 h, ..., x+(t1+...+tn) h) >= 0`` (or ``== 0``) on each ``(x, h)``."""
    steps = tuple(parse_scalar(t) if isinstance(t, str) else t for t in steps)
    if len(steps) != system.dim:
        raise ValueError(f"need {system.dim} steps, got {len(steps)}")
    if any(point_value(t) <= 0 for t in steps):
        raise ValueError("steps must be positive")
    configs = [(x, h) for x, h in configs]
    if not configs:
        raise ValueError("empty configuration set")
    funcs = tuple(system.components) + (f,)
    cfgs, tuples = [], []
    for x, h in configs:
        if point_value(h) <= 0:
            raise ValueError("scale h must be positive")
        pts = _chain(x, [t * h for t in steps])
        _check_domain(system, pts)
        cfgs.append({"x": x, "h": h, "points": pts})
        tuples.append(pts)
    resolved = resolve_mode(mode, funcs, [p for t in tuples for p in t])
    values = phi_many(funcs, tuples, mode=resolved, workers=workers)

    def evaluate(cfg):
        return _single(funcs, cfg["points"], resolved)

    def shrink(cfg):
        h = _half(cfg["h"])
        if _below_floor(h, system):
            return None
        return {"x": cfg["x"], "h": h, "points": _chain(cfg["x"], [t * h for t in steps])}

    unit = all(t == 1 for t in steps)
    if unit:
        prop = Property.JENSEN_AFFINE if affine else Property.OMEGA_JENSEN
    else:
        prop = Property.T_OMEGA_AFFINE if affine else Property.T_OMEGA_CONVEX
    notes = {"steps": list(steps), "h_domain": _h_domain([c["h"] for c in cfgs]), "system": str(system)}
    return _finish(prop, cfgs, values, affine, evaluate, shrink, resolved, seed, notes, minimize)


def check_omega_jensen(system: ChebSystem, f, configs: Iterable, *, affine: bool = False, mode=None,
                       seed: Optional[int] = None, minimize: bool = True,
                       workers: Optional[int] = None) -> Certificate:
    """Equidistant case ``Phi_(omega,f)(x, x+h, ..., x+nh) >= 0`` (``== 0`` when ``affine``)."""
    return check_t_omega_convex(system, f, (Fraction(1),) * system.dim, configs, affine=affine, mode=mode,
                                seed=seed, minimize=minimize, workers=workers)


def check_omega_convex(system: ChebSystem, f, tuples: Iterable, *, affine: bool = False, mode=None,
                       seed: Optional[int] = None, minimize: bool = True,
                       workers: Optional[int] = None) -> Certificate:
    """``Phi_(omega,f) >= 0`` (``== 0`` when ``affine``) on increasing (n+1)-tuples."""
    tuples = [tuple(t.points if hasattr(t, "points") else t) for t in tuples]
    if not tuples:
        raise ValueError("empty tuple set")
    funcs = tuple(system.components) + (f,)
    for pts in tuples:
        if len(pts) != system.dim + 1:
            raise ValueError(f"tuples must have {system.dim + 1} points")
        _check_domain(system, pts)
        for a, b in zip(pts, pts[1:]):
            if not point_value(a) < point_value(b):
                raise ValueError("tuple is not strictly increasing")
    resolved = resolve_mode(mode, funcs, [p for t in tuples for p in t])
    values = phi_many(funcs, tuples, mode=resolved, workers=workers)
    cfgs = [{"points": pts} for pts in tuples]

    def evaluate(cfg):
        return _single(funcs, cfg["points"], resolved)

    def shrink(cfg):
        pts = cfg["points"]
        x0 = pts[0]
        if _below_floor(_half(pts[1] - x0), system):
            return None
        return {"points": tuple([x0] + [x0 + _half(p - x0) for p in pts[1:]])}

    prop = Property.OMEGA_AFFINE if affine else Property.OMEGA_CONVEX
    return _finish(prop, cfgs, values, affine, evaluate, shrink, resolved, seed, {"system": str(system)},
                   minimize)


# -- Wright sums ------------------------------------------------------------

def wright_chains(x, hs: Sequence) -> list[tuple]:
    """Chains ``x, x+h_i1, ..., x+h_i1+...+h_in`` over all step permutations."""
    return [_chain(x, [hs[i] for i in perm]) for perm in itertools.permutations(range(len(hs)))]


def _ratio(num: DetValue, den: DetValue):
    """Return (ratio, bound, indeterminate)."""
    if num.mode is Mode.EXACT:
        if den.sign <= 0:
            raise RuntimeError(f"extension determinant {den.value} is not positive; "
                               "the extended system is not a positive Chebyshev system")
        return num.value / den.value, 0.0, False
    a, ea = float(num.value), num.abs_error_bound
    b, eb = float(den.value), den.abs_error_bound
    if b <= eb:
        return (a / b if b != 0 else math.nan), math.inf, True
    r = a / b
    return r, (ea + abs(r) * eb) / (b - eb) + 2 * abs(r) * 2.0 ** -53, False


def wright_sums(ext: ExtendedSystem, f, configs: Sequence, mode=None,
                workers: Optional[int] = None) -> tuple[list[DetValue], list[bool]]:
    """Permutation sums of ``Phi_(omega,f) / Phi_ext`` for each ``(x, hs)``."""
    n = ext.base.dim
    if n > MAX_WRIGHT_DIM:
        raise ValueError(f"Wright sums are limited to n <= {MAX_WRIGHT_DIM} (n! terms)")
    num_funcs = tuple(ext.base.components) + (f,)
    den_funcs = tuple(ext.components)
    chains_per_cfg = []
    unique: dict = {}
    for x, hs in configs:
        if len(hs) != n:
            raise ValueError(f"need {n} steps, got {len(hs)}")
        if any(point_value(h) <= 0 for h in hs):
            raise ValueError("Wright steps must be positive")
        chains = wright_chains(x, hs)
        _check_domain(ext.base, (x, chains[0][-1]))
        chains_per_cfg.append(chains)
        for c in chains:
            unique.setdefault(c, len(unique))
    ordered = list(unique)
    resolved = resolve_mode(mode, num_funcs + den_funcs, [p for c in ordered for p in c])
    nums = phi_many(num_funcs, ordered, mode=resolved, workers=workers)
    dens = phi_many(den_funcs, ordered, mode=resolved, workers=workers)
    ratios = [_ratio(a, b) for a, b in zip(nums, dens)]
    out, indet = [], []
    for chains in chains_per_cfg:
        if resolved is Mode.EXACT:
            total = Fraction(0)
            for c in chains:
                total = total + ratios[unique[c]][0]
            out.append(DetValue(total, Mode.EXACT))
            indet.append(False)
        else:
            total, bound, ind = 0.0, 0.0, False
            for c in chains:
                r, e, flag = ratios[unique[c]]
                total += r
                bound += e
                ind = ind or flag
            bound += len(chains) * abs(total) * 2.0 ** -53
            out.append(DetValue(total, Mode.FLOAT, bound))
            indet.append(ind)
    return out, indet


def check_wright(ext: ExtendedSystem, f, configs: Iterable, *, mode=None, seed: Optional[int] = None,
                 minimize: bool = True, workers: Optional[int] = None) -> Certificate:
    """Nonnegativity of the permutation sum of determinant ratios on each ``(x, (h_1..h_n))``."""
    configs = [(x, tuple(hs)) for x, hs in configs]
    if not configs:
        raise ValueError("empty configuration set")
    n = ext.base.dim
    if n > MAX_WRIGHT_DIM:
        raise ValueError(f"Wright sums are limited to n <= {MAX_WRIGHT_DIM} (n! terms)")
    values, indet = wright_sums(ext, f, configs, mode=mode, workers=workers)
    resolved = values[0].mode
    cfgs = [{"x": x, "h": hs, "points": _chain(x, hs)} for x, hs in configs]

    def evaluate(cfg):
        vals, ind = wright_sums(ext, f, [(cfg["x"], cfg["h"])], mode=resolved, workers=1)
        return None if ind[0] else vals[0]

    def shrink(cfg):
        hs = tuple(_half(h) for h in cfg["h"])
        if any(_below_floor(h, ext.base) for h in hs):
            return None
        return {"x": cfg["x"], "h": hs, "points": _chain(cfg["x"], hs)}

    notes = {"extension": str(ext), "permutations": math.factorial(n),
             "h_domain": _h_domain([h for _, hs in configs for h in hs])}
    return _finish(Property.WRIGHT, cfgs, values, False, evaluate, shrink, resolved, seed, notes, minimize,
                   indeterminate=indet)


# -- derived configuration sets ---------------------------------------------

def wright_configs_from_tuples(tuples: Iterable) -> list[tuple]:
    """``(x_0, ..., x_n)`` -> ``(x_0, (x_1 - x_0, ..., x_n - x_{n-1}))``."""
    out = []
    for t in tuples:
        pts = tuple(t)
        out.append((pts[0], tuple(b - a for a, b in zip(pts, pts[1:]))))
    return out


def jensen_configs_from_wright(configs: Iterable) -> list[tuple]:
    """Equal-step restriction: ``(x, hs)`` -> ``(x, mean(hs))`` (same right endpoint)."""
    out = []
    for x, hs in configs:
        n = len(hs)
        total = hs[0]
        for h in hs[1:]:
            total = total + h
        out.append((x, total * Fraction(1, n) if is_exact(total) else total / n))
    return out


def step_configs_to_jensen(configs: Iterable, steps: Sequence) -> list[tuple]:
    """Rational step tuples ``t`` induce the Jensen grid: ``(x, h)`` -> ``(x, g*h)`` with ``g`` the
    largest rational dividing every ``t_i``; the (t, omega) chain is a sub-chain of that grid."""
    ts = [Fraction(t) for t in steps]
    num_gcd = 0
    den_lcm = 1
    for t in ts:
        num_gcd = math.gcd(num_gcd, t.numerator)
        den_lcm = den_lcm * t.denominator // math.gcd(den_lcm, t.denominator)
    g = Fraction(num_gcd, den_lcm)
    return [(x, g * h) for x, h in configs]


__all__ = [
    "check_t_omega_convex",
    "check_omega_jensen",
    "check_omega_convex",
    "check_wright",
    "wright_sums",
    "wright_chains",
    "wright_configs_from_tuples",
    "jensen_configs_from_wright",
    "step_configs_to_jensen",
    "Certificate",
    "Verdict",
    "Property",
]
