"""Chebyshev systems: the polynomial system, weight-scaled systems and extensions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .det import DetValue, Mode, det_exact, det_float, phi_many
from .funcs import ONE, FuncHandle, Polynomial, Product
from .scalars import is_exact, parse_scalar, point_value, sign, to_float

MIN_SEPARATION = Fraction(1, 10**6)


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_scalar(self.lo))
        object.__setattr__(self, "hi", parse_scalar(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval: lo={self.lo} must be < hi={self.hi}")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``[a, b]``, ``(a, b]``, ``[a, b)`` or ``(a, b)``."""
        m = re.fullmatch(r"\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*", text)
        if not m:
            raise ValueError(f"cannot parse interval {text!r}")
        return cls(m.group(2), m.group(3), m.group(1) == "(", m.group(4) == ")")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        v = point_value(x)
        above = v > self.lo if self.lo_open else v >= self.lo
        below = v < self.hi if self.hi_open else v <= self.hi
        return bool(above and below)

    def __str__(self):
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


@dataclass(frozen=True)
class WeightFactorization:
    """``omega_i = (a_{i,0} + a_{i,1} t + ... + a_{i,n-1} t^{n-1}) * weight``."""

    weight: FuncHandle
    coeff_matrix: tuple

    @property
    def det(self):
        if all(is_exact(a) for row in self.coeff_matrix for a in row):
            return det_exact(self.coeff_matrix)
        return det_float(self.coeff_matrix).value


@dataclass(frozen=True)
class ChebSystem:
    components: tuple
    domain: Interval
    factorized: Optional[WeightFactorization] = None
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def exact_capable(self) -> bool:
        return all(c.exact_capable for c in self.components)

    @property
    def weight(self) -> FuncHandle:
        if self.factorized is None:
            raise ValueError(f"system {self.name or ''} has no weight factorization")
        return self.factorized.weight

    @property
    def is_polynomial(self) -> bool:
        """True for a factorization with unit weight."""
        return self.factorized is not None and self.factorized.weight == ONE

    def evaluate(self, x, exact: bool) -> list:
        return [c.evaluate(x, exact) for c in self.components]

    def support(self) -> Optional[tuple]:
        sup = None
        for c in self.components:
            s = c.support()
            if s is not None:
                sup = set(s) if sup is None else sup & set(s)
        if sup is None:
            return None
        return tuple(sorted(x for x in sup if self.domain.contains(x)))

    def __str__(self):
        return self.name or "(" + ", ".join(map(str, self.components)) + ")"


@dataclass(frozen=True)
class ExtendedSystem:
    """``(omega_1, ..., omega_n, extra)``, itself a positive Chebyshev system."""

    base: ChebSystem
    extra: FuncHandle
    from_power: bool = False

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    @property
    def components(self) -> tuple:
        return tuple(self.base.components) + (self.extra,)

    @property
    def domain(self) -> Interval:
        return self.base.domain

    def as_system(self) -> ChebSystem:
        fact = None
        if self.from_power and self.base.factorized is not None:
            m = self.base.factorized.coeff_matrix
            n = len(m)
            rows = tuple(tuple(r) + (Fraction(0),) for r in m)
            rows += (tuple([Fraction(0)] * n + [Fraction(1)]),)
            fact = WeightFactorization(self.base.factorized.weight, rows)
        return ChebSystem(self.components, self.domain, fact, name=f"{self.base}+[{self.extra}]")

    def __str__(self):
        return f"{self.base} extended by {self.extra}"


def _component(row: Sequence, weight: FuncHandle) -> FuncHandle:
    poly = Polynomial(tuple(row))
    return poly if weight == ONE else Product((poly, weight))


def _check_weight_positive(weight: FuncHandle, domain: Interval, samples: int = 257) -> None:
    if weight.is_positive() is True:
        return
    lo, hi = to_float(domain.lo), to_float(domain.hi)
    for k in range(samples):
        t = lo + (hi - lo) * k / (samples - 1)
        if (k == 0 and domain.lo_open) or (k == samples - 1 and domain.hi_open):
            continue
        if weight.evaluate(t, exact=False) <= 0:
            raise ValueError(f"weight {weight} is not positive at t={t}")


def make_weighted_system(weight: FuncHandle, coeff_matrix: Sequence[Sequence], domain: Interval,
                         name: str = "") -> ChebSystem:
    """Build ``omega_i = p_i * weight`` with ``p_i`` read from the rows of ``coeff_matrix``.

    Row ``i`` holds ascending coefficients ``(a_{i,0}, ..., a_{i,n-1})``.  A
    nonpositive ``det(M)`` is rejected: such a system cannot be a positive
    Chebyshev system.
    """
    rows = tuple(tuple(parse_scalar(a) for a in row) for row in coeff_matrix)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("coefficient matrix must be square and nonempty")
    _check_weight_positive(weight, domain)
    fact = WeightFactorization(weight, rows)
    d = fact.det
    if sign(d) <= 0:
        raise ValueError(f"det(M) = {d} <= 0; the weighted system is not a positive Chebyshev system")
    comps = tuple(_component(r, weight) for r in rows)
    return ChebSystem(comps, domain, fact, name=name)


def make_polynomial_system(n: int, domain: Interval) -> ChebSystem:
    """The system ``(1, t, ..., t^(n-1))``."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return make_weighted_system(ONE, ident, domain, name=f"pi_{n}")


def extend_with_power(system: ChebSystem) -> ExtendedSystem:
    """Append ``t^n * weight``; positive by the block structure of the coefficients."""
    if system.factorized is None:
        raise ValueError("extend_with_power needs a weight-factorized system")
    extra = _component([0] * system.dim + [1], system.factorized.weight)
    return ExtendedSystem(system, extra, from_power=True)


def extend_with(system: ChebSystem, extra: FuncHandle, sample_budget: int = 2000, seed: int = 0,
                mode=None) -> ExtendedSystem:
    """Extend by an arbitrary function, certifying positivity by sampling first."""
    ext = ExtendedSystem(system, extra)
    cert = is_positive_chebyshev(ext.as_system(), sample_budget, seed, mode=mode)
    if cert.verdict.failed:
        w = cert.witnesses[0]
        raise ValueError(f"extension is not a positive Chebyshev system: "
                         f"Phi = {w.value.value} at {[str(point_value(p)) for p in w.points]}")
    return ext


def is_positive_chebyshev(system, sample_budget: int, seed: int, mode=None, q_max: int = 8):
    """Sample strictly increasing tuples and test ``Phi > 0`` on each.

    A pass is labelled ``POSITIVE_SAMPLED`` and is never a proof.
    """
    from . import sampling
    from .report import Certificate, Property, Record, Verdict, Witness, sorted_witnesses

    if sample_budget < 1:
        raise ValueError("sample_budget must be >= 1")
    if isinstance(system, ExtendedSystem):
        system = system.as_system()
    n = system.dim
    if (n - 1) * MIN_SEPARATION > 1:
        raise ValueError(f"domain cannot hold {n} points at the minimum separation")
    exact = mode != Mode.FLOAT and system.exact_capable
    tuples = sampling.sample_simplex_tuples(system.domain, n, sample_budget, seed, q_max=q_max,
                                            exact=exact, support=system.support())
    values = phi_many(system.components, tuples, mode=Mode.EXACT if exact else Mode.FLOAT)
    witnesses, records = [], []
    neg = indet = 0
    for pts, v in zip(tuples, values):
        s = v.sign
        bad = s < 0 or (s == 0 and v.mode is Mode.EXACT)
        if bad:
            neg += 1
            witnesses.append(Witness({"points": tuple(pts)}, v))
        elif s == 0:
            indet += 1
        records.append(Record({"points": tuple(pts)}, v, bad))
    if neg:
        verdict = Verdict.REFUTED
    elif indet:
        verdict = Verdict.INDETERMINATE
    else:
        verdict = Verdict.POSITIVE_SAMPLED
    return Certificate(
        property=Property.CHEBYSHEV_POSITIVE,
        verdict=verdict,
        samples=len(tuples),
        mode=Mode.EXACT if exact else Mode.FLOAT,
        seed=seed,
        witnesses=sorted_witnesses(witnesses, 16),
        violations=neg,
        indeterminate=indet,
        notes={"non_exhaustive": True, "sample_budget": sample_budget},
        records=records,
    )


__all__ = [
    "Interval",
    "ChebSystem",
    "ExtendedSystem",
    "WeightFactorization",
    "make_polynomial_system",
    "make_weighted_system",
    "extend_with_power",
    "extend_with",
    "is_positive_chebyshev",
    "DetValue",
]
