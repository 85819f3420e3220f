"""Finitely generated rational modules, additive maps and generalized polynomials.

A module point ``q_1 b_1 + ... + q_m b_m`` carries its rational coordinates, so
additive maps evaluate by exact rational linearity and never by inverting a
numeric value.  Generators are declared linearly independent over the
rationals; that cannot be checked from values and is not attempted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .funcs import ONE, EvaluationError, FuncHandle
from .scalars import Surd, exact_str, is_exact, parse_scalar, sqrt, to_float


@dataclass(frozen=True)
class RationalModule:
    generators: tuple
    domain: Optional[object] = None

    def __post_init__(self):
        gens = tuple(parse_scalar(g) for g in self.generators)
        if not gens:
            raise ValueError("a module needs at least one generator")
        if any(g == 0 for g in gens):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def exact(self) -> bool:
        return all(is_exact(g) for g in self.generators)

    def point(self, *coords) -> "ModulePoint":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return ModulePoint(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "ModulePoint":
        return self.point(*([0] * self.rank))

    def unit_index(self) -> Optional[int]:
        """Index of the generator equal to 1, if any."""
        for i, g in enumerate(self.generators):
            if g == 1:
                return i
        return None

    def embed_rational(self, q) -> "ModulePoint":
        i = self.unit_index()
        if i is None:
            raise ValueError("module has no unit generator; rationals are not module points")
        coords = [Fraction(0)] * self.rank
        coords[i] = Fraction(q)
        return ModulePoint(self, tuple(coords))

    def __str__(self):
        return "Q<" + ", ".join(map(str, self.generators)) + ">"


class ModulePoint:
    """``sum(q_i * b_i)`` with exact rational coordinates."""

    __slots__ = ("module", "coords", "value")

    def __init__(self, module: RationalModule, coords: tuple):
        if len(coords) != module.rank:
            raise ValueError(f"expected {module.rank} coordinates, got {len(coords)}")
        self.module = module
        self.coords = tuple(Fraction(c) for c in coords)
        acc = Fraction(0)
        for q, b in zip(self.coords, module.generators):
            if q:
                acc = acc + q * b
        self.value = acc

    def __reduce__(self):
        return (ModulePoint, (self.module, self.coords))

    def _coerce(self, other) -> "ModulePoint":
        if isinstance(other, ModulePoint):
            if other.module.generators != self.module.generators:
                raise ValueError("points belong to different modules")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.module.embed_rational(other)
        raise TypeError(f"cannot combine a module point with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return ModulePoint(self.module, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return ModulePoint(self.module, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, q):
        if isinstance(q, bool) or not isinstance(q, (int, Fraction)):
            return NotImplemented
        return ModulePoint(self.module, tuple(a * q for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, q):
        if isinstance(q, bool) or not isinstance(q, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(q))

    def _val(self, other):
        return other.value if isinstance(other, ModulePoint) else other

    def __lt__(self, other):
        return self.value < self._val(other)

    def __le__(self, other):
        return self.value <= self._val(other)

    def __gt__(self, other):
        return self.value > self._val(other)

    def __ge__(self, other):
        return self.value >= self._val(other)

    def __eq__(self, other):
        if isinstance(other, ModulePoint):
            return self.module.generators == other.module.generators and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(("ModulePoint", self.module.generators, self.coords))

    def __float__(self):
        return to_float(self.value)

    def __str__(self):
        return exact_str(self.value)

    def __repr__(self):
        return f"ModulePoint({', '.join(map(str, self.coords))})"


def _check_point(module: RationalModule, p) -> ModulePoint:
    if not isinstance(p, ModulePoint):
        raise EvaluationError(f"{p!r} is not a module point; evaluation off the module is not defined")
    if p.module.generators != module.generators:
        raise EvaluationError("point belongs to a different module")
    return p


@dataclass(frozen=True)
class AdditiveMap:
    """``A(sum q_i b_i) = sum q_i * A(b_i)``."""

    module: RationalModule
    gen_values: tuple

    def __post_init__(self):
        vals = tuple(parse_scalar(v) for v in self.gen_values)
        if len(vals) != self.module.rank:
            raise ValueError(f"need {self.module.rank} generator values, got {len(vals)}")
        object.__setattr__(self, "gen_values", vals)

    def __call__(self, p):
        return eval_additive(self, p)


def eval_additive(amap: AdditiveMap, p) -> object:
    p = _check_point(amap.module, p)
    acc = Fraction(0)
    for q, a in zip(p.coords, amap.gen_values):
        if q:
            acc = acc + q * a
    return acc


def _multinomial(idx: tuple) -> int:
    counts = [len(list(g)) for _, g in itertools.groupby(idx)]
    out = math.factorial(len(idx))
    for c in counts:
        out //= math.factorial(c)
    return out


def _flatten(tensor, k: int, m: int) -> dict:
    """Nested k-level list -> {index tuple: value} (every index tuple present)."""
    out = {}
    for idx in itertools.product(range(m), repeat=k):
        v = tensor
        for i in idx:
            v = v[i]
        out[idx] = parse_scalar(v)
    return out


class GenPolynomial:
    """``x -> A_0 + A_1(x) + A_2(x, x) + ... + A_k(x, ..., x)`` on a module.

    ``tensors[k]`` is a symmetric k-tensor over the generators given as a
    nested list (``tensors[0]`` a scalar).  Stored in upper form keyed by
    sorted index tuples.
    """

    def __init__(self, module: RationalModule, tensors: Sequence = (), upper: Optional[dict] = None):
        self.module = module
        m = module.rank
        self.upper: dict[int, dict[tuple, object]] = {}
        if upper is not None:
            for k, entries in upper.items():
                block = {}
                for idx, v in entries.items():
                    idx = tuple(sorted(idx))
                    if len(idx) != k or any(not 0 <= i < m for i in idx):
                        raise ValueError(f"bad index {idx} for a {k}-tensor over {m} generators")
                    block[idx] = parse_scalar(v)
                self.upper[int(k)] = block
        for k, tensor in enumerate(tensors):
            if tensor is None:
                continue
            if k == 0:
                self.upper[0] = {(): parse_scalar(tensor)}
                continue
            if not isinstance(tensor, (list, tuple)):
                if parse_scalar(tensor) != 0:
                    raise ValueError(f"order-{k} tensor must be a nested list (or 0)")
                continue
            full = _flatten(tensor, k, m)
            block = {}
            for idx, v in full.items():
                key = tuple(sorted(idx))
                if key in block and block[key] != v:
                    raise ValueError(f"tensor of order {k} is not symmetric at index {idx}")
                block[key] = v
            self.upper[k] = block
        self.upper = {k: {i: v for i, v in b.items() if v != 0} for k, b in self.upper.items()}
        self.upper = {k: b for k, b in self.upper.items() if b}

    @classmethod
    def from_additive(cls, amap: AdditiveMap, constant=0) -> "GenPolynomial":
        return cls(amap.module, [constant, list(amap.gen_values)])

    @property
    def degree(self) -> int:
        return max(self.upper, default=0)

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for b in self.upper.values() for v in b.values())

    def tensor_entry(self, idx: tuple):
        return self.upper.get(len(idx), {}).get(tuple(sorted(idx)), Fraction(0))

    def __call__(self, p):
        return eval_genpoly(self, p)

    def __str__(self):
        parts = []
        for k in sorted(self.upper):
            parts.append(f"A{k}{{" + ", ".join(f"{''.join(map(str, i))}:{exact_str(v)}"
                                               for i, v in sorted(self.upper[k].items())) + "}")
        return " + ".join(parts) or "0"


def eval_genpoly(g: GenPolynomial, p) -> object:
    """Diagonal evaluation by the multinomial expansion over sorted index tuples."""
    p = _check_point(g.module, p)
    acc = Fraction(0)
    for k, block in g.upper.items():
        for idx, v in block.items():
            w = Fraction(_multinomial(idx))
            for i in idx:
                w *= p.coords[i]
            if w:
                acc = acc + w * v
    return acc


class ModuleFunction(FuncHandle):
    """``x -> g(x) * weight(x)`` on module points only."""

    def __init__(self, g: GenPolynomial, weight: FuncHandle = ONE, name: str = ""):
        self.g = g
        self.weight = weight
        self.name = name

    @property
    def exact_capable(self):
        return self.g.module.exact and self.g.exact and self.weight.exact_capable

    def evaluate(self, x, exact: bool):
        p = _check_point(self.g.module, x)
        v = eval_genpoly(self.g, p)
        if self.weight == ONE:
            return v if exact else to_float(v)
        if exact:
            return v * self.weight.evaluate(p.value, True)
        return to_float(v) * self.weight.evaluate(to_float(p.value), False)

    def __eq__(self, other):
        return (isinstance(other, ModuleFunction) and self.g is other.g and self.weight == other.weight)

    def __hash__(self):
        return hash(("ModuleFunction", id(self.g)))

    def __str__(self):
        if self.name:
            return self.name
        return f"({self.g})" if self.weight == ONE else f"({self.g})*({self.weight})"


def build_jensen_affine(system, g: GenPolynomial) -> ModuleFunction:
    """``(A_0 + A_1(x) + ... + A_k(x, ..., x)) * weight(x)`` with ``k <= n - 1``."""
    if system.factorized is None:
        raise ValueError("build_jensen_affine needs a weight-factorized system")
    if g.degree > system.dim - 1:
        raise ValueError(f"degree {g.degree} exceeds n - 1 = {system.dim - 1}")
    return ModuleFunction(g, system.weight)


def synthesize_wright(ext, F: FuncHandle, g: GenPolynomial, certify_budget: int = 500,
                      seed: int = 0, tuples: Optional[Sequence] = None) -> FuncHandle:
    """``F + (A_0 + ... + A_{n-1}(x, ..., x)) * weight`` after a sampled check that ``F`` is convex
    with respect to the base system."""
    from .certify import check_omega_convex
    from .sampling import sample_simplex_tuples

    base = ext.base
    if tuples is None:
        tuples = sample_simplex_tuples(base.domain, base.dim + 1, certify_budget, seed,
                                       exact=F.exact_capable and base.exact_capable)
    cert = check_omega_convex(base, F, tuples, seed=seed, minimize=False)
    if cert.verdict.failed:
        raise ValueError(f"F = {F} is refuted as convex with respect to {base}")
    return F + build_jensen_affine(base, g)


# -- module samplers ----------------------------------------------------------

def _rng(seed, i):
    from .sampling import rng_for
    return rng_for(seed, i)


def random_module_point(module: RationalModule, rng, coord_bound: int = 4, den: int = 8) -> ModulePoint:
    return module.point(*[Fraction(rng.randint(-coord_bound * den, coord_bound * den), den)
                          for _ in range(module.rank)])


def _positive_step(module, rng, limit, den, coord_bound=4):
    """A positive module element with value at most ``limit``."""
    for _ in range(200):
        h = random_module_point(module, rng, coord_bound=coord_bound, den=den)
        v = to_float(h.value)
        if v <= 0:
            h, v = -h, -v
        if v <= 0:
            continue
        if v > limit:
            k = math.ceil(v / limit)
            h = h / k
        if 0 < h.value and to_float(h.value) <= limit:
            return h
    raise RuntimeError("failed to draw a positive module step")


def _base_point(module, domain, rng, room, den, coord_bound=4):
    """A module point ``x`` with ``x`` in ``domain`` and ``x + room`` not past its right end.

    With a unit generator the rational coordinate is solved for a uniform target value,
    refining its denominator on retries; otherwise plain rejection sampling."""
    lo, hi = to_float(domain.lo), to_float(domain.hi)
    top = hi - room
    unit = module.unit_index()
    q = den
    for _ in range(200):
        if unit is None or top < lo:
            x = random_module_point(module, rng, coord_bound=max(4, int(abs(hi) + abs(lo)) + 1), den=den)
        else:
            coords = [Fraction(rng.randint(-coord_bound * den, coord_bound * den), den)
                      for _ in range(module.rank)]
            coords[unit] = Fraction(0)
            rest = to_float(module.point(*coords).value)
            coords[unit] = Fraction(math.floor((rng.uniform(lo, top) - rest) * q), q)
            x = module.point(*coords)
            q *= 2
        if domain.contains(x) and to_float(x.value) + room <= hi:
            return x
    raise RuntimeError("failed to draw a module point in the domain")


def module_jensen_configs(module: RationalModule, domain, n: int, budget: int, seed: int,
                          den: int = 8, coord_bound: int = 4) -> list[tuple]:
    """``(x, h)`` with module points ``x`` and ``h > 0`` and ``x + n h`` inside ``domain``."""
    width = to_float(domain.hi) - to_float(domain.lo)
    out = []
    for i in range(budget):
        rng = _rng(seed, i)
        for _ in range(100):
            h = _positive_step(module, rng, width / n * rng.random() or width / (2 * n), den, coord_bound)
            x = _base_point(module, domain, rng, n * to_float(h.value), den, coord_bound)
            if domain.contains(x + n * h):
                out.append((x, h))
                break
        else:
            raise RuntimeError("failed to draw a module Jensen configuration")
    return out


def module_wright_configs(module: RationalModule, domain, n: int, budget: int, seed: int,
                          den: int = 8, coord_bound: int = 4) -> list[tuple]:
    """``(x, (h_1, ..., h_n))`` with module points and positive module steps."""
    width = to_float(domain.hi) - to_float(domain.lo)
    out = []
    for i in range(budget):
        rng = _rng(seed, i)
        for _ in range(100):
            hs = tuple(_positive_step(module, rng, width / n * max(rng.random(), 1e-3), den, coord_bound)
                       for _ in range(n))
            total = sum(to_float(h.value) for h in hs)
            if total >= width:
                continue
            x = _base_point(module, domain, rng, total, den, coord_bound)
            end = x
            for h in hs:
                end = end + h
            if domain.contains(end):
                out.append((x, hs))
                break
        else:
            raise RuntimeError("failed to draw a module Wright configuration")
    return out


def module_simplex_tuples(module: RationalModule, domain, k: int, budget: int, seed: int,
                          den: int = 8, coord_bound: int = 4) -> list[tuple]:
    """Strictly increasing k-tuples of module points inside ``domain``."""
    out = []
    for i, (x, hs) in enumerate(module_wright_configs(module, domain, k - 1, budget, seed, den,
                                                                 coord_bound)):
        pts = [x]
        for h in hs:
            pts.append(pts[-1] + h)
        out.append(tuple(pts))
    return out


# -- discontinuity ------------------------------------------------------------

def sqrt_convergents(d: int):
    """Continued-fraction convergents ``p/q`` of ``sqrt(d)`` (``d`` not a square)."""
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ValueError(f"{d} is a perfect square")
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    yield p, q
    while True:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def _sqrt_generator(module: RationalModule) -> tuple[int, int]:
    """(index, d) of a generator equal to ``sqrt(d)``."""
    for i, g in enumerate(module.generators):
        if isinstance(g, Surd):
            terms = g.terms
            if len(terms) == 1:
                (d, c), = terms.items()
                if c == 1 and d > 1:
                    return i, d
    raise ValueError("module has no generator of the form sqrt(d)")


def discontinuity_witness(amap: AdditiveMap, anchor: Optional[ModulePoint] = None,
                          max_gap: float = 1e-6, min_jump: float = 1e3, max_terms: int = 200):
    """Module points ``p, p'`` with ``|p - p'| < max_gap`` and ``|A(p) - A(p')| > min_jump``.

    With ``p_k/q_k`` a convergent of ``sqrt(d)``, ``e = p_k - q_k sqrt(d)`` is a
    tiny module element while ``A(e) = p_k A(1) - q_k A(sqrt(d))`` grows like
    ``q_k`` unless ``A`` is a multiple of the identity.
    """
    module = amap.module
    i1 = module.unit_index()
    if i1 is None:
        raise ValueError("module needs the generator 1")
    i2, d = _sqrt_generator(module)
    if anchor is None:
        anchor = module.zero()
        if module.domain is not None:
            mid = (Fraction(module.domain.lo) + Fraction(module.domain.hi)) / 2
            anchor = module.embed_rational(mid)
    for k, (p, q) in enumerate(sqrt_convergents(d)):
        if k > max_terms:
            break
        coords = [Fraction(0)] * module.rank
        coords[i1] = Fraction(p)
        coords[i2] = Fraction(-q)
        e = module.point(*coords)
        pp = anchor + e
        gap = abs(to_float(e.value))
        jump = eval_additive(amap, pp) - eval_additive(amap, anchor)
        if gap < max_gap and abs(to_float(jump)) > min_jump:
            if module.domain is not None and not module.domain.contains(pp):
                continue
            return anchor, pp, e.value, jump
    raise ValueError("no witness found; the map may be continuous (A(sqrt(d)) = sqrt(d) A(1))")


def default_module(domain=None, rank: int = 2) -> RationalModule:
    """``{1, sqrt(2)}`` or ``{1, sqrt(2), sqrt(3)}``."""
    gens = [Fraction(1), sqrt(2), sqrt(3)][:rank]
    if rank not in (2, 3):
        raise ValueError("default modules have rank 2 or 3")
    return RationalModule(tuple(gens), domain)


__all__ = [
    "RationalModule",
    "ModulePoint",
    "AdditiveMap",
    "GenPolynomial",
    "ModuleFunction",
    "eval_additive",
    "eval_genpoly",
    "build_jensen_affine",
    "synthesize_wright",
    "module_jensen_configs",
    "module_wright_configs",
    "module_simplex_tuples",
    "random_module_point",
    "sqrt_convergents",
    "discontinuity_witness",
    "default_module",
]
