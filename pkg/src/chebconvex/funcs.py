"""Function handles: the scalar functions that make up systems and candidates.

Every handle evaluates in one of two modes.  ``evaluate(x, exact=True)`` keeps
exact inputs exact (``Fraction``, surds, exponential sums) and raises if that is
impossible; ``exact=False`` returns a float.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable as _Callable, Optional, Sequence

from . import scalars
from .scalars import is_exact, parse_scalar, point_value


class EvaluationError(ValueError):
    """A handle cannot be evaluated at the requested point."""


class FuncHandle:
    exact_capable: bool = True

    def evaluate(self, x, exact: bool):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x, exact=is_exact(x))

    def support(self) -> Optional[tuple]:
        """Finite set of abscissae the handle is restricted to, or ``None``."""
        return None

    def is_positive(self) -> Optional[bool]:
        """Symbolic positivity where it is known, ``None`` otherwise."""
        return None

    # -- algebra ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, FuncHandle):
            return LinearCombination(((Fraction(1), self), (Fraction(1), other)))
        return LinearCombination(((Fraction(1), self), (Fraction(1), Polynomial((other,)))))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return LinearCombination(((Fraction(-1), self),))

    def __sub__(self, other):
        return self + (-other if isinstance(other, FuncHandle) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FuncHandle):
            return Product((self, other))
        return LinearCombination(((other, self),))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, FuncHandle):
            return Quotient(self, other)
        return LinearCombination(((1 / Fraction(other) if not isinstance(other, float) else 1 / other, self),))


def _require_exact(handle, x):
    if not is_exact(x):
        raise EvaluationError(f"{handle} cannot be evaluated exactly at inexact point {x!r}")


@dataclass(frozen=True, eq=True)
class Polynomial(FuncHandle):
    """``c0 + c1*t + ... + ck*t^k`` with coefficients in ascending order."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = [parse_scalar(c) for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs) or (Fraction(0),))
        object.__setattr__(self, "_exact", all(is_exact(c) for c in self.coeffs))
        rational = all(isinstance(c, (int, Fraction)) for c in self.coeffs)
        if rational:
            den = math.lcm(*(Fraction(c).denominator for c in self.coeffs))
            nums = tuple(int(Fraction(c) * den) for c in self.coeffs)
            object.__setattr__(self, "_int_form", (nums, den))
        else:
            object.__setattr__(self, "_int_form", None)

    @property
    def exact_capable(self):
        return self._exact

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Polynomial":
        return cls(tuple([0] * k + [coeff]))

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else 0

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,))

    def evaluate(self, x, exact: bool):
        v = point_value(x)
        if exact:
            _require_exact(self, v)
            if not self._exact:
                raise EvaluationError(f"polynomial {self} has inexact coefficients")
            if self._int_form is not None and isinstance(v, (int, Fraction)):
                # Horner over integers, one normalisation at the end
                nums, den = self._int_form
                p, q = v.numerator, v.denominator
                acc, scale = 0, 1
                for c in reversed(nums):
                    acc = acc * p + c * scale
                    scale *= q
                return Fraction(acc, den * scale // q)
            if self._int_form is not None:
                return scalars.horner(self.coeffs, v)
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * v + c
            return acc
        v = float(v)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * v + float(c)
        return acc

    def is_positive(self):
        if self.degree == 0:
            return self.coeffs[0] > 0
        return None

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(f"{c}")
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) or "0"


@dataclass(frozen=True, eq=True)
class Exponential(FuncHandle):
    """``coeff * exp(rate * t)``."""

    rate: object = Fraction(1)
    coeff: object = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "rate", parse_scalar(self.rate))
        object.__setattr__(self, "coeff", parse_scalar(self.coeff))

    @property
    def exact_capable(self):
        return is_exact(self.rate) and is_exact(self.coeff)

    def evaluate(self, x, exact: bool):
        v = point_value(x)
        if exact:
            _require_exact(self, v)
            return self.coeff * scalars.exp(self.rate * v)
        return float(self.coeff) * math.exp(float(self.rate) * float(v))

    def is_positive(self):
        return scalars.sign(self.coeff) > 0

    def __str__(self):
        body = "exp(t)" if self.rate == 1 else f"exp({self.rate}*t)"
        return body if self.coeff == 1 else f"{self.coeff}*{body}"


@dataclass(frozen=True, eq=True)
class Product(FuncHandle):
    factors: tuple

    @property
    def exact_capable(self):
        return all(f.exact_capable for f in self.factors)

    def evaluate(self, x, exact: bool):
        acc = Fraction(1) if exact else 1.0
        for f in self.factors:
            acc = acc * f.evaluate(x, exact)
        return acc

    def support(self):
        return _merge_support(self.factors)

    def is_positive(self):
        flags = [f.is_positive() for f in self.factors]
        return True if all(flag is True for flag in flags) else None

    def __str__(self):
        return "*".join(f"({f})" for f in self.factors)


@dataclass(frozen=True, eq=True)
class LinearCombination(FuncHandle):
    """``sum(coef * handle)`` over the stored pairs."""

    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((parse_scalar(c), h) for c, h in self.terms))

    @property
    def exact_capable(self):
        return all(is_exact(c) and h.exact_capable for c, h in self.terms)

    def evaluate(self, x, exact: bool):
        acc = Fraction(0) if exact else 0.0
        for c, h in self.terms:
            v = h.evaluate(x, exact)
            acc = acc + (c * v if exact else float(c) * v)
        return acc

    def support(self):
        return _merge_support([h for _, h in self.terms])

    def __str__(self):
        return " + ".join(f"{c}*({h})" for c, h in self.terms)


@dataclass(frozen=True, eq=True)
class Quotient(FuncHandle):
    num: FuncHandle
    den: FuncHandle

    @property
    def exact_capable(self):
        return self.num.exact_capable and self.den.exact_capable

    def evaluate(self, x, exact: bool):
        d = self.den.evaluate(x, exact)
        if d == 0:
            raise EvaluationError(f"division by zero in {self} at {x!r}")
        return self.num.evaluate(x, exact) / d

    def support(self):
        return _merge_support([self.num, self.den])

    def __str__(self):
        return f"({self.num})/({self.den})"


@dataclass(frozen=True, eq=False)
class Tabulated(FuncHandle):
    """Sample pairs ``(x, f(x))``; evaluable only at the stored abscissae."""

    xs: tuple
    ys: tuple
    name: str = "tabulated"
    _table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("abscissae and values differ in length")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise ValueError(f"abscissae must be strictly increasing ({a} >= {b})")
        object.__setattr__(self, "_table", dict(zip(self.xs, self.ys)))

    @property
    def exact_capable(self):
        return all(is_exact(v) for v in self.xs + self.ys)

    def evaluate(self, x, exact: bool):
        v = point_value(x)
        try:
            y = self._table[v]
        except (KeyError, TypeError):
            raise EvaluationError(f"{self.name} has no sample at {v}") from None
        if exact:
            _require_exact(self, y)
            return y
        return float(y)

    def support(self):
        return tuple(self.xs)

    def __str__(self):
        return f"{self.name}[{len(self.xs)} samples]"


def _merge_support(handles) -> Optional[tuple]:
    sup = None
    for h in handles:
        s = h.support()
        if s is None:
            continue
        sup = set(s) if sup is None else sup & set(s)
    return None if sup is None else tuple(sorted(sup))


# -- expressions ----------------------------------------------------------

_FLOAT_ONLY = {"sin": math.sin, "cos": math.cos, "log": math.log, "tanh": math.tanh}
_EXACT_CALLS = {"exp", "abs", "sqrt"}


def _scan(node, var: str) -> bool:
    """Validate an expression tree; return whether it is exactly evaluable."""
    exact = True
    for sub in ast.walk(node):
        if isinstance(sub, ast.Name):
            if sub.id not in (var, *(_FLOAT_ONLY), *(_EXACT_CALLS)):
                raise ValueError(f"unknown name {sub.id!r} in expression")
            if sub.id in _FLOAT_ONLY:
                exact = False
        elif isinstance(sub, ast.Constant):
            if isinstance(sub.value, float):
                exact = False
            elif not isinstance(sub.value, int) or isinstance(sub.value, bool):
                raise ValueError(f"unsupported literal {sub.value!r}")
        elif isinstance(sub, ast.Call):
            if not isinstance(sub.func, ast.Name) or len(sub.args) != 1 or sub.keywords:
                raise ValueError("only single-argument calls of known functions are allowed")
        elif not isinstance(sub, (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Load, ast.Add, ast.Sub,
                                  ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)):
            raise ValueError(f"unsupported syntax {type(sub).__name__}")
    return exact


class Expression(FuncHandle):
    """Closed-form expression in one variable, e.g. ``"x**2 + exp(x)"``.

    Supported: ``+ - * / **`` (integer powers), ``exp``, ``abs``, ``sqrt`` of
    constants, and float-only ``sin cos log tanh``.
    """

    def __init__(self, source: str, var: str = "x"):
        self.source = source.strip()
        self.var = var
        self._tree = ast.parse(self.source, mode="eval")
        self._exact = _scan(self._tree, var)

    def __reduce__(self):
        return (Expression, (self.source, self.var))

    def __eq__(self, other):
        return isinstance(other, Expression) and (self.source, self.var) == (other.source, other.var)

    def __hash__(self):
        return hash((self.source, self.var))

    @property
    def exact_capable(self):
        return self._exact

    def evaluate(self, x, exact: bool):
        v = point_value(x)
        if exact:
            if not self._exact:
                raise EvaluationError(f"expression {self.source!r} is not exactly evaluable")
            _require_exact(self, v)
        else:
            v = float(v)
        return self._eval(self._tree.body, v, exact)

    def _eval(self, node, v, exact):
        if isinstance(node, ast.Name):
            return v
        if isinstance(node, ast.Constant):
            return Fraction(node.value) if exact else float(node.value)
        if isinstance(node, ast.UnaryOp):
            a = self._eval(node.operand, v, exact)
            return -a if isinstance(node.op, ast.USub) else a
        if isinstance(node, ast.BinOp):
            a = self._eval(node.left, v, exact)
            b = self._eval(node.right, v, exact)
            op = node.op
            if isinstance(op, ast.Add):
                return a + b
            if isinstance(op, ast.Sub):
                return a - b
            if isinstance(op, ast.Mult):
                return a * b
            if isinstance(op, ast.Div):
                if b == 0:
                    raise EvaluationError(f"division by zero in {self.source!r}")
                return a / b
            if exact:
                if not (isinstance(b, Fraction) and b.denominator == 1):
                    raise EvaluationError("exact powers need integer exponents")
                return a ** int(b)
            return a ** b
        if isinstance(node, ast.Call):
            name = node.func.id
            a = self._eval(node.args[0], v, exact)
            if name == "exp":
                return scalars.exp(a) if exact else math.exp(a)
            if name == "abs":
                return abs(a)
            if name == "sqrt":
                if exact:
                    if not isinstance(a, Fraction):
                        raise EvaluationError("exact sqrt only of rationals")
                    return scalars.sqrt(a)
                return math.sqrt(a)
            return _FLOAT_ONLY[name](a)
        raise EvaluationError(f"cannot evaluate node {type(node).__name__}")

    def __str__(self):
        return self.source

    def __repr__(self):
        return f"Expression({self.source!r})"


class Callable(FuncHandle):
    """Wrap an arbitrary Python callable.

    With ``exact=True`` the callable is trusted to map exact inputs to exact
    outputs (``abs`` on fractions, for instance).
    """

    def __init__(self, fn: _Callable, name: str = "", exact: bool = False):
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "callable")
        self._exact = exact

    @property
    def exact_capable(self):
        return self._exact

    def evaluate(self, x, exact: bool):
        v = point_value(x)
        if exact:
            if not self._exact:
                raise EvaluationError(f"{self.name} is float-only")
            _require_exact(self, v)
            return self.fn(v)
        return float(self.fn(float(v)))

    def __str__(self):
        return self.name


ONE = Polynomial((1,))


def monomials(n: int) -> list[Polynomial]:
    """``1, t, ..., t^(n-1)``."""
    return [Polynomial.monomial(k) for k in range(n)]


def combination(coeffs: Sequence, handles: Sequence[FuncHandle]) -> LinearCombination:
    return LinearCombination(tuple(zip(coeffs, handles)))
