"""Exact scalar types used throughout the package.

Three exact number kinds are supported besides ``int``/``Fraction``:

``Surd``
    elements of a multiquadratic field Q(sqrt(d1), sqrt(d2), ...), stored as a
    rational combination of square roots of squarefree integers.  Closed under
    the field operations, with an exact sign test.
``ExpSum``
    finite sums ``c1*exp(a1) + ... + ck*exp(ak)`` with coefficients and exponents
    in the multiquadratic field.  This is a ring; division is only supported by
    a single term.  Distinct algebraic exponents make the representation
    canonical, so equality is exact.

Floats pass through unchanged and mark a value as inexact.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
import mpmath

Rational = Union[int, Fraction]


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(a, s)`` with ``n == a*a*s`` and ``s`` squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    a, s = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        a *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return a, s * n


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


_mpq = gmpy2.mpq


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class Surd:
    """An irrational element ``sum(c_s * sqrt(s))`` of a multiquadratic field.

    Arithmetic results that happen to be rational are returned as ``Fraction``,
    so a live ``Surd`` instance is always irrational.  Coefficients are held as
    gmpy2 rationals internally and exposed as ``Fraction``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict):
        self._terms = {s: _mpq(c) for s, c in terms.items()}
        self._hash = None

    # -- construction -------------------------------------------------------
    @staticmethod
    def _raw(terms: dict) -> "Surd":
        out = Surd.__new__(Surd)
        out._terms = terms
        out._hash = None
        return out

    @staticmethod
    def _make(terms: dict):
        terms = {s: c for s, c in terms.items() if c != 0}
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and 1 in terms:
            return _to_fraction(terms[1])
        return Surd._raw(terms)

    @staticmethod
    def lift(x) -> dict:
        if isinstance(x, Surd):
            return x._terms
        return {1: _mpq(_as_fraction(x))}

    @property
    def terms(self) -> dict[int, Fraction]:
        return {s: _to_fraction(c) for s, c in self._terms.items()}

    def __reduce__(self):
        return (Surd, (self.terms,))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (Surd, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        out = dict(self._terms)
        for s, c in Surd.lift(other).items():
            out[s] = out.get(s, 0) + c
        return Surd._make(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw({s: -c for s, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (Surd, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (Surd, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        if not isinstance(other, Surd):
            if other == 0:
                return Fraction(0)
            q = _mpq(other)
            return Surd._raw({s: c * q for s, c in self._terms.items()})
        out: dict = {}
        for s1, c1 in self._terms.items():
            for s2, c2 in other._terms.items():
                g = math.gcd(s1, s2)
                s = (s1 // g) * (s2 // g)
                out[s] = out.get(s, 0) + c1 * c2 * g
        return Surd._make(out)

    __rmul__ = __mul__

    def _primes(self) -> list[int]:
        ps: set[int] = set()
        for s in self._terms:
            ps.update(_prime_factors(s))
        return sorted(ps)

    def conjugate(self, p: int):
        """Apply the field automorphism sqrt(p) -> -sqrt(p)."""
        return Surd._make({s: (-c if s % p == 0 else c) for s, c in self._terms.items()})

    def inverse(self):
        num = Fraction(1)
        b = self
        for p in self._primes():
            if not isinstance(b, Surd):
                break
            c = b.conjugate(p)
            num = num * c
            b = b * c
        # b is now rational (product over all Galois conjugates)
        return num * (1 / _as_fraction(b))

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("Surd division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ----------------------------------------------------------------
    def sign(self) -> int:
        return _surd_sign(self._terms)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        if not isinstance(other, (Surd, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        return sign(self - other)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self._terms == other._terms
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return True

    def __float__(self):
        return float(sum(float(c) * math.sqrt(s) for s, c in self._terms.items()))

    def to_mpf(self):
        return mpmath.fsum(
            mpmath.mpf(int(c.numerator)) / int(c.denominator) * mpmath.sqrt(s)
            for s, c in self._terms.items()
        )

    def __str__(self):
        parts = []
        terms = self.terms
        for s in sorted(terms):
            c = terms[s]
            if s == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({s})")
            elif c == -1:
                parts.append(f"-sqrt({s})")
            else:
                parts.append(f"{c}*sqrt({s})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Surd({self})"


def _surd_sign(terms: dict) -> int:
    if not terms:
        return 0
    if len(terms) == 1:
        (s, c), = terms.items()
        return 1 if c > 0 else -1
    # floating filter: each term carries relative error below 4u, so the sum is
    # off by at most (len + 4) u * sum |term|; outside that band the sign is exact
    approx, mag = 0.0, 0.0
    for s, c in terms.items():
        t = float(c) * math.sqrt(s)
        approx += t
        mag += abs(t)
    if math.isfinite(mag) and abs(approx) > (len(terms) + 8) * 2.0 ** -52 * mag:
        return 1 if approx > 0 else -1
    ps: set[int] = set()
    for s in terms:
        ps.update(_prime_factors(s))
    p = max(ps)
    # split x = u + v*sqrt(p) with u, v free of sqrt(p)
    u = {s: c for s, c in terms.items() if s % p}
    v = {s // p: c for s, c in terms.items() if s % p == 0}
    su, sv = _surd_sign(u), _surd_sign(v)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv if su == 0 else su
    uu = Surd._make(u)
    vv = Surd._make(v)
    d = uu * uu - p * vv * vv
    return su * sign(d)


def horner(coeffs, x):
    """``sum(coeffs[k] * x**k)`` for rational coefficients and an exact ``x``.

    A ``Surd`` with a single radical is evaluated on its coordinate pair."""
    if isinstance(x, Surd) and len(x._terms) <= 2:
        rads = [s for s in x._terms if s != 1]
        if len(rads) == 1:
            d = rads[0]
            a, b = x._terms.get(1, _mpq(0)), x._terms[d]
            bd = b * d
            u, v = _mpq(0), _mpq(0)
            for c in reversed(coeffs):
                u, v = u * a + v * bd + _mpq(c), u * b + v * a
            return Surd._make({1: u, d: v})
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def sqrt(n) -> Union[Fraction, Surd]:
    """Exact square root of a nonnegative rational."""
    q = _as_fraction(n)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0)
    num = q.numerator * q.denominator
    a, s = _squarefree_split(num)
    coef = Fraction(a, q.denominator)
    if s == 1:
        return coef
    return Surd({s: coef})


FieldElt = Union[int, Fraction, Surd]


def _is_field(x) -> bool:
    return isinstance(x, (int, Fraction, Surd)) and not isinstance(x, bool)


class ExpSum:
    """Exact ``sum(c_k * exp(a_k))`` with algebraic ``c_k`` and distinct ``a_k``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict):
        self._terms = terms
        self._hash = None

    @staticmethod
    def _make(terms: dict):
        terms = {a: c for a, c in terms.items() if c != 0}
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and 0 in terms:
            c = terms[0]
            return Fraction(c) if isinstance(c, int) else c
        return ExpSum(terms)

    @staticmethod
    def lift(x) -> dict:
        if isinstance(x, ExpSum):
            return x._terms
        if _is_field(x):
            return {Fraction(0): x}
        raise TypeError(f"cannot combine ExpSum with {type(x).__name__}")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __add__(self, other):
        if not (isinstance(other, ExpSum) or _is_field(other)):
            return NotImplemented
        out = dict(self._terms)
        for a, c in ExpSum.lift(other).items():
            out[a] = out.get(a, 0) + c
        return ExpSum._make(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpSum({a: -c for a, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not (isinstance(other, ExpSum) or _is_field(other)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not _is_field(other):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not (isinstance(other, ExpSum) or _is_field(other)):
            return NotImplemented
        out: dict = {}
        for a1, c1 in self._terms.items():
            for a2, c2 in ExpSum.lift(other).items():
                a = a1 + a2
                out[a] = out.get(a, 0) + c1 * c2
        return ExpSum._make(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_field(other):
            if other == 0:
                raise ZeroDivisionError("ExpSum division by zero")
            return ExpSum._make({a: c / other for a, c in self._terms.items()})
        if isinstance(other, ExpSum):
            if not other.is_monomial:
                raise ArithmeticError("ExpSum division is only defined by a single exponential term")
            (b, d), = other._terms.items()
            return ExpSum._make({a - b: c / d for a, c in self._terms.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        if not _is_field(other):
            return NotImplemented
        if not self.is_monomial:
            raise ArithmeticError("ExpSum division is only defined by a single exponential term")
        (b, d), = self._terms.items()
        return ExpSum._make({-b: other / d})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Fraction(1)
        for _ in range(k):
            out = out * self
        return out

    def to_mpf(self):
        return mpmath.fsum(to_mpf(c) * mpmath.exp(to_mpf(a)) for a, c in self._terms.items())

    def sign(self) -> int:
        signs = {sign(c) for c in self._terms.values()}
        if len(signs) == 1:
            return signs.pop()
        # Nonzero by Lindemann-Weierstrass; raise precision until the sign is clear.
        dps = 50
        while dps <= 3200:
            with mpmath.workdps(dps):
                v = self.to_mpf()
                scale = mpmath.fsum(abs(to_mpf(c) * mpmath.exp(to_mpf(a))) for a, c in self._terms.items())
                if abs(v) > scale * mpmath.mpf(10) ** (-(dps - 10)):
                    return 1 if v > 0 else -1
            dps *= 2
        raise ArithmeticError("could not resolve the sign of an exponential sum")

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other):
        if not (isinstance(other, ExpSum) or _is_field(other)):
            return NotImplemented
        return sign(self - other)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, ExpSum):
            return self._terms == other._terms
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return True

    def __float__(self):
        return float(sum(float(c) * math.exp(float(a)) for a, c in self._terms.items()))

    def __str__(self):
        parts = []
        for a in sorted(self._terms, key=float):
            c = self._terms[a]
            if a == 0:
                parts.append(f"{c}" if not isinstance(c, Surd) else f"({c})")
                continue
            cs = "" if c == 1 else (f"({c})*" if isinstance(c, Surd) else f"{c}*")
            parts.append(f"{cs}exp({a})")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExpSum({self})"


def exp(x):
    """``exp`` that stays exact on exact input and falls back to ``math.exp``."""
    if isinstance(x, float):
        return math.exp(x)
    if _is_field(x):
        if x == 0:
            return Fraction(1)
        return ExpSum({Fraction(x) if isinstance(x, int) else x: Fraction(1)})
    if isinstance(x, ExpSum):
        raise ArithmeticError("exp of an exponential sum is not representable")
    raise TypeError(f"unsupported argument for exp: {type(x).__name__}")


Exact = Union[int, Fraction, Surd, ExpSum]


def is_exact(x) -> bool:
    if isinstance(x, bool):
        return False
    if isinstance(x, (int, Fraction, Surd, ExpSum)):
        return True
    coords = getattr(x, "coords", None)
    if coords is not None:
        return is_exact(x.value)
    return False


def point_value(x):
    """Numeric value of a point; module points carry their value alongside coordinates."""
    return x.value if hasattr(x, "coords") else x


def sign(x) -> int:
    x = point_value(x)
    if isinstance(x, (Surd, ExpSum)):
        return x.sign()
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def to_float(x) -> float:
    return float(point_value(x))


def to_mpf(x):
    x = point_value(x)
    if isinstance(x, (Surd, ExpSum)):
        return x.to_mpf()
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def exact_str(x) -> str:
    """Decimal-string rendering that preserves exactness (``p/q``, surds, exp terms)."""
    x = point_value(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, int):
        return str(x)
    return str(x)


# -- literal parsing ----------------------------------------------------------

_ALLOWED_CALLS = {"sqrt", "exp"}


def _eval_const(node):
    if isinstance(node, ast.Expression):
        return _eval_const(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ValueError(f"unsupported literal {node.value!r}")
        return Fraction(node.value) if isinstance(node.value, int) else node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_const(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval_const(node.left), _eval_const(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow) and isinstance(b, Fraction) and b.denominator == 1:
            return a ** int(b)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _ALLOWED_CALLS:
        if len(node.args) != 1:
            raise ValueError(f"{node.func.id} takes one argument")
        arg = _eval_const(node.args[0])
        if node.func.id == "sqrt":
            return math.sqrt(arg) if isinstance(arg, float) else sqrt(arg)
        return exp(arg)
    raise ValueError(f"unsupported constant expression: {ast.dump(node)}")


def parse_scalar(text) -> Union[Fraction, float, Surd, ExpSum]:
    """Parse a numeric literal.

    Integers and ``p/q`` literals become ``Fraction``; decimal literals such as
    ``0.5`` become floats; ``sqrt(2)``-style constants become exact surds.
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, (float, Surd, ExpSum)):
        return text
    s = str(text).strip()
    if not s:
        raise ValueError("empty numeric literal")
    try:
        return Fraction(int(s))
    except ValueError:
        pass
    if "/" in s and all(part.strip().lstrip("+-").isdigit() for part in s.split("/", 1)):
        return Fraction(s.replace(" ", ""))
    try:
        tree = ast.parse(s, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse numeric literal {s!r}") from exc
    return _eval_const(tree)
