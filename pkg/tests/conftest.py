import random
from fractions import Fraction

import pytest
import sympy


def random_fraction(rng, lo=-5, hi=5, den=12):
    q = rng.randint(1, den)
    return Fraction(rng.randint(lo * q, hi * q), q)


def sympy_det(rows):
    """Independent determinant oracle."""
    m = sympy.Matrix([[sympy.Rational(e.numerator, e.denominator) if isinstance(e, Fraction) else e
                       for e in row] for row in rows])
    d = m.det()
    return Fraction(int(d.p), int(d.q))


@pytest.fixture
def rng():
    return random.Random(20240611)
