import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chebconvex import det as D
from chebconvex.funcs import Exponential, Polynomial, Product
from chebconvex.systems import Interval, make_polynomial_system, make_weighted_system
from chebconvex.scalars import exp

from conftest import random_fraction, sympy_det

DOM = Interval(-10, 10)


def rational_matrix(rng, n):
    return [[random_fraction(rng) for _ in range(n)] for _ in range(n)]


def test_det_exact_examples():
    assert D.det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert D.det_exact([[0, 1], [1, 0]]) == -1
    xs = [0, 1, 2, 3]
    assert D.det_exact([[Fraction(x) ** i for x in xs] for i in range(4)]) == 12


def test_det_exact_against_sympy(rng):
    for n in range(1, 7):
        for _ in range(20):
            m = rational_matrix(rng, n)
            assert D.det_exact(m) == sympy_det(m)


def test_det_exact_singular():
    assert D.det_exact([[Fraction(1, 2), 1], [1, 2]]) == 0


def test_antisymmetry_under_column_swap(rng):
    for _ in range(50):
        n = rng.randint(2, 5)
        m = rational_matrix(rng, n)
        i, j = rng.sample(range(n), 2)
        sw = [row[:] for row in m]
        for row in sw:
            row[i], row[j] = row[j], row[i]
        assert D.det_exact(sw) == -D.det_exact(m)


def test_engine_agreement(rng):
    for _ in range(200):
        n = rng.randint(1, 6)
        m = rational_matrix(rng, n)
        exact = D.det_exact(m)
        fl = D.det_float([[float(e) for e in row] for row in m])
        assert abs(fl.value - float(exact)) <= fl.abs_error_bound


def test_det_float_examples():
    ident = D.det_float(np.eye(2))
    assert ident.value == 1.0
    assert ident.abs_error_bound < 1e-14
    hilbert = [[1 / (i + j + 1) for j in range(3)] for i in range(3)]
    h = D.det_float(hilbert)
    assert abs(h.value - 1 / 2160) <= h.abs_error_bound
    assert h.value == pytest.approx(4.6296e-4, rel=1e-4)
    sing = D.det_float([[1, 1], [1, 1]])
    assert abs(sing.value) <= sing.abs_error_bound
    assert sing.sign == 0


def test_det_float_rejects_non_finite():
    with pytest.raises(ValueError):
        D.det_float([[1.0, math.inf], [0.0, 1.0]])


def test_det_exact_rejects_floats():
    with pytest.raises(TypeError):
        D.det_exact([[0.5]])


def test_phi_system_examples():
    p2 = make_polynomial_system(2, DOM)
    p3 = make_polynomial_system(3, DOM)
    assert D.phi_system(p2, (0, 1)).value == 1
    assert D.phi_system(p3, (0, 1, 2)).value == 2
    ew = make_weighted_system(Exponential(1), [[1, 0], [0, 1]], DOM)
    v = D.phi_system(ew, (0, 1))
    assert v.value == exp(1)
    assert float(v) == pytest.approx(2.718281828, rel=1e-9)
    vf = D.phi_system(ew, (0.0, 1.0), mode="float")
    assert vf.value == pytest.approx(math.e, rel=1e-14)


def test_phi_bordered_examples():
    p2 = make_polynomial_system(2, DOM)
    sq = Polynomial((0, 0, 1))
    assert D.phi_bordered(p2, sq, (0, 1, 2)).value == 2
    assert D.phi_bordered(p2, p2.components[0], (Fraction(1, 3), 2, 5)).value == 0
    from chebconvex.funcs import Expression
    assert D.phi_bordered(p2, Expression("abs(x)"), (-1, 0, 1)).value == 2


def test_phi_errors():
    p2 = make_polynomial_system(2, DOM)
    with pytest.raises(ValueError):
        D.phi_system(p2, (0, 1, 2))
    with pytest.raises(ValueError):
        D.phi_system(p2, (1, 0))
    with pytest.raises(ValueError):
        D.phi_system(p2, (1, 1))
    from chebconvex.funcs import EvaluationError, Tabulated
    tab = Tabulated((0, 1, 2), (0, 1, 4))
    with pytest.raises(EvaluationError):
        D.phi_bordered(p2, tab, (0, Fraction(1, 2), 2))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=3, max_size=3, unique=True),
       st.fractions(min_value=-3, max_value=3, max_denominator=5),
       st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_phi_bordered_linear_in_f(xs, a, b):
    xs = tuple(sorted(xs))
    p2 = make_polynomial_system(2, DOM)
    f, g = Polynomial((1, -2, 0, 1)), Polynomial((0, 0, 3))
    lhs = D.phi_bordered(p2, a * f + b * g, xs).value
    rhs = a * D.phi_bordered(p2, f, xs).value + b * D.phi_bordered(p2, g, xs).value
    assert lhs == rhs


def test_phi_of_span_member_vanishes(rng):
    p3 = make_polynomial_system(3, DOM)
    for _ in range(50):
        coeffs = [random_fraction(rng) for _ in range(3)]
        f = Polynomial(tuple(coeffs))
        xs = tuple(sorted(set(random_fraction(rng) for _ in range(6))))[:4]
        if len(xs) < 4:
            continue
        assert D.phi_bordered(p3, f, xs).value == 0


def test_phi_weighted_exact_exponential():
    ew = make_weighted_system(Exponential(1), [[1, 0], [0, 1]], DOM)
    f = Product((Polynomial((0, 0, 1)), Exponential(1)))
    v = D.phi_bordered(ew, f, (0, 1, 2)).value
    assert v == 2 * exp(3)


def test_phi_many_matches_single(rng):
    p3 = make_polynomial_system(3, DOM)
    tuples = [tuple(sorted(rng.sample(range(-10, 11), 3))) for _ in range(100)]
    many = D.phi_many(p3.components, tuples)
    for t, v in zip(tuples, many):
        assert v.value == D.vandermonde_product(t)
    fl = D.phi_many(p3.components, [tuple(float(x) for x in t) for t in tuples], mode="float")
    for t, v in zip(tuples, fl):
        assert abs(v.value - float(D.vandermonde_product(t))) <= v.abs_error_bound


def test_detvalue_sign_policy():
    assert D.DetValue(Fraction(0), D.Mode.EXACT).sign == 0
    v = D.DetValue(-1e-18, D.Mode.FLOAT, 1e-16)
    assert v.sign == 0 and v.is_nonnegative and v.is_zero
    w = D.DetValue(-1e-3, D.Mode.FLOAT, 1e-16)
    assert w.is_negative and not w.is_nonnegative


def test_resolve_mode():
    p2 = make_polynomial_system(2, DOM)
    assert D.resolve_mode(None, p2.components, [Fraction(1)]) is D.Mode.EXACT
    assert D.resolve_mode(None, p2.components, [0.5]) is D.Mode.FLOAT
    with pytest.raises(ValueError):
        D.resolve_mode("exact", p2.components, [0.5])
