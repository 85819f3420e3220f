from fractions import Fraction

import pytest

from chebconvex.det import phi_system, vandermonde_product
from chebconvex.funcs import ONE, Exponential, Expression, Polynomial, Product, Tabulated
from chebconvex.report import Verdict
from chebconvex.sampling import sample_simplex_tuples
from chebconvex.systems import (ChebSystem, Interval, extend_with, extend_with_power, is_positive_chebyshev,
                                make_polynomial_system, make_weighted_system)

DOM = Interval(0, 10)


def test_interval_parse_and_contains():
    iv = Interval.parse("(0, 1/2]")
    assert iv.lo_open and not iv.hi_open
    assert not iv.contains(0) and iv.contains(Fraction(1, 2))
    with pytest.raises(ValueError):
        Interval(1, 1)
    with pytest.raises(ValueError):
        Interval.parse("0, 1")


def test_polynomial_system():
    s = make_polynomial_system(2, DOM)
    assert s.components == (Polynomial((1,)), Polynomial((0, 1)))
    assert s.is_polynomial
    assert phi_system(make_polynomial_system(3, DOM), (0, 1, 2)).value == 2
    s1 = make_polynomial_system(1, DOM)
    assert phi_system(s1, (Fraction(7, 3),)).value == 1
    with pytest.raises(ValueError):
        make_polynomial_system(0, DOM)


def test_weighted_system():
    s = make_weighted_system(Exponential(1), [[1, 0], [0, 1]], DOM)
    assert s.factorized.det == 1
    assert s.components[1].evaluate(2.0, False) == pytest.approx(2 * 7.38905609893065)
    p3 = make_weighted_system(ONE, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], DOM)
    assert p3.components == make_polynomial_system(3, DOM).components
    with pytest.raises(ValueError, match="det"):
        make_weighted_system(ONE, [[0, 1], [1, 0]], DOM)
    with pytest.raises(ValueError):
        make_weighted_system(ONE, [[1, 0]], DOM)
    with pytest.raises(ValueError, match="not positive"):
        make_weighted_system(Expression("x - 5"), [[1]], DOM)


def test_extend_with_power():
    p2 = make_polynomial_system(2, DOM)
    ext = extend_with_power(p2)
    assert ext.extra == Polynomial((0, 0, 1))
    ew = extend_with_power(make_weighted_system(Exponential(1), [[1, 0], [0, 1]], DOM))
    assert ew.extra == Product((Polynomial((0, 0, 1)), Exponential(1)))
    p3 = extend_with_power(make_polynomial_system(3, DOM)).as_system()
    assert phi_system(p3, (0, 1, 2, 3)).value == 12
    with pytest.raises(ValueError):
        extend_with_power(ChebSystem((ONE,), DOM))


def test_is_positive_chebyshev():
    cert = is_positive_chebyshev(make_polynomial_system(3, DOM), 1000, 0)
    assert cert.verdict is Verdict.POSITIVE_SAMPLED
    assert cert.notes["non_exhaustive"] is True
    swapped = ChebSystem((Polynomial((0, 1)), ONE), Interval(0, 1))
    bad = is_positive_chebyshev(swapped, 200, 0)
    assert bad.verdict is Verdict.REFUTED
    w = bad.witnesses[0]
    x1, x2 = w.points
    assert w.value.value == x1 - x2
    assert is_positive_chebyshev(ChebSystem((ONE,), DOM), 10, 0).verdict is Verdict.POSITIVE_SAMPLED
    with pytest.raises(ValueError):
        is_positive_chebyshev(swapped, 0, 0)


def test_power_extensions_are_positive():
    for sys_ in (make_polynomial_system(2, DOM), make_polynomial_system(4, DOM),
                 make_weighted_system(Exponential(Fraction(-1, 2)), [[2, 1, 0], [0, 1, 0], [1, 0, 3]], DOM)):
        cert = is_positive_chebyshev(extend_with_power(sys_), 300, 1)
        assert cert.verdict is Verdict.POSITIVE_SAMPLED


def test_extend_with_checks_positivity():
    p2 = make_polynomial_system(2, Interval(0, 4))
    ext = extend_with(p2, Polynomial((0, 0, 0, 1)))
    assert ext.dim == 3
    with pytest.raises(ValueError, match="not a positive"):
        extend_with(p2, Polynomial((0, 0, -1)))


def test_factorized_phi_is_vandermonde(rng):
    for n in (2, 3, 4):
        s = make_polynomial_system(n, DOM)
        for t in sample_simplex_tuples(DOM, n, 100, n):
            assert phi_system(s, t).value == vandermonde_product(t)


def test_tabulated_system_uses_support():
    xs = tuple(Fraction(k, 2) for k in range(9))
    s = ChebSystem((Tabulated(xs, tuple(Fraction(1) for _ in xs)), Tabulated(xs, xs)), Interval(0, 4))
    cert = is_positive_chebyshev(s, 100, 3)
    assert cert.verdict is Verdict.POSITIVE_SAMPLED
