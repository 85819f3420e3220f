import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chebconvex import identities as I
from chebconvex.algebra import AdditiveMap, GenPolynomial, ModuleFunction, default_module, module_wright_configs
from chebconvex.det import Mode
from chebconvex.funcs import Exponential, Expression, Polynomial, Product
from chebconvex.report import Verdict
from chebconvex.sampling import sample_qp_triples, sample_simplex_tuples, sample_wright_configs
from chebconvex.scalars import exp
from chebconvex.systems import Interval, extend_with, extend_with_power, make_polynomial_system, make_weighted_system

DOM = Interval(-4, 4)
P2 = make_polynomial_system(2, DOM)
SQ = Polynomial((0, 0, 1))
CU = Polynomial((0, 0, 0, 1))
EW = make_weighted_system(Exponential(1), [[1, 0], [0, 1]], DOM)


def test_divided_difference_examples():
    assert I.divided_difference(SQ, (0, 1, 2)) == 1
    assert I.divided_difference(Polynomial((5,)), (0, Fraction(1, 3))) == 0
    assert I.divided_difference(CU, (0, 1, 2, 3)) == 1
    with pytest.raises(ValueError):
        I.divided_difference(SQ, (0, 1, 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=10), min_size=2, max_size=5, unique=True))
def test_recursive_matches_ratio_oracle(xs):
    xs = tuple(sorted(xs))
    g = Polynomial((1, -3, 0, 2, Fraction(1, 5), -1))
    assert I.divided_difference(g, xs) == I.divided_difference_ratio(g, xs)


def test_divided_difference_float_matches_sympy():
    x = sympy.symbols("x")
    nodes = [0.1, 0.4, 0.9, 1.7]
    ref = sympy.interpolate([(n, sympy.exp(n)) for n in nodes], x).as_poly().LC()
    assert I.divided_difference(Expression("exp(x)"), nodes) == pytest.approx(float(ref), rel=1e-10)


def test_finite_difference_examples():
    assert I.finite_difference(SQ, 0, (1, 1)) == 2
    assert I.finite_difference(Polynomial((0, 1)), Fraction(1, 3), (2, Fraction(5, 7))) == 0
    m = default_module(DOM)
    a = ModuleFunction(GenPolynomial.from_additive(AdditiveMap(m, (0, 1))))
    assert I.finite_difference(a, m.point(1, -1), (m.point(0, 1), m.point(Fraction(1, 3), 2))) == 0
    with pytest.raises(ValueError):
        I.finite_difference(SQ, 3, (1, 1), DOM)


def test_factorization_examples():
    p3 = make_polynomial_system(3, DOM)
    r = I.factorization_check(p3, None, (0, 1, 2))
    assert r.both_sides == (2, 2) and r.verdict is Verdict.SATISFIED_SAMPLED
    r = I.factorization_check(EW, Product((SQ, Exponential(1))), (0, 1, 2))
    assert r.both_sides == (2 * exp(3), 2 * exp(3))
    r = I.factorization_check(EW, EW.components[0], (0, 1, 2))
    assert r.both_sides == (0, 0)
    with pytest.raises(ValueError):
        I.factorization_check(make_polynomial_system(2, DOM).__class__(P2.components, DOM), None, (0, 1))


def test_factorization_detects_mismatch():
    # a system whose declared factorization is wrong must be caught
    from chebconvex.systems import ChebSystem
    wrong = ChebSystem((Polynomial((1,)), Polynomial((0, 2))), DOM, P2.factorized)
    r = I.factorization_check(wrong, None, [(0, 1), (1, 3)])
    assert r.verdict is Verdict.VIOLATED and len(r.witnesses) == 2


def test_chwc_ratio_examples():
    e2 = extend_with_power(P2)
    assert I.chwc_ratio_check(e2, SQ, (0, 1, 2)).both_sides == (1, 1)
    assert I.chwc_ratio_check(e2, P2.components[1], (-1, 0, 3)).both_sides == (0, 0)
    ew = extend_with_power(EW)
    assert I.chwc_ratio_check(ew, Product((SQ, Exponential(1))), (0, 1, 3)).both_sides == (1, 1)
    with pytest.raises(ValueError):
        I.chwc_ratio_check(extend_with(P2, CU), SQ, (0, 1, 2))


def test_chwc_perm_sum_examples():
    e2 = extend_with_power(P2)
    assert I.chwc_perm_sum_check(e2, SQ, (0, (1, 2))).both_sides == (2, 2)
    f = Polynomial((Fraction(3), Fraction(-2, 3)))
    assert I.chwc_perm_sum_check(e2, f, (1, (1, 2))).both_sides == (0, 0)
    m = default_module(DOM)
    a = ModuleFunction(GenPolynomial.from_additive(AdditiveMap(m, (0, 1))))
    cert = I.chwc_perm_sum_check(e2, a, module_wright_configs(m, DOM, 2, 50, 1))
    assert cert.verdict is Verdict.SATISFIED_SAMPLED
    assert all(r.config["left"] == 0 and r.config["right"] == 0 for r in cert.records)


def test_chwc_perm_sum_classical_n2_combination():
    # for pi_2 the sum reduces to [f(x) - f(x+h1) - f(x+h2) + f(x+h1+h2)] / (h1 h2)
    e2 = extend_with_power(P2)
    g = Polynomial((1, 0, -2, 0, 1))
    for x, (h1, h2) in sample_wright_configs(DOM, 2, 100, 7):
        left = I.chwc_perm_sum_check(e2, g, (x, (h1, h2))).both_sides[0]
        classical = (g(x) - g(x + h1) - g(x + h2) + g(x + h1 + h2)) / (h1 * h2)
        assert left == classical


def test_chwc_float_mode():
    e3 = extend_with_power(make_polynomial_system(3, DOM))
    tuples = sample_simplex_tuples(DOM, 4, 200, 2, exact=False)
    cert = I.chwc_ratio_check(e3, Expression("exp(x)"), tuples)
    assert cert.mode is Mode.FLOAT and cert.verdict is Verdict.SATISFIED_SAMPLED


def test_fit_omega_affine_examples():
    fit = I.fit_omega_affine(P2, Polynomial((3, 2)), (0, 1))
    assert fit.coeffs == (3, 2) and fit.residual == 0
    fit = I.fit_omega_affine(EW, Exponential(1), (0, 1))
    assert fit.coeffs == (1, 0) and fit.residual == 0
    fit = I.fit_omega_affine(P2, SQ, (0, 1), grid=[2])
    assert fit.coeffs == (0, 1) and fit.residual == 2
    assert fit.report.verdict is Verdict.VIOLATED
    with pytest.raises(ValueError):
        I.fit_omega_affine(P2, SQ, (1, 0))


def test_fit_singular_nodes():
    from chebconvex.systems import ChebSystem
    dup = ChebSystem((Polynomial((1,)), Polynomial((1,))), DOM)
    with pytest.raises(ValueError, match="singular"):
        I.fit_omega_affine(dup, SQ, (0, 1))


def test_qp_examples():
    triples = sample_qp_triples(DOM, 300, 1)
    assert I.qp_equation_check(SQ, triples).verdict is Verdict.SATISFIED_SAMPLED
    assert I.qp_equation_check(Polynomial((2, -5)), triples).verdict is Verdict.SATISFIED_SAMPLED
    cert = I.qp_equation_check(CU, [(1, 0, 1)])
    assert cert.verdict is Verdict.VIOLATED and cert.both_sides == (1, 3)
    with pytest.raises(ValueError):
        I.qp_equation_check(SQ, [(1, 1, 1)])


def test_qp_zero_u_always_satisfied():
    triples = [t for t in sample_qp_triples(DOM, 200, 3, include_zero_u=True) if t[0] == 0]
    assert triples
    for rho in (CU, Polynomial((0, 0, 0, 0, 1))):
        assert I.qp_equation_check(rho, triples).verdict is Verdict.SATISFIED_SAMPLED
    fl = [(0.0, 0.25, 1.5), (0.0, -1.0, 2.0)]
    assert I.qp_equation_check(Expression("exp(x)"), fl).verdict is Verdict.SATISFIED_SAMPLED


def test_qp_central_difference_family():
    triples = sample_qp_triples(DOM, 200, 5)
    ok = I.qp_equation_check(SQ, triples, derivative=SQ.derivative())
    assert ok.verdict is Verdict.SATISFIED_SAMPLED
    bad = I.qp_equation_check(CU, [(Fraction(1, 2), 1, 2)], derivative=CU.derivative())
    assert bad.verdict is Verdict.VIOLATED


def test_grid_function_and_extension():
    g = I.GridFunction.sample(SQ, Interval(0, 4), Fraction(1, 4))
    h, report = I.extend_from_dense_grid(P2, g, refine=500, seed=1)
    assert report.verdict is Verdict.PASS_SAMPLED
    assert all(h.evaluate(x, True) == x * x for x in g.points)
    lin = I.GridFunction.sample(Polynomial((1, -2)), Interval(0, 4), Fraction(1, 2))
    h2, rep2 = I.extend_from_dense_grid(P2, lin, refine=200, seed=1)
    assert rep2.notes["min_phi"] >= -1e-12
    from chebconvex.certify import check_omega_convex
    grid_tuples = [(a, b, c) for a in lin.points for b in lin.points for c in lin.points if a < b < c]
    assert all(r.value.value == 0 for r in check_omega_convex(P2, h2, grid_tuples, affine=True).records)


def test_extension_of_additive_on_integer_grid():
    m = default_module(DOM)
    amap = AdditiveMap(m, (Fraction(3, 2), 1))
    xs = [Fraction(k) for k in range(0, 5)]
    grid = I.GridFunction.from_pairs(xs, [amap(m.embed_rational(x)) for x in xs])
    h, rep = I.extend_from_dense_grid(P2, grid, refine=200, seed=2)
    assert all(h.evaluate(x, True) == Fraction(3, 2) * x for x in xs)
    assert h.evaluate(Fraction(7, 3), True) == Fraction(7, 2)


def test_extension_requires_jensen():
    g = I.GridFunction.sample(-SQ, Interval(0, 2), Fraction(1, 2))
    with pytest.raises(ValueError, match="Jensen"):
        I.extend_from_dense_grid(P2, g)


def test_grid_rejects_gaps():
    with pytest.raises(ValueError, match="gap"):
        I.GridFunction.from_pairs([0, 1, 3], [0, 1, 9])


def test_weighted_extension():
    f = Product((SQ, Exponential(1)))
    g = I.GridFunction.sample(f, Interval(0, 2), Fraction(1, 4))
    h, rep = I.extend_from_dense_grid(EW, g, refine=300, seed=3)
    assert rep.verdict is Verdict.PASS_SAMPLED
    assert math.isclose(h.evaluate(1.0, False), math.e, rel_tol=1e-12)
