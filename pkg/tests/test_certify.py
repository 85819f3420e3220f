from fractions import Fraction

import pytest

from chebconvex import certify as C
from chebconvex.det import Mode
from chebconvex.funcs import Expression, Exponential, Polynomial, Product
from chebconvex.identities import divided_difference
from chebconvex.report import Property, Verdict
from chebconvex.sampling import (equidistant_configs, sample_simplex_tuples, sample_step_configs,
                                 sample_wright_configs)
from chebconvex.systems import Interval, extend_with_power, make_polynomial_system, make_weighted_system

DOM = Interval(0, 4)
P2 = make_polynomial_system(2, DOM)
P3 = make_polynomial_system(3, DOM)
SQ = Polynomial((0, 0, 1))


def test_t_omega_convex_square():
    cfgs = sample_step_configs(DOM, 2, 300, 1)
    cert = C.check_t_omega_convex(P2, SQ, (1, 1), cfgs)
    assert cert.verdict is Verdict.PASS_SAMPLED and not cert.witnesses
    # divided-difference oracle: Phi = [x, x+h, x+2h; x^2] * V = 1 * 2h^3
    for rec in cert.records:
        assert rec.value.value == 2 * rec.config["h"] ** 3


def test_t_omega_convex_negative_square_refuted():
    cert = C.check_t_omega_convex(P2, -SQ, (1, 2), sample_step_configs(DOM, 3, 100, 1))
    assert cert.verdict is Verdict.REFUTED
    assert cert.witnesses and all(w.value.sign < 0 for w in cert.witnesses)
    assert cert.property is Property.T_OMEGA_CONVEX


def test_t_omega_convex_component_is_zero():
    cert = C.check_t_omega_convex(P2, P2.components[1], (Fraction(1, 3), 2), sample_step_configs(DOM, Fraction(7, 3), 50, 2))
    assert cert.verdict is Verdict.PASS_SAMPLED
    assert all(r.value.value == 0 for r in cert.records)


def test_t_omega_errors():
    with pytest.raises(ValueError):
        C.check_t_omega_convex(P2, SQ, (1, 1), [])
    with pytest.raises(ValueError):
        C.check_t_omega_convex(P2, SQ, (1, -1), [(0, 1)])
    with pytest.raises(ValueError, match="outside"):
        C.check_t_omega_convex(P2, SQ, (1, 1), [(3, 1)])


def test_jensen_exhaustive_grid():
    cfgs = equidistant_configs(DOM, 2, ["1/4", "1/2", "1"])
    cert = C.check_omega_jensen(P2, SQ, cfgs)
    assert cert.verdict is Verdict.PASS_SAMPLED
    assert {r.value.value for r in cert.records} == {2 * Fraction(h) ** 3 for h in ("1/4", "1/2", "1")}


def test_jensen_negative_cube_refuted():
    dom = Interval(0, 3)
    p3 = make_polynomial_system(3, dom)
    cfgs = sample_step_configs(dom, 3, 100, 4)
    cert = C.check_omega_jensen(p3, Polynomial((0, 0, 0, -1)), cfgs)
    assert cert.verdict is Verdict.REFUTED
    # third difference of -x^3 is -6h^3 and the Vandermonde factor is 2h^3 * h^3 ... sign check only
    assert all(r.value.value < 0 for r in cert.records)
    for w in cert.witnesses:
        assert w.value.value < 0


def test_omega_convex_examples():
    tuples = sample_simplex_tuples(DOM, 3, 300, 5)
    assert C.check_omega_convex(P2, Exponential(1), tuples).verdict is Verdict.PASS_SAMPLED
    t = sample_simplex_tuples(Interval(-1, 1), 3, 50, 5) + [(-1, 0, 1)]
    cert = C.check_omega_convex(make_polynomial_system(2, Interval(-1, 1)), SQ, t)
    assert cert.verdict is Verdict.PASS_SAMPLED
    assert cert.records[-1].value.value == 2
    aff = C.check_omega_convex(P2, Polynomial((Fraction(2, 3), -5)), tuples, affine=True)
    assert aff.verdict is Verdict.PASS_SAMPLED and aff.property is Property.OMEGA_AFFINE


def test_affine_check_catches_nonzero():
    tuples = sample_simplex_tuples(DOM, 3, 50, 5)
    cert = C.check_omega_convex(P2, SQ, tuples, affine=True)
    assert cert.verdict is Verdict.REFUTED
    assert all(w.value.sign != 0 for w in cert.witnesses)


def test_float_mode_near_zero_is_not_a_violation():
    tuples = sample_simplex_tuples(DOM, 3, 200, 6, exact=False)
    cert = C.check_omega_convex(P2, Polynomial((1.5, -0.25)), tuples, affine=True)
    assert cert.mode is Mode.FLOAT
    assert cert.verdict is Verdict.PASS_SAMPLED


def test_wright_examples():
    ext = extend_with_power(P2)
    cert = C.check_wright(ext, SQ, [(0, (1, 2))])
    assert cert.records[0].value.value == 2
    assert C.check_wright(ext, P2.components[0], sample_wright_configs(DOM, 2, 100, 1)).verdict \
        is Verdict.PASS_SAMPLED
    bad = C.check_wright(ext, -SQ, sample_wright_configs(DOM, 2, 40, 1))
    assert bad.verdict is Verdict.REFUTED


def test_wright_errors():
    ext = extend_with_power(P2)
    with pytest.raises(ValueError):
        C.check_wright(ext, SQ, [(0, (1, 0))])
    big = extend_with_power(make_polynomial_system(9, Interval(0, 100)))
    with pytest.raises(ValueError, match="n <= 8"):
        C.check_wright(big, SQ, [(0, (1,) * 9)])


def test_wright_float_mode():
    ext = extend_with_power(P3)
    cfgs = sample_wright_configs(DOM, 3, 100, 2, exact=False)
    cert = C.check_wright(ext, Expression("exp(x)"), cfgs)
    assert cert.mode is Mode.FLOAT and cert.verdict is Verdict.PASS_SAMPLED


def test_hierarchy_convex_to_wright_to_jensen():
    ext = extend_with_power(P3)
    f = Polynomial((1, -2, 0, Fraction(1, 3), Fraction(1, 20)))
    tuples = sample_simplex_tuples(DOM, 4, 200, 9)
    assert C.check_omega_convex(P3, f, tuples).verdict is Verdict.PASS_SAMPLED
    wcfg = C.wright_configs_from_tuples(tuples)
    assert C.check_wright(ext, f, wcfg).verdict is Verdict.PASS_SAMPLED
    jcfg = C.jensen_configs_from_wright(wcfg)
    assert C.check_omega_jensen(P3, f, jcfg).verdict is Verdict.PASS_SAMPLED


def test_equal_steps_wright_is_repeated_jensen_ratio():
    ext = extend_with_power(P2)
    f = Polynomial((0, 0, 0, 1))
    x, h = Fraction(1, 3), Fraction(1, 2)
    w = C.check_wright(ext, f, [(x, (h, h))]).records[0].value.value
    j = C.check_omega_jensen(P2, f, [(x, h)]).records[0].value.value
    den = C.phi_many(ext.components, [(x, x + h, x + 2 * h)])[0].value
    assert w == 2 * j / den


def test_t_restriction_to_rational_grid():
    steps = (Fraction(1, 2), Fraction(3, 4))
    f = Polynomial((0, 1, Fraction(1, 4), 0, Fraction(1, 2)))
    dom = Interval(-2, 2)
    p2 = make_polynomial_system(2, dom)
    cfgs = sample_step_configs(dom, sum(steps), 200, 3)
    assert C.check_t_omega_convex(p2, f, steps, cfgs).verdict is Verdict.PASS_SAMPLED
    jcfg = [c for c in C.step_configs_to_jensen(cfgs, steps)]
    assert C.check_omega_jensen(p2, f, jcfg).verdict is Verdict.PASS_SAMPLED


def test_scaling_and_affine_invariance():
    tuples = sample_simplex_tuples(DOM, 4, 100, 12)
    f = Polynomial((0, 0, 0, 1))
    base = C.check_omega_convex(P3, f, tuples)
    scaled = C.check_omega_convex(P3, Fraction(5, 2) * f, tuples)
    shifted = C.check_omega_convex(P3, f + Polynomial((3, -1, Fraction(2, 7))), tuples)
    assert base.verdict == scaled.verdict == shifted.verdict
    for a, b, c in zip(base.records, scaled.records, shifted.records):
        assert b.value.value == Fraction(5, 2) * a.value.value
        assert c.value.value == a.value.value


def test_weighted_convexity_matches_divided_differences():
    w = make_weighted_system(Exponential(1), [[1, 0], [1, 1]], DOM)
    for f_red in (Polynomial((0, 0, 1)), Polynomial((0, 0, -1)), Polynomial((0, 1, 0, -1))):
        f = Product((f_red, Exponential(1)))
        tuples = sample_simplex_tuples(DOM, 3, 60, 4)
        cert = C.check_omega_convex(w, f, tuples, minimize=False)
        for rec, t in zip(cert.records, tuples):
            assert rec.value.sign == (divided_difference(f_red, t) > 0) - (divided_difference(f_red, t) < 0)


def test_n1_degenerate_case():
    s = make_polynomial_system(1, DOM)
    tuples = sample_simplex_tuples(DOM, 2, 50, 1)
    assert C.check_omega_convex(s, Polynomial((0, 1)), tuples).verdict is Verdict.PASS_SAMPLED
    assert C.check_omega_convex(s, Polynomial((0, -1)), tuples).verdict is Verdict.REFUTED


def test_witness_shrinking_keeps_violation():
    cert = C.check_omega_jensen(P2, -SQ, sample_step_configs(DOM, 2, 30, 1))
    for w in cert.witnesses:
        assert w.value.sign < 0
        assert w.value.value == -2 * w.config["h"] ** 3
    assert any(w.note == "shrunk" for w in cert.witnesses)
    assert cert.witnesses == sorted(cert.witnesses, key=lambda w: w.sort_key())


def test_certificate_json_is_stable():
    cfgs = sample_step_configs(DOM, 2, 50, 1)
    a = C.check_omega_jensen(P2, -SQ, cfgs, seed=1).dumps()
    b = C.check_omega_jensen(P2, -SQ, cfgs, seed=1).dumps()
    assert a == b
    assert '"verdict": "REFUTED"' in a
