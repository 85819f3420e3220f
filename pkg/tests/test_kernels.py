import os
import subprocess
import sys

import numpy as np
import pytest

from chebconvex._kernels import _pykernels

ck = pytest.importorskip("chebconvex._kernels._ckernels")


def stack(rng, count, n):
    return rng.standard_normal((count, n, n))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_batch_parity(n):
    rng = np.random.default_rng(n)
    a = stack(rng, 200, n)
    d1, b1 = ck.batch_det_with_bound(a)
    d2, b2 = _pykernels.batch_det_with_bound(a)
    ref = np.linalg.det(a)
    np.testing.assert_allclose(d1, d2, rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(b1, b2, rtol=1e-9)
    assert np.all(np.abs(d1 - ref) <= b1 + 1e-15 * np.abs(ref))


def test_bound_covers_exact_value():
    from fractions import Fraction
    from chebconvex.det import det_exact
    rng = np.random.default_rng(3)
    for _ in range(100):
        ints = rng.integers(-9, 10, size=(5, 5))
        m = ints / 7.0
        exact = det_exact([[Fraction(int(v), 7) for v in row] for row in ints])
        for impl in (ck, _pykernels):
            d, b = impl.det_with_bound(m)
            assert abs(d - float(exact)) <= b


def test_singular_and_zero_matrices():
    for impl in (ck, _pykernels):
        d, b = impl.det_with_bound(np.zeros((3, 3)))
        assert d == 0.0
        d, b = impl.det_with_bound(np.ones((3, 3)))
        assert abs(d) <= b


def test_newton_table_parity():
    rng = np.random.default_rng(11)
    x = np.sort(rng.uniform(-3, 3, size=(50, 6)), axis=1)
    y = x ** 3 - 2 * x
    t1 = ck.newton_table(x, y)
    t2 = _pykernels.newton_table(x, y)
    np.testing.assert_allclose(t1, t2, rtol=1e-12)
    # the third divided difference of a monic cubic is 1, higher ones vanish
    np.testing.assert_allclose(t1[:, 3], 1.0, rtol=1e-9)
    np.testing.assert_allclose(t1[:, 4:], 0.0, atol=1e-8)


def test_pure_python_switch():
    env = dict(os.environ, CHEBCONVEX_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import chebconvex; print(chebconvex.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
