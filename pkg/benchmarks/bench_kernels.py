"""Compiled versus pure-Python float kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times single determinants, batched determinants and Newton tables on the same
random inputs for both backends and checks that they agree.
"""

import argparse
import timeit

import numpy as np

from chebconvex._kernels import _pykernels

try:
    from chebconvex._kernels import _ckernels
except ImportError:
    _ckernels = None


def _cases(rng):
    single = [rng.standard_normal((k, k)) for k in (3, 5, 8)]
    batch = rng.standard_normal((2000, 4, 4))
    xs = np.sort(rng.uniform(0.0, 4.0, 8))
    return single, batch, (xs, np.exp(xs))


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    single, batch, (xs, ys) = _cases(rng)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    results = {}
    for name, mod in backends:
        results[name] = {
            "det x1000": _time(lambda: [mod.det_with_bound(m) for m in single for _ in range(333)], args.repeat),
            "batch 2000x4x4": _time(lambda: mod.batch_det_with_bound(batch), args.repeat),
            "newton x1000": _time(lambda: [mod.newton_table(xs, ys) for _ in range(1000)], args.repeat),
        }
    if _ckernels is not None:
        for m in single:
            a, b = _pykernels.det_with_bound(m), _ckernels.det_with_bound(m)
            assert abs(a[0] - b[0]) <= 1e-12 * max(1.0, abs(a[0]))
        pa, _ = _pykernels.batch_det_with_bound(batch)
        ca, _ = _ckernels.batch_det_with_bound(batch)
        assert np.allclose(pa, ca, rtol=1e-12, atol=1e-14)
    print(f"{'kernel':<16}" + "".join(f"{n:>12}" for n, _ in backends) + ("     speedup" if _ckernels else ""))
    for key in results["python"]:
        row = f"{key:<16}" + "".join(f"{results[n][key] * 1e3:>10.2f}ms" for n, _ in backends)
        if _ckernels:
            row += f"{results['python'][key] / results['cython'][key]:>11.1f}x"
        print(row)
    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
