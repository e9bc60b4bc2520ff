"""Compare the compiled and numpy kernels.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``.  Prints one
row per kernel and problem size with the best time per call and the
speedup of the compiled kernels.  Outputs of the two backends are
checked against each other before timing.
"""
import argparse
import timeit

import numpy as np

from matmoments import _pykernels

try:
    from matmoments import _ckernels
except ImportError:
    _ckernels = None

SIZES = [(2, 8, 8), (3, 64, 16), (3, 512, 32)]  # (p, atoms, order)


def problems(p, natoms, order, rng):
    thetas = rng.uniform(-np.pi, np.pi, natoms)
    xs = rng.uniform(-1, 1, natoms)
    X = rng.standard_normal((natoms, p, p)) + 1j * rng.standard_normal((natoms, p, p))
    weights = X @ X.conj().transpose(0, 2, 1)
    coeffs = rng.standard_normal((order + 1, p, p)) + 0j
    zs = np.exp(1j * rng.uniform(-np.pi, np.pi, natoms))
    return {
        "circle_moments": (thetas, weights, order),
        "interval_moments": (xs, weights, order),
        "polyval": (coeffs, zs),
    }


def best(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; run `python setup.py build_ext --inplace`")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'p':>3}{'atoms':>7}{'order':>7}{'numpy [us]':>13}"
          f"{'cython [us]':>13}{'speedup':>9}")
    for p, natoms, order in SIZES:
        for name, fargs in problems(p, natoms, order, rng).items():
            py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
            np.testing.assert_allclose(cy(*fargs), py(*fargs), rtol=1e-12, atol=1e-12)
            t_py = best(py, fargs, args.repeat)
            t_cy = best(cy, fargs, args.repeat)
            print(f"{name:<18}{p:>3}{natoms:>7}{order:>7}{t_py * 1e6:>13.1f}"
                  f"{t_cy * 1e6:>13.1f}{t_py / t_cy:>9.2f}")


if __name__ == "__main__":
    main()
