"""Backend selection for the inner loops.

The compiled extension is used when it imports cleanly; setting
``MATMOMENTS_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("MATMOMENTS_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass


def circle_moments(thetas, weights, m):
    return _impl.circle_moments(thetas, weights, m)


def interval_moments(xs, weights, n):
    return _impl.interval_moments(xs, weights, n)


def polyval(coeffs, zs):
    return _impl.polyval(coeffs, zs)
