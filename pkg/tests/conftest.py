import numpy as np
import pytest

from matmoments import _pykernels, kernels
from matmoments.generate import random_circle_measure

try:
    from matmoments import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels, "cython": _ckernels}

# acceptance results collected for the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["python", "cython"])
def backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    impl = BACKENDS[request.param]
    if impl is None:
        pytest.skip("compiled kernels not built")
    monkeypatch.setattr(kernels, "_impl", impl)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_psd(rng, p, rank=None, complex_=True):
    rank = p if rank is None else rank
    X = rng.standard_normal((p, rank))
    if complex_:
        X = X + 1j * rng.standard_normal((p, rank))
    return X @ X.conj().T


def seeded_measure(seed, p, k, symmetric=False):
    return random_circle_measure(seed, p, k, symmetric=symmetric)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
