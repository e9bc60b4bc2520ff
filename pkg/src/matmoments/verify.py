"""Identity suite run by ``matmoments verify``.

Each check reduces one identity of the theory to a single nonnegative
residual and compares it with a fixed tolerance.  Library errors raised
while evaluating a check are reported as failures of that check.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import MomentError
from .interval import (
    bounds_check,
    canonical_U,
    canonical_link_check,
    circle_abar,
    geronimus_check,
    vu_identity_residuals,
)
from .matcore import DEFAULT_TOL, Tolerances, det, opnorm
from .measures import (
    CircleMeasure,
    IntervalMeasure,
    circle_moments,
    gamma_from_chebyshev,
    interval_moments,
    inverse_szego_map,
    is_symmetric,
    szego_map,
)
from .moment_space import (
    build_toeplitz,
    canonical_sequence,
    membership,
    moment_ball,
    moments_from_verblunsky,
    persymmetry_residual,
    quadratic_form,
)
from .opuc import (
    PSI_MAX_ORDER,
    inner_right,
    monic_system,
    monic_szego_residuals,
    psi_determinantal,
    szego_residuals,
    determinantal_check,
    verblunsky_from_recursion,
)

DEFAULT_ORDER = 8
QUADRATIC_SAMPLES = 200
#: cofactor sums lose accuracy quickly with size; checked for p <= 2 only
PSI_CHECK_DIM = 2


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float | None
    tolerance: float | None
    status: str

    @property
    def passed(self) -> bool | None:
        if self.status != "evaluated":
            return None if self.status.startswith("skipped") else False
        return self.residual <= self.tolerance

    def to_json(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance,
                "pass": self.passed, "status": self.status}


class Skip(Exception):
    """Raised by a check that does not apply to the measure at hand."""


class _Context:
    """Shared, lazily computed data; every attribute is read-only once set."""

    def __init__(self, mu: CircleMeasure, order: int, tol: Tolerances):
        self.mu, self.order, self.tol = mu, order, tol
        self.p = mu.p
        self.symmetric = is_symmetric(mu)
        self._lock = threading.RLock()

    def _locked(self, name, fn):
        with self._lock:
            if name not in self.__dict__:
                self.__dict__[name] = fn()
        return self.__dict__[name]

    @property
    def seq(self):
        return self._locked("_seq", lambda: circle_moments(self.mu, self.order))

    @property
    def canonical(self):
        return self._locked("_cs", lambda: canonical_sequence(self.seq, self.tol))

    @property
    def top(self) -> int:
        """Largest ``m`` with ``T_m`` positive definite within the computed moments."""
        cs = self.canonical
        return self.seq.order if cs.n_mu is None else cs.n_mu - 1

    @property
    def system(self):
        return self._locked("_sys", lambda: monic_system(self.seq, self.top, self.tol))

    @property
    def steps(self) -> int:
        """Number of recursion steps ``m -> m+1`` covered by the system."""
        return self.top

    def require_symmetric(self):
        if not self.symmetric:
            raise Skip("skipped: not symmetric")

    @property
    def link(self):
        return self._locked("_link", lambda: canonical_link_check(self.mu, self.order, self.tol))


def _max(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


# -- checks: general measures ----------------------------------------------------

def _toeplitz_admissible(c: _Context):
    worst = 0.0
    for m in range(c.order + 1):
        T = build_toeplitz(c.seq, m)
        ev = np.linalg.eigvalsh(T)
        worst = max(worst, max(0.0, -ev[0]) / max(abs(ev[-1]), 1e-300))
        membership(c.seq, m, c.tol)
    return worst, c.tol.psd_tol


def _quadratic_form(c: _Context):
    rng = np.random.default_rng(0)
    m = min(c.order, 5)
    worst = 0.0
    for _ in range(QUADRATIC_SAMPLES):
        B = rng.standard_normal((m + 1, c.p, c.p)) + 1j * rng.standard_normal((m + 1, c.p, c.p))
        worst = max(worst, -quadratic_form(c.seq, B, c.tol))
    return max(worst, 0.0), 1e-10


def _contraction(c: _Context):
    return _max(max(0.0, opnorm(a) - 1.0) for a in c.canonical.A), c.tol.boundary_tol


def _roundtrip(c: _Context):
    A = c.canonical.A
    rebuilt = moments_from_verblunsky(c.seq.gamma(0), A, c.tol)
    k = len(A)
    diff = np.max(np.abs(rebuilt.gammas[: k + 1] - c.seq.gammas[: k + 1]))
    return float(diff) / opnorm(c.seq.gamma(0)), 1e-9


def _psi_guard(c: _Context) -> int:
    if c.p > PSI_CHECK_DIM:
        raise Skip(f"skipped: size guard (p = {c.p} > {PSI_CHECK_DIM})")
    return min(PSI_MAX_ORDER, c.top)


def _determinantal(c: _Context):
    return _max(determinantal_check(c.seq, m).relative for m in range(_psi_guard(c) + 1)), 1e-8


def _determinantal_normalized(c: _Context):
    worst = 0.0
    for m in range(_psi_guard(c) + 1):
        d = det(build_toeplitz(c.seq, m)).real
        ball = moment_ball(c.seq, m, c.tol)
        right = psi_determinantal(c.seq, m, "R").rmul(ball.right / d)
        left = psi_determinantal(c.seq, m, "L").lmul(ball.left / d)
        worst = max(worst,
                    float(np.max(np.abs(right.coeffs - c.system.monic_R[m].coeffs))),
                    float(np.max(np.abs(left.coeffs - c.system.monic_L[m].coeffs))))
    return worst, 1e-8


def _a_equals_h(c: _Context):
    worst = 0.0
    for m in range(c.steps):
        hl, hr = verblunsky_from_recursion(c.system, m)
        a = c.canonical.A[m]
        worst = max(worst, float(np.max(np.abs(a - hl))), float(np.max(np.abs(a - hr))))
    return worst, 1e-9


def _szego(c: _Context):
    worst = 0.0
    for m in range(c.steps):
        r = szego_residuals(c.system, c.canonical.A, c.mu, m)
        worst = max(worst, r.res_L, r.res_R)
    return worst, c.tol.residual_tol


def _orthonormality(c: _Context):
    phi = c.system.orthonormal_R
    eye = np.eye(c.p)
    worst = 0.0
    for j in range(len(phi)):
        for k in range(j + 1):
            g = inner_right(phi[j], phi[k], c.mu)
            worst = max(worst, float(np.max(np.abs(g - (eye if j == k else 0)))))
    return worst, 1e-9


# -- checks: symmetric measures --------------------------------------------------

def _real_symmetric(c: _Context):
    c.require_symmetric()
    if np.any(np.abs(c.mu.weights.imag) > 0):
        raise Skip("skipped: complex weights")
    worst = 0.0
    for a in c.canonical.A:
        worst = max(worst, float(np.max(np.abs(a.imag))), float(np.max(np.abs(a - a.T))))
    return worst, 1e-10


def _radii_equal(c: _Context):
    c.require_symmetric()
    worst = 0.0
    for L, R in zip(c.system.L, c.system.R):
        worst = max(worst, opnorm(L - R) / opnorm(L))
    return worst, 1e-10


def _persymmetry(c: _Context):
    c.require_symmetric()
    return _max(persymmetry_residual(c.seq, m) for m in range(1, c.top + 2)), 1e-9


def _link(c: _Context):
    c.require_symmetric()
    return _max(c.link.symmetric), 1e-9


def _link_nonsymmetric(c: _Context):
    c.require_symmetric()
    return _max(c.link.nonsymmetric), 1e-9


def _interval_moments(c: _Context):
    return interval_moments(szego_map(c.mu), c.order)


def _vu_identity(c: _Context):
    c.require_symmetric()
    return _max(vu_identity_residuals(_interval_moments(c), c.tol)), 1e-9


def _moment_bounds(c: _Context):
    c.require_symmetric()
    S = _interval_moments(c)
    cu = canonical_U(S, c.tol)
    scale = opnorm(S[0])
    worst = 0.0
    for n in range(1, len(cu.U) + 1):
        lo, hi = bounds_check(S, n, c.tol)
        worst = max(worst, -lo / scale, -hi / scale)
    return max(worst, 0.0), c.tol.psd_tol


def _chebyshev(c: _Context):
    c.require_symmetric()
    S = _interval_moments(c)
    return _max(float(np.max(np.abs(gamma_from_chebyshev(S, j) - c.seq.gamma(j))))
                for j in range(c.order + 1)), 1e-10


def _geronimus_order(c: _Context) -> int:
    K = min(2, (len(c.canonical.A) - 3) // 2)
    if K < 0:
        raise Skip("skipped: fewer than three canonical moments")
    return K


def _geronimus(c: _Context):
    c.require_symmetric()
    rep = geronimus_check(c.mu, _geronimus_order(c), c.tol)
    return max(rep.B_discrepancy, rep.C_discrepancy), 1e-8


def _monic_szego(c: _Context):
    c.require_symmetric()
    _, abar = circle_abar(c.seq, c.steps, c.tol)
    worst = 0.0
    for m in range(c.steps):
        r = monic_szego_residuals(c.system, abar, m, c.mu)
        worst = max(worst, r.res_L, r.res_R)
    return worst, c.tol.residual_tol


CHECKS = (
    ("toeplitz_admissible", _toeplitz_admissible),
    ("quadratic_form_nonnegative", _quadratic_form),
    ("canonical_contraction", _contraction),
    ("verblunsky_roundtrip", _roundtrip),
    ("determinantal_orthogonality", _determinantal),
    ("determinantal_normalization", _determinantal_normalized),
    ("canonical_equals_reflection", _a_equals_h),
    ("szego_recursion", _szego),
    ("orthonormality", _orthonormality),
    ("canonical_real_symmetric", _real_symmetric),
    ("left_right_radii_equal", _radii_equal),
    ("toeplitz_inverse_persymmetry", _persymmetry),
    ("canonical_link", _link),
    ("canonical_link_nonsymmetric", _link_nonsymmetric),
    ("vu_identity", _vu_identity),
    ("moment_bounds", _moment_bounds),
    ("chebyshev_moments", _chebyshev),
    ("geronimus_recurrence", _geronimus),
    ("monic_szego_recursion", _monic_szego),
)


def _run(ctx: _Context, name: str, fn) -> CheckResult:
    try:
        residual, tolerance = fn(ctx)
    except Skip as exc:
        return CheckResult(name, None, None, str(exc))
    except MomentError as exc:
        return CheckResult(name, None, None, f"error: {type(exc).__name__}: {exc}")
    except np.linalg.LinAlgError as exc:
        return CheckResult(name, None, None, f"error: LinAlgError: {exc}")
    return CheckResult(name, float(residual), float(tolerance), "evaluated")


def run_checks(mu, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL,
               jobs: int = 1) -> list[CheckResult]:
    """Evaluate every check on `mu` using moments up to `order`.

    Interval measures are lifted to the circle with the inverse Szego map.
    Results are in a fixed order regardless of `jobs`.
    """
    if isinstance(mu, IntervalMeasure):
        mu = inverse_szego_map(mu)
    ctx = _Context(mu, order, tol)
    if jobs <= 1:
        return [_run(ctx, name, fn) for name, fn in CHECKS]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda item: _run(ctx, *item), CHECKS))
