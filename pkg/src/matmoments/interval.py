"""Canonical moments of matrix measures on [-1, 1] and the Geronimus relations.

Two independent routes meet here.  From a symmetric circle measure, the
Verblunsky coefficients ``A_n`` give ``Abar_n`` and from them the
three-term recurrence coefficients ``B_m, C_{m+1}`` in closed form.  From
the Szego image on [-1, 1], Hankel matrices give the extremal moments
``S_n^+-`` and the canonical moments ``U_n``, and block Gram-Schmidt gives
the recurrence coefficients directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateMeasure, DimensionMismatch, InsufficientData, InvalidInput, NotInterior, NotSymmetric
from .matcore import (
    DEFAULT_TOL,
    Definiteness,
    Tolerances,
    hermitian,
    inv_sqrt,
    psd_classify,
    solve,
)
from .measures import (
    CircleMeasure,
    IntervalMomentSequence,
    circle_moments,
    interval_moments,
    is_symmetric,
    szego_map,
)
from .moment_space import MomentBall, canonical_sequence, moment_ball
from .opuc import MatrixPolynomial

N_PROBES = 64


# -- block Hankel matrices -----------------------------------------------------

def _S(S: IntervalMomentSequence, k: int) -> np.ndarray:
    return S[k]


def hankel_under(S: IntervalMomentSequence, n: int) -> np.ndarray:
    """``H_{2m}`` from ``S_{a+b}``; ``H_{2m+1}`` from ``S_{a+b} + S_{a+b+1}``."""
    m, odd = divmod(n, 2)
    if odd:
        entry = lambda a, b: _S(S, a + b) + _S(S, a + b + 1)  # noqa: E731
    else:
        entry = lambda a, b: _S(S, a + b)  # noqa: E731
    return np.block([[entry(a, b) for b in range(m + 1)] for a in range(m + 1)])


def hankel_over(S: IntervalMomentSequence, n: int) -> np.ndarray:
    """``Hbar_{2m}`` from ``S_{a+b} - S_{a+b+2}``; ``Hbar_{2m+1}`` from ``S_{a+b} - S_{a+b+1}``.

    ``Hbar_0`` is empty (shape ``(0, 0)``).
    """
    m, odd = divmod(n, 2)
    if odd:
        size, entry = m + 1, lambda a, b: _S(S, a + b) - _S(S, a + b + 1)  # noqa: E731
    else:
        size, entry = m, lambda a, b: _S(S, a + b) - _S(S, a + b + 2)  # noqa: E731
    if size == 0:
        return np.zeros((0, 0), dtype=complex)
    return np.block([[entry(a, b) for b in range(size)] for a in range(size)])


def h_under(S: IntervalMomentSequence, n: int) -> np.ndarray:
    """Block column ``(S_m..S_{2m-1})`` or ``(S_m+S_{m+1}, .., S_{2m-1}+S_{2m})``."""
    m, odd = divmod(n, 2)
    if odd:
        blocks = [_S(S, m + a) + _S(S, m + a + 1) for a in range(m)]
    else:
        blocks = [_S(S, m + a) for a in range(m)]
    return np.vstack(blocks) if blocks else np.zeros((0, S.p), dtype=complex)


def h_over(S: IntervalMomentSequence, n: int) -> np.ndarray:
    """Block column ``(S_{m-1}-S_{m+1}, ..)`` (even n) or ``(S_m-S_{m+1}, ..)`` (odd n)."""
    m, odd = divmod(n, 2)
    if odd:
        blocks = [_S(S, m + a) - _S(S, m + a + 1) for a in range(m)]
    else:
        blocks = [_S(S, m - 1 + a) - _S(S, m + 1 + a) for a in range(m - 1)]
    return np.vstack(blocks) if blocks else np.zeros((0, S.p), dtype=complex)


@dataclass(frozen=True, eq=False)
class HankelSet:
    order: int
    H_under: np.ndarray
    H_over: np.ndarray
    h_under: np.ndarray
    h_over: np.ndarray


def hankel_build(S: IntervalMomentSequence, n: int) -> HankelSet:
    if n < 0:
        raise InvalidInput("order must be nonnegative")
    if n > S.order:
        raise InsufficientData(f"Hankel matrices of order {n} need S_0..S_{n}")
    return HankelSet(n, hankel_under(S, n), hankel_over(S, n), h_under(S, n), h_over(S, n))


def hankel_interior(S: IntervalMomentSequence, n: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``(S_0..S_n)`` is interior, i.e. both Hankel matrices are PD."""
    for H in (hankel_under(S, n), hankel_over(S, n)):
        if H.size and psd_classify(H, tol).kind is not Definiteness.POSITIVE_DEFINITE:
            return False
    return True


# -- extremal moments and canonical moments -------------------------------------

class SBounds(NamedTuple):
    order: int
    s_plus: np.ndarray
    s_minus: np.ndarray


def _quad(h: np.ndarray, H: np.ndarray, tol: Tolerances) -> np.ndarray:
    """``h^* H^{-1} h`` with an interior check on `H`."""
    if psd_classify(H, tol).kind is not Definiteness.POSITIVE_DEFINITE:
        raise NotInterior("Hankel matrix of the lower moments is not positive definite")
    return hermitian(h.conj().T @ solve(H, h, tol), tol)


def s_bounds(S: IntervalMomentSequence, n: int, tol: Tolerances = DEFAULT_TOL) -> SBounds:
    """Extremal values ``S_n^-`` and ``S_n^+`` determined by ``S_0..S_{n-1}``."""
    if n < 1:
        raise InvalidInput("bounds are defined for n >= 1")
    if n - 1 > S.order:
        raise InsufficientData(f"S_{n}^+- need S_0..S_{n - 1}")
    S0 = S[0]
    if n == 1:
        return SBounds(1, S0.copy(), -S0)
    m, odd = divmod(n, 2)
    if odd:
        plus = S[2 * m] - _quad(h_over(S, n), hankel_over(S, 2 * m - 1), tol)
        minus = _quad(h_under(S, n), hankel_under(S, 2 * m - 1), tol) - S[2 * m]
    else:
        plus = S0.copy() if m == 1 else S[2 * m - 2] - _quad(h_over(S, n), hankel_over(S, 2 * m - 2), tol)
        minus = _quad(h_under(S, n), hankel_under(S, 2 * m - 2), tol)
    return SBounds(n, hermitian(plus, tol), hermitian(minus, tol))


@dataclass(frozen=True, eq=False)
class IntervalCanonical:
    """Symmetric ``U_1..U_K`` and nonsymmetric ``Ubar_1..Ubar_K`` canonical moments.

    ``asymmetry[k]`` records ``max|U - U^*|`` of ``U_{k+1}`` as computed
    (before any symmetrization) so that violations are visible.
    """

    U: tuple
    U_bar: tuple
    n_mu: int | None
    trigger: str | None
    bounds: tuple = field(repr=False, default=())
    asymmetry: tuple = field(repr=False, default=())


def canonical_U(S: IntervalMomentSequence, tol: Tolerances = DEFAULT_TOL) -> IntervalCanonical:
    """Canonical moments ``U_n = D^{-1/2} (S_n - S_n^-) D^{-1/2}``, ``D = S_n^+ - S_n^-``."""
    if psd_classify(S[0], tol).kind is not Definiteness.POSITIVE_DEFINITE:
        raise DegenerateMeasure("S_0 is singular; no canonical moments are defined")
    U, Ubar, bounds, asym = [], [], [], []

    def result(n_mu, trigger):
        return IntervalCanonical(tuple(U), tuple(Ubar), n_mu, trigger, tuple(bounds), tuple(asym))

    for n in range(1, S.order + 1):
        try:
            b = s_bounds(S, n, tol)
        except NotInterior:
            return result(n - 1, "hankel")
        D = b.s_plus - b.s_minus
        if psd_classify(D, tol).kind is not Definiteness.POSITIVE_DEFINITE:
            return result(n - 1, "bounds")
        Di = inv_sqrt(D, tol)
        u = Di @ (S[n] - b.s_minus) @ Di
        asym.append(float(np.max(np.abs(u - u.conj().T))))
        U.append(u)
        Ubar.append(solve(D, S[n] - b.s_minus, tol))
        bounds.append(b)
        ev = np.linalg.eigvalsh(0.5 * (u + u.conj().T))
        if ev[0] <= tol.boundary_tol or ev[-1] >= 1.0 - tol.boundary_tol:
            return result(n, "canonical")
        if not hankel_interior(S, n, tol):
            return result(n, "hankel")
    return result(None, None)


# -- circle side -----------------------------------------------------------------

def abar_from_A(A: Sequence, balls: Sequence[MomentBall]) -> list:
    """``Abar_n = L_{n-1}^{-1/2} A_n L_{n-1}^{1/2}``; ``A[k]``/``balls[k]`` index ``n = k+1``."""
    if len(balls) < len(A):
        raise DimensionMismatch(f"{len(A)} canonical moments but only {len(balls)} balls")
    return [b.left_isqrt @ np.asarray(a, dtype=complex) @ b.left_sqrt for a, b in zip(A, balls)]


def circle_abar(seq, count: int, tol: Tolerances = DEFAULT_TOL):
    """``(A, Abar)`` for ``n = 1..count`` from circle moments."""
    cs = canonical_sequence(seq, tol)
    if len(cs.A) < count:
        raise NotInterior(f"only {len(cs.A)} canonical moments are defined, need {count}")
    A = list(cs.A[:count])
    balls = [moment_ball(seq, m, tol) for m in range(count)]
    return A, abar_from_A(A, balls)


def geronimus_forward(A: Sequence) -> list:
    """``U_n = (A_n + I) / 2``."""
    return [0.5 * (np.asarray(a, dtype=complex) + np.eye(len(a))) for a in A]


# -- three-term recurrence -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Recurrence:
    """``(1+t) P_{m+1} = P_{m+2} + P_{m+1} C_{m+1} + P_m B_m``; ``B[m]``, ``C[m]`` = ``C_{m+1}``."""

    B: tuple
    C: tuple


def recurrence_from_abar(abar: Sequence, K: int) -> Recurrence:
    """``B_0..B_K`` and ``C_1..C_{K+1}`` from ``Abar_1..Abar_{2K+3}``.

    ``abar[k]`` holds ``Abar_{k+1}``; ``Abar_0 = -I`` by convention.
    Products are taken in the written order since the factors need not
    commute.
    """
    if K < 0:
        raise InvalidInput("K must be nonnegative")
    if len(abar) < 2 * K + 3:
        raise InsufficientData(f"need Abar_1..Abar_{2 * K + 3}, have {len(abar)}")
    p = len(abar[0])
    I = np.eye(p)
    a = [-I] + [np.asarray(x, dtype=complex) for x in abar]
    B, C = [], []
    for m in range(K + 1):
        B.append(0.25 * (I - a[2 * m]) @ (I - a[2 * m + 1] @ a[2 * m + 1]) @ (I + a[2 * m + 2]))
        C.append(0.5 * (I - a[2 * m + 1]) @ (I + a[2 * m + 2])
                 + 0.5 * (I - a[2 * m + 2]) @ (I + a[2 * m + 3]))
    return Recurrence(tuple(B), tuple(C))


def _inner(P: MatrixPolynomial, Q: MatrixPolynomial, S: IntervalMomentSequence) -> np.ndarray:
    """``int P(x)^* dmu Q(x) = sum_{a,b} P_a^* S_{a+b} Q_b``."""
    out = np.zeros((S.p, S.p), dtype=complex)
    for a, Pa in enumerate(P.coeffs):
        for b, Qb in enumerate(Q.coeffs):
            out += Pa.conj().T @ S[a + b] @ Qb
    return out


class DirectRecurrence(NamedTuple):
    P: tuple
    rec: Recurrence
    residual: float


def recurrence_direct(S: IntervalMomentSequence, K: int, tol: Tolerances = DEFAULT_TOL) -> DirectRecurrence:
    """Monic right-orthogonal polynomials by block Gram-Schmidt, then ``B, C``.

    ``P_{m+1} = t P_m - sum_k P_k G_k^{-1} <P_k, t P_m>`` with
    ``G_k = <P_k, P_k>``.  Returns ``P_0..P_{K+2}``, ``B_0..B_K``,
    ``C_1..C_{K+1}`` and the largest residual of the recurrence at probe
    points in [-1, 1].
    """
    if K < 0:
        raise InvalidInput("K must be nonnegative")
    if S.order < 2 * K + 3:
        raise InsufficientData(f"need S_0..S_{2 * K + 3}, have up to S_{S.order}")
    p = S.p
    P = [MatrixPolynomial(np.eye(p)[None])]
    G = []

    def gram(k):
        g = hermitian(_inner(P[k], P[k], S), tol)
        if psd_classify(g, tol).kind is not Definiteness.POSITIVE_DEFINITE:
            raise NotInterior(f"<P_{k}, P_{k}> is not positive definite")
        return g

    for m in range(K + 2):
        G.append(gram(m))
        tp = P[m].shift()
        nxt = tp
        for k in range(m + 1):
            nxt = nxt - P[k].rmul(solve(G[k], _inner(P[k], tp, S), tol))
        P.append(MatrixPolynomial(nxt.coeffs[: m + 2]))
    I = np.eye(p)
    B, C = [], []
    for m in range(K + 1):
        tp1 = P[m + 1].shift()
        B.append(solve(G[m], _inner(P[m], tp1, S), tol))
        C.append(I + solve(G[m + 1], _inner(P[m + 1], tp1, S), tol))
    rec = Recurrence(tuple(B), tuple(C))
    return DirectRecurrence(tuple(P), rec, recurrence_residual(P, rec))


def recurrence_residual(P: Sequence[MatrixPolynomial], rec: Recurrence, xs=None) -> float:
    """Sup over probe points of ``(1+t) P_{m+1} - P_{m+2} - P_{m+1} C_{m+1} - P_m B_m``."""
    if xs is None:
        xs = np.cos(np.pi * (np.arange(N_PROBES) + 0.5) / N_PROBES)
    worst = 0.0
    for m in range(len(rec.B)):
        if m + 2 >= len(P):
            break
        r = (P[m + 1] + P[m + 1].shift() - P[m + 2]
             - P[m + 1].rmul(rec.C[m]) - P[m].rmul(rec.B[m]))
        worst = max(worst, float(np.max(np.abs(r.at(xs)))))
    return worst


# -- end-to-end checks -----------------------------------------------------------

@dataclass
class GeronimusReport:
    B_discrepancy: float
    C_discrepancy: float
    per_index: list
    n_checked: int
    from_abar: Recurrence = field(repr=False)
    direct: Recurrence = field(repr=False)
    direct_residual: float = 0.0

    def to_json(self) -> dict:
        return {
            "B_discrepancy": self.B_discrepancy,
            "C_discrepancy": self.C_discrepancy,
            "per_index": self.per_index,
            "n_checked": self.n_checked,
        }


def _require_symmetric(mu: CircleMeasure):
    if not is_symmetric(mu):
        raise NotSymmetric("this check needs a measure invariant under theta -> -theta")


def geronimus_check(mu: CircleMeasure, K: int, tol: Tolerances = DEFAULT_TOL) -> GeronimusReport:
    """Compare ``B_0..B_K``, ``C_1..C_{K+1}`` from both routes."""
    _require_symmetric(mu)
    n = 2 * K + 3
    seq = circle_moments(mu, n)
    _, abar = circle_abar(seq, n, tol)
    via_abar = recurrence_from_abar(abar, K)
    S = interval_moments(szego_map(mu), n)
    direct = recurrence_direct(S, K, tol)
    per_index, worst_b, worst_c = [], 0.0, 0.0
    for m in range(K + 1):
        db = float(np.max(np.abs(via_abar.B[m] - direct.rec.B[m])))
        dc = float(np.max(np.abs(via_abar.C[m] - direct.rec.C[m])))
        per_index.append({"m": m, "B": db, "C": dc})
        worst_b, worst_c = max(worst_b, db), max(worst_c, dc)
    return GeronimusReport(worst_b, worst_c, per_index, K + 1, via_abar, direct.rec,
                           direct.residual)


class LinkResiduals(NamedTuple):
    """Per-index residuals linking circle and interval canonical moments."""

    symmetric: list  # ||A_n - (2 U_n - I)||
    nonsymmetric: list  # ||Abar_n - (2 Ubar_n - I)||


def canonical_link_check(mu: CircleMeasure, count: int | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> LinkResiduals:
    """``A_n = 2 U_n - I`` and ``Abar_n = 2 Ubar_n - I`` for ``n = 1..count``.

    ``A`` comes from circle moments; ``U`` from the Szego image through
    the Hankel/extremal-moment pipeline, sharing no code with the circle
    side beyond moment summation.
    """
    _require_symmetric(mu)
    if count is None:
        count = mu.n_atoms
    seq = circle_moments(mu, count)
    cs = canonical_sequence(seq, tol)
    S = interval_moments(szego_map(mu), count)
    cu = canonical_U(S, tol)
    n = min(len(cs.A), len(cu.U))
    balls = [moment_ball(seq, m, tol) for m in range(n)]
    abar = abar_from_A(cs.A[:n], balls)
    I = np.eye(mu.p)
    sym = [float(np.max(np.abs(cs.A[k] - (2 * cu.U[k] - I)))) for k in range(n)]
    nonsym = [float(np.max(np.abs(abar[k] - (2 * cu.U_bar[k] - I)))) for k in range(n)]
    return LinkResiduals(sym, nonsym)


def vu_identity_residuals(S: IntervalMomentSequence, tol: Tolerances = DEFAULT_TOL) -> list:
    """Residuals of ``2 Vbar_{n-1} Ubar_n = (S_{n-1} - S_{n-1}^-)^{-1} (S_n - S_n^-)``.

    ``Vbar_n = I - Ubar_n`` with ``Ubar_0 = 0`` and ``S_0^- = 0``.
    """
    cu = canonical_U(S, tol)
    I = np.eye(S.p)
    out = []
    for k in range(len(cu.U_bar)):
        n = k + 1
        prev_minus = np.zeros_like(I) if n == 1 else cu.bounds[k - 1].s_minus
        vbar_prev = I if n == 1 else I - cu.U_bar[k - 1]
        lhs = 2 * vbar_prev @ cu.U_bar[k]
        rhs = solve(S[n - 1] - prev_minus, S[n] - cu.bounds[k].s_minus, tol)
        out.append(float(np.max(np.abs(lhs - rhs))))
    return out


def bounds_check(S: IntervalMomentSequence, n: int, tol: Tolerances = DEFAULT_TOL):
    """Smallest eigenvalues of ``S_n - S_n^-`` and ``S_n^+ - S_n``."""
    b = s_bounds(S, n, tol)
    lo = float(np.linalg.eigvalsh(hermitian(S[n] - b.s_minus, tol))[0])
    hi = float(np.linalg.eigvalsh(hermitian(b.s_plus - S[n], tol))[0])
    return lo, hi
