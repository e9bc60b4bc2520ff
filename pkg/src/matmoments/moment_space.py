"""Geometry of the moment space of matrix measures on the unit circle.

The moment point ``(Gamma_0, ..., Gamma_m)`` is admissible iff the block
Toeplitz matrix ``T_m`` is positive semidefinite, and interior iff it is
positive definite.  For interior points the admissible next moments fill
the matrix ball ``{M + L^{1/2} U R^{1/2} : U U* <= I}`` and the canonical
moment is the position of the actual next moment in that ball.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateMeasure,
    ImaginaryResidue,
    InsufficientData,
    InvalidInput,
    NotContraction,
    NotInterior,
)
from .matcore import (
    DEFAULT_TOL,
    Definiteness,
    Tolerances,
    contraction_check,
    hermitian,
    inv_sqrt,
    principal_sqrt,
    psd_classify,
    solve,
)
from .measures import MomentSequence


class Membership(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


_FROM_DEFINITENESS = {
    Definiteness.POSITIVE_DEFINITE: Membership.INTERIOR,
    Definiteness.PSD_SINGULAR: Membership.BOUNDARY,
    Definiteness.INDEFINITE: Membership.OUTSIDE,
}


class MembershipVerdict(NamedTuple):
    kind: Membership
    min_eigenvalue: float
    order: int


class BallMembership(NamedTuple):
    inside: bool
    U: np.ndarray
    sigma_max: float


@dataclass(frozen=True, eq=False)
class MomentBall:
    """Center and left/right radii of the ball of admissible ``Gamma_{m+1}``."""

    order: int
    center: np.ndarray
    left: np.ndarray
    right: np.ndarray
    left_sqrt: np.ndarray
    right_sqrt: np.ndarray
    left_isqrt: np.ndarray
    right_isqrt: np.ndarray


@dataclass(frozen=True, eq=False)
class CanonicalSequence:
    """Canonical moments ``A_1..A_K``.

    ``n_mu`` is the index at which the moment point reaches the boundary,
    or ``None`` when every available moment is interior.  ``trigger``
    names the criterion that detected the boundary (``"contraction"``
    or ``"toeplitz"``).
    """

    p: int
    A: tuple
    n_mu: int | None
    trigger: str | None = None

    def __len__(self):
        return len(self.A)


def build_toeplitz(seq: MomentSequence, m: int) -> np.ndarray:
    """Block Toeplitz matrix ``T_m`` with block ``(i, j) = Gamma_{j-i}``."""
    if m < 0:
        raise InvalidInput("Toeplitz order must be nonnegative")
    if m > seq.order:
        raise InsufficientData(f"T_{m} needs Gamma_0..Gamma_{m}, have up to {seq.order}")
    p = seq.p
    T = np.empty((p * (m + 1), p * (m + 1)), dtype=complex)
    for i in range(m + 1):
        for j in range(m + 1):
            T[i * p:(i + 1) * p, j * p:(j + 1) * p] = seq.gamma(j - i)
    return 0.5 * (T + T.conj().T)


def membership(seq: MomentSequence, m: int, tol: Tolerances = DEFAULT_TOL) -> MembershipVerdict:
    cls = psd_classify(build_toeplitz(seq, m), tol)
    return MembershipVerdict(_FROM_DEFINITENESS[cls.kind], cls.min_eigenvalue, m)


def quadratic_form(seq: MomentSequence, B: Sequence, tol: Tolerances = DEFAULT_TOL) -> float:
    """``sum_{i,j} trace(B_i B_j^* Gamma_{i-j})``; nonnegative on moment points."""
    B = [np.asarray(b, dtype=complex) for b in B]
    m = len(B) - 1
    if m < 0:
        raise InvalidInput("need at least one matrix B_0")
    if any(b.shape != (seq.p, seq.p) for b in B):
        raise InvalidInput("every B_i must be p x p")
    total = 0j
    for i in range(m + 1):
        for j in range(m + 1):
            total += np.trace(B[i] @ B[j].conj().T @ seq.gamma(i - j))
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise ImaginaryResidue(f"quadratic form has imaginary part {total.imag:.3e}")
    return float(total.real)


def _edge_rows(seq: MomentSequence, m: int):
    """``(Gamma_1 ... Gamma_m)`` and ``(Gamma_-m ... Gamma_-1)`` as p x mp blocks."""
    r = np.hstack([seq.gamma(k) for k in range(1, m + 1)])
    s = np.hstack([seq.gamma(k) for k in range(-m, 0)])
    return r, s


def _ball_from(center, left, right, m, tol) -> MomentBall:
    return MomentBall(
        order=m,
        center=center,
        left=left,
        right=right,
        left_sqrt=principal_sqrt(left, tol),
        right_sqrt=principal_sqrt(right, tol),
        left_isqrt=inv_sqrt(left, tol),
        right_isqrt=inv_sqrt(right, tol),
    )


def moment_ball(seq: MomentSequence, m: int, tol: Tolerances = DEFAULT_TOL) -> MomentBall:
    """Ball of admissible ``Gamma_{m+1}`` given an interior ``Gamma_0..Gamma_m``.

    For ``m = 0`` the products are empty: center 0, radii ``Gamma_0``.
    """
    verdict = membership(seq, m, tol)
    if verdict.kind is not Membership.INTERIOR:
        raise NotInterior(f"moments of order {m} are {verdict.kind.value} "
                          f"(min eigenvalue {verdict.min_eigenvalue:.3e})")
    g0 = seq.gamma(0)
    if m == 0:
        return _ball_from(np.zeros_like(g0), g0, g0, 0, tol)
    r, s = _edge_rows(seq, m)
    T = build_toeplitz(seq, m - 1)
    X = solve(T, np.hstack([r.conj().T, s.conj().T]), tol)
    p = seq.p
    Xr, Xs = X[:, :p], X[:, p:]
    center = r @ Xs
    left = hermitian(g0 - r @ Xr, tol)
    right = hermitian(g0 - s @ Xs, tol)
    for name, radius in (("L", left), ("R", right)):
        if psd_classify(radius, tol).kind is not Definiteness.POSITIVE_DEFINITE:
            raise NotInterior(f"{name}_{m} is not positive definite")
    return _ball_from(center, left, right, m, tol)


def ball_membership(W, ball: MomentBall, tol: Tolerances = DEFAULT_TOL) -> BallMembership:
    U = ball.left_isqrt @ (np.asarray(W, dtype=complex) - ball.center) @ ball.right_isqrt
    inside, sigma = contraction_check(U, tol)
    return BallMembership(inside, U, sigma)


def complete_moment(ball: MomentBall, U, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The moment ``M + L^{1/2} U R^{1/2}`` at position `U` in the ball."""
    U = np.asarray(U, dtype=complex)
    ok, sigma = contraction_check(U, tol)
    if not ok:
        raise NotContraction(f"U has largest singular value {sigma:.6g} > 1")
    return ball.center + ball.left_sqrt @ U @ ball.right_sqrt


def canonical_moment(seq: MomentSequence, m: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``A_{m+1} = L_m^{-1/2} (Gamma_{m+1} - M_m) R_m^{-1/2}``."""
    if m + 1 > seq.order:
        raise InsufficientData(f"A_{m + 1} needs Gamma_{m + 1}")
    ball = moment_ball(seq, m, tol)
    return ball_membership(seq.gamma(m + 1), ball, tol).U


def canonical_sequence(seq: MomentSequence, tol: Tolerances = DEFAULT_TOL) -> CanonicalSequence:
    """All computable canonical moments, stopping at the first boundary point.

    The last entry is the boundary contraction ``A_{N(mu)}`` when the
    boundary is reached within the available moments.
    """
    if psd_classify(seq.gamma(0), tol).kind is not Definiteness.POSITIVE_DEFINITE:
        raise DegenerateMeasure("Gamma_0 is singular; no canonical moments are defined")
    A = []
    for m in range(seq.order):
        verdict = membership(seq, m, tol)
        if verdict.kind is not Membership.INTERIOR:
            return CanonicalSequence(seq.p, tuple(A), m, "toeplitz")
        a = canonical_moment(seq, m, tol)
        A.append(a)
        if contraction_check(a, tol).sigma_max >= 1.0 - tol.boundary_tol:
            return CanonicalSequence(seq.p, tuple(A), m + 1, "contraction")
    if membership(seq, seq.order, tol).kind is not Membership.INTERIOR:
        return CanonicalSequence(seq.p, tuple(A), seq.order, "toeplitz")
    return CanonicalSequence(seq.p, tuple(A), None, None)


def moments_from_verblunsky(gamma0, A: Sequence, tol: Tolerances = DEFAULT_TOL) -> MomentSequence:
    """Rebuild ``Gamma_0..Gamma_K`` from ``Gamma_0`` and canonical moments.

    Every ``A_k`` must be a contraction and all but the last strict.
    """
    g0 = hermitian(gamma0, tol)
    if psd_classify(g0, tol).kind is not Definiteness.POSITIVE_DEFINITE:
        raise DegenerateMeasure("Gamma_0 must be positive definite")
    seq = MomentSequence.from_gammas(g0[None], tol)
    A = [np.asarray(a, dtype=complex) for a in A]
    for k, a in enumerate(A):
        if a.shape != g0.shape:
            raise InvalidInput(f"A_{k + 1} has shape {a.shape}, expected {g0.shape}")
        sigma = contraction_check(a, tol).sigma_max
        if k < len(A) - 1 and sigma >= 1.0 - tol.boundary_tol:
            raise NotContraction(f"A_{k + 1} is a boundary contraction but is not last")
        ball = moment_ball(seq, k, tol)
        seq = seq.extend(complete_moment(ball, a, tol))
    return seq


def toeplitz_inverse(seq: MomentSequence, m: int) -> np.ndarray:
    """Explicit inverse of ``T_m``; used only by verification checks."""
    return np.linalg.inv(build_toeplitz(seq, m))


def persymmetry_residual(seq: MomentSequence, m: int) -> float:
    """Largest ``||[T^-1]_(k,l) - [T^-1]_(m+1-k, m+1-l)||`` for ``T = T_{m-1}``.

    Vanishes for symmetric measures.
    """
    p = seq.p
    Tinv = toeplitz_inverse(seq, m - 1)
    J = np.kron(np.eye(m)[::-1], np.eye(p))
    return float(np.max(np.abs(Tinv - J @ Tinv @ J)))
