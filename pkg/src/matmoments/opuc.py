"""Matrix orthogonal polynomials on the unit circle.

Production polynomials come from block linear solves against ``T_{m-1}``.
The cofactor (determinantal) construction is kept as an independent
cross-check and is only available for small ``p`` and ``m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DegreeExceeds, DimensionMismatch, InvalidInput, SizeGuard
from .matcore import DEFAULT_TOL, Tolerances, det, solve
from .measures import CircleMeasure, MomentSequence
from .moment_space import build_toeplitz, moment_ball

#: the determinantal construction is refused above these sizes
PSI_MAX_ORDER = 3
PSI_MAX_DIM = 3

N_PROBES = 64


class MatrixPolynomial:
    """``P(z) = sum_k C_k z^k`` with p x p complex coefficients.

    Coefficients are stored lowest degree first in an array of shape
    ``(n + 1, p, p)``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[0] == 0 or c.shape[1] != c.shape[2]:
            raise InvalidInput(f"coefficients must have shape (n+1, p, p), got {c.shape}")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, k: int, p: int) -> "MatrixPolynomial":
        c = np.zeros((k + 1, p, p), dtype=complex)
        c[k] = np.eye(p)
        return cls(c)

    @property
    def p(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(np.any(self.coeffs != 0, axis=(1, 2)))
        return int(nz[-1]) if nz.size else 0

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[self.degree]

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def at(self, zs) -> np.ndarray:
        """Values at many points, shape ``(len(zs), p, p)``."""
        return kernels.polyval(self.coeffs, np.atleast_1d(zs))

    def padded(self, n: int) -> np.ndarray:
        if n + 1 <= self.coeffs.shape[0]:
            return self.coeffs
        pad = np.zeros((n + 1 - self.coeffs.shape[0], self.p, self.p), dtype=complex)
        return np.concatenate([self.coeffs, pad])

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        n = max(len(self.coeffs), len(other.coeffs)) - 1
        return MatrixPolynomial(self.padded(n) + other.padded(n))

    def __neg__(self) -> "MatrixPolynomial":
        return MatrixPolynomial(-self.coeffs)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self + (-other)

    def lmul(self, A) -> "MatrixPolynomial":
        """``A P(z)``."""
        return MatrixPolynomial(np.einsum("ab,kbc->kac", np.asarray(A, dtype=complex), self.coeffs))

    def rmul(self, A) -> "MatrixPolynomial":
        """``P(z) A``."""
        return MatrixPolynomial(self.coeffs @ np.asarray(A, dtype=complex))

    def shift(self, k: int = 1) -> "MatrixPolynomial":
        """``z^k P(z)``."""
        pad = np.zeros((k, self.p, self.p), dtype=complex)
        return MatrixPolynomial(np.concatenate([pad, self.coeffs]))

    def __repr__(self):
        return f"MatrixPolynomial(degree={self.degree}, p={self.p})"


def evaluate(P: MatrixPolynomial, z) -> np.ndarray:
    """Horner evaluation at a single point."""
    out = P.coeffs[-1].copy()
    for c in P.coeffs[-2::-1]:
        out = out * z + c
    return out


def reverse(P: MatrixPolynomial, n: int) -> MatrixPolynomial:
    """Reversed polynomial ``z^n P(1 / conj(z))^*``."""
    if P.degree > n:
        raise DegreeExceeds(f"polynomial of degree {P.degree} reversed at order {n}")
    c = P.padded(n)[: n + 1]
    return MatrixPolynomial(np.conj(np.swapaxes(c[::-1], 1, 2)))


def _check_dims(P, Q, p):
    if P.p != Q.p or P.p != p:
        raise DimensionMismatch(f"dimensions {P.p}, {Q.p} and measure dimension {p} differ")


def inner_right(P: MatrixPolynomial, Q: MatrixPolynomial, mu: CircleMeasure) -> np.ndarray:
    """``<P, Q>_R = sum_j P(z_j)^* W_j Q(z_j)``."""
    _check_dims(P, Q, mu.p)
    z = mu.points
    Pv, Qv = P.at(z), Q.at(z)
    return np.einsum("jba,jbc,jcd->ad", Pv.conj(), mu.weights, Qv)


def inner_left(P: MatrixPolynomial, Q: MatrixPolynomial, mu: CircleMeasure) -> np.ndarray:
    """``<P, Q>_L = sum_j P(z_j) W_j Q(z_j)^*``."""
    _check_dims(P, Q, mu.p)
    z = mu.points
    Pv, Qv = P.at(z), Q.at(z)
    return np.einsum("jab,jbc,jdc->ad", Pv, mu.weights, Qv.conj())


def inner_right_moments(P: MatrixPolynomial, Q: MatrixPolynomial, seq: MomentSequence) -> np.ndarray:
    """Right inner product from moments: ``sum_{a,b} P_a^* Gamma_{b-a} Q_b``."""
    _check_dims(P, Q, seq.p)
    out = np.zeros((seq.p, seq.p), dtype=complex)
    for a, Pa in enumerate(P.coeffs):
        for b, Qb in enumerate(Q.coeffs):
            out += Pa.conj().T @ seq.gamma(b - a) @ Qb
    return out


def inner_left_moments(P: MatrixPolynomial, Q: MatrixPolynomial, seq: MomentSequence) -> np.ndarray:
    """Left inner product from moments: ``sum_{a,b} P_a Gamma_{a-b} Q_b^*``."""
    _check_dims(P, Q, seq.p)
    out = np.zeros((seq.p, seq.p), dtype=complex)
    for a, Pa in enumerate(P.coeffs):
        for b, Qb in enumerate(Q.coeffs):
            out += Pa @ seq.gamma(a - b) @ Qb.conj().T
    return out


# -- determinantal construction ------------------------------------------------

def _cofactor(T: np.ndarray, r: int, c: int) -> complex:
    minor = np.delete(np.delete(T, r, axis=0), c, axis=1)
    return (-1) ** (r + c) * det(minor)


def psi_determinantal(seq: MomentSequence, m: int, side: str = "R") -> MatrixPolynomial:
    """Unnormalized orthogonal polynomial built from cofactors of ``T_m``.

    Right side: entry ``(i, j)`` is ``det T_m`` with row ``m p + j`` replaced
    by ``(e_i^T, e_i^T z, ..., e_i^T z^m)``.  Left side: column ``i`` is
    replaced by the block column ``(e_j z^m, e_j z^(m-1), ..., e_j)``.
    Expanding along the replaced row or column gives every coefficient as
    a single cofactor.
    """
    if side not in ("R", "L"):
        raise InvalidInput("side must be 'R' or 'L'")
    p = seq.p
    if m > PSI_MAX_ORDER or p > PSI_MAX_DIM:
        raise SizeGuard(f"determinantal construction limited to m <= {PSI_MAX_ORDER}, "
                        f"p <= {PSI_MAX_DIM}")
    if m < 0:
        raise InvalidInput("order must be nonnegative")
    T = build_toeplitz(seq, m)
    c = np.zeros((m + 1, p, p), dtype=complex)
    for k in range(m + 1):
        for i in range(p):
            for j in range(p):
                if side == "R":
                    c[k, i, j] = _cofactor(T, m * p + j, k * p + i)
                else:
                    c[k, i, j] = _cofactor(T, (m - k) * p + j, i)
    return MatrixPolynomial(c)


class DeterminantalResiduals(NamedTuple):
    residual_low: float
    residual_top: float
    left_low: float
    left_top: float
    tilde: float
    scale: float

    @property
    def relative(self) -> float:
        worst = max(self.residual_low, self.residual_top, self.left_low, self.left_top, self.tilde)
        return worst / self.scale


def determinantal_check(seq: MomentSequence, m: int) -> DeterminantalResiduals:
    """Orthogonality residuals of the determinantal polynomials.

    ``<z^k I, Psi^R>_R`` must vanish for ``k < m`` and equal ``|T_m| I`` at
    ``k = m`` (mirrored on the left); ``<I, reverse(Psi^L)>_R`` must equal
    ``|T_m| I``.  ``scale = ||T_m||^(p(m+1))`` bounds the size of the
    cofactor sums and makes the residuals comparable across measures.
    """
    p = seq.p
    T = build_toeplitz(seq, m)
    detT = det(T).real
    psi_r = psi_determinantal(seq, m, "R")
    psi_l = psi_determinantal(seq, m, "L")
    eye = np.eye(p)
    low = top = llow = ltop = 0.0
    for k in range(m + 1):
        zk = MatrixPolynomial.monomial(k, p)
        vr = inner_right_moments(zk, psi_r, seq)
        vl = inner_left_moments(psi_l, zk, seq)
        if k < m:
            low = max(low, float(np.max(np.abs(vr))))
            llow = max(llow, float(np.max(np.abs(vl))))
        else:
            top = float(np.max(np.abs(vr - detT * eye)))
            ltop = float(np.max(np.abs(vl - detT * eye)))
    one = MatrixPolynomial.monomial(0, p)
    tilde = float(np.max(np.abs(inner_right_moments(one, reverse(psi_l, m), seq) - detT * eye)))
    scale = float(np.linalg.norm(T, 2)) ** (p * (m + 1))
    return DeterminantalResiduals(low, top, llow, ltop, tilde, scale)


# -- production construction ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrthoSystem:
    """Monic and orthonormal right/left polynomials of degree 0..K."""

    order: int
    monic_R: tuple
    monic_L: tuple
    orthonormal_R: tuple
    orthonormal_L: tuple
    kappa_R: tuple
    kappa_L: tuple
    rho_R: tuple
    rho_L: tuple
    L: tuple
    R: tuple


def _monic_right(seq: MomentSequence, m: int, tol: Tolerances) -> MatrixPolynomial:
    p = seq.p
    c = np.zeros((m + 1, p, p), dtype=complex)
    c[m] = np.eye(p)
    if m:
        # <z^k I, Phi> = 0 for k < m  <=>  T_{m-1} (C_0; ...; C_{m-1}) = -(Gamma_m; ...; Gamma_1)
        rhs = -np.vstack([seq.gamma(m - k) for k in range(m)])
        X = solve(build_toeplitz(seq, m - 1), rhs, tol)
        c[:m] = X.reshape(m, p, p)
    return MatrixPolynomial(c)


def _monic_left(seq: MomentSequence, m: int, tol: Tolerances) -> MatrixPolynomial:
    p = seq.p
    c = np.zeros((m + 1, p, p), dtype=complex)
    c[m] = np.eye(p)
    if m:
        # <Phi, z^k I>_L = 0 for k < m  <=>  sum_l D_l Gamma_{l-k} = -Gamma_{m-k};
        # the coefficient matrix with block (l, k) = Gamma_{l-k} is Hermitian.
        G = np.block([[seq.gamma(l - k) for k in range(m)] for l in range(m)])
        rhs = -np.hstack([seq.gamma(m - k) for k in range(m)])
        Dh = solve(G, rhs.conj().T, tol)
        c[:m] = np.conj(np.swapaxes(Dh.reshape(m, p, p), 1, 2))
    return MatrixPolynomial(c)


def monic_system(seq: MomentSequence, K: int, tol: Tolerances = DEFAULT_TOL) -> OrthoSystem:
    """Monic and orthonormal systems up to degree `K`.

    Requires ``T_K`` positive definite.  Orthonormal polynomials use the
    principal roots: ``phi^R = Phi^R R^{-1/2}``, ``phi^L = L^{-1/2} Phi^L``.
    """
    if K < 0:
        raise InvalidInput("order must be nonnegative")
    balls = [moment_ball(seq, m, tol) for m in range(K + 1)]
    mon_r = tuple(_monic_right(seq, m, tol) for m in range(K + 1))
    mon_l = tuple(_monic_left(seq, m, tol) for m in range(K + 1))
    kap_r = tuple(b.right_isqrt for b in balls)
    kap_l = tuple(b.left_isqrt for b in balls)
    on_r = tuple(P.rmul(k) for P, k in zip(mon_r, kap_r))
    on_l = tuple(P.lmul(k) for P, k in zip(mon_l, kap_l))
    rho_r = tuple(balls[m + 1].right_sqrt @ kap_r[m] for m in range(K))
    rho_l = tuple(kap_l[m] @ balls[m + 1].left_sqrt for m in range(K))
    return OrthoSystem(K, mon_r, mon_l, on_r, on_l, kap_r, kap_l, rho_r, rho_l,
                       tuple(b.left for b in balls), tuple(b.right for b in balls))


def verblunsky_extract(seq: MomentSequence, m: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``H_{m+1} = L_m^{-1/2} <I, z Phi_m^R>_R R_m^{-1/2}`` with monic ``Phi``."""
    ball = moment_ball(seq, m, tol)
    phi = _monic_right(seq, m, tol)
    one = MatrixPolynomial.monomial(0, seq.p)
    return ball.left_isqrt @ inner_right_moments(one, phi.shift(), seq) @ ball.right_isqrt


def verblunsky_from_recursion(sys: OrthoSystem, m: int):
    """Coefficients read off the two Szego recursions at ``z = 0``.

    Returns ``(H_left, H_right)`` from the left and right recursion.  The
    reversed orthonormal polynomials have constant terms ``kappa^*``, so
    the recursions fix ``H`` uniquely.
    """
    if m + 1 > sys.order:
        raise InvalidInput(f"system of order {sys.order} cannot give H_{m + 1}")
    lhs_l = -(sys.rho_L[m] @ sys.orthonormal_L[m + 1].coeffs[0])
    lhs_r = -(sys.orthonormal_R[m + 1].coeffs[0] @ sys.rho_R[m])
    h_left = lhs_l @ np.linalg.inv(sys.kappa_R[m].conj().T)
    h_right = np.linalg.inv(sys.kappa_L[m].conj().T) @ lhs_r
    return h_left, h_right


def probe_points(mu: CircleMeasure | None = None, n: int = N_PROBES) -> np.ndarray:
    pts = np.exp(2j * np.pi * np.arange(n) / n)
    if mu is not None:
        pts = np.concatenate([mu.points, pts])
    return pts


class RecursionResiduals(NamedTuple):
    res_L: float
    res_R: float


def _sup(poly: MatrixPolynomial, pts) -> float:
    return float(np.max(np.abs(poly.at(pts))))


def szego_residuals(sys: OrthoSystem, H: Sequence, mu: CircleMeasure | None, m: int) -> RecursionResiduals:
    """Residuals of the orthonormal Szego recursions at atoms and probe points.

    ``z phi_m^L - rho_m^L phi_{m+1}^L - H_{m+1} reverse(phi_m^R)`` and
    ``z phi_m^R - phi_{m+1}^R rho_m^R - reverse(phi_m^L) H_{m+1}``;
    ``H[k]`` holds ``H_{k+1}``.
    """
    if m + 1 > sys.order:
        raise InvalidInput(f"system of order {sys.order} cannot check step {m}")
    h = np.asarray(H[m], dtype=complex)
    pts = probe_points(mu)
    left = (sys.orthonormal_L[m].shift()
            - sys.orthonormal_L[m + 1].lmul(sys.rho_L[m])
            - reverse(sys.orthonormal_R[m], m).lmul(h))
    right = (sys.orthonormal_R[m].shift()
             - sys.orthonormal_R[m + 1].rmul(sys.rho_R[m])
             - reverse(sys.orthonormal_L[m], m).rmul(h))
    return RecursionResiduals(_sup(left, pts), _sup(right, pts))


def monic_szego_residuals(sys: OrthoSystem, abar: Sequence, m: int,
                          mu: CircleMeasure | None = None) -> RecursionResiduals:
    """Residuals of the monic recursions of a symmetric measure.

    ``z Phi_m^L - Phi_{m+1}^L - Abar_{m+1}^* reverse(Phi_m^R)`` and
    ``z Phi_m^R - Phi_{m+1}^R - reverse(Phi_m^L) Abar_{m+1}``;
    ``abar[k]`` holds ``Abar_{k+1}``.
    """
    if m + 1 > sys.order:
        raise InvalidInput(f"system of order {sys.order} cannot check step {m}")
    a = np.asarray(abar[m], dtype=complex)
    pts = probe_points(mu)
    left = (sys.monic_L[m].shift() - sys.monic_L[m + 1]
            - reverse(sys.monic_R[m], m).lmul(a.conj().T))
    right = (sys.monic_R[m].shift() - sys.monic_R[m + 1]
             - reverse(sys.monic_L[m], m).rmul(a))
    return RecursionResiduals(_sup(left, pts), _sup(right, pts))
