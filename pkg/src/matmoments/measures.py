"""Finite-atomic matrix measures on the unit circle and on [-1, 1].

Every measure is a finite list of atoms, so moments are exact finite sums
and the identities tested elsewhere are never confounded with quadrature
error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .errors import InsufficientData, InvalidInput, NotSymmetric
from .matcore import DEFAULT_TOL, Definiteness, Tolerances, hermitian, psd_classify

#: atoms closer than this (in angle or abscissa) are merged at construction
MERGE_TOL = 1e-12


def normalize_angle(theta):
    """Map angles into [-pi, pi)."""
    t = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(t >= np.pi, -np.pi, t)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def _check_weights(weights, tol: Tolerances) -> np.ndarray:
    weights = np.asarray(weights, dtype=complex)
    if weights.ndim != 3 or weights.shape[1] != weights.shape[2]:
        raise InvalidInput(f"weights must have shape (k, p, p), got {weights.shape}")
    if weights.shape[0] == 0:
        raise InvalidInput("a measure needs at least one atom")
    out = np.empty_like(weights)
    for j, w in enumerate(weights):
        w = hermitian(w, tol)
        if psd_classify(w, tol).kind is Definiteness.INDEFINITE:
            raise InvalidInput(f"weight of atom {j} is not positive semidefinite")
        out[j] = w
    if not np.any(np.abs(out) > 0):
        raise InvalidInput("all atom weights vanish")
    return out


def _merge_sorted(pos: np.ndarray, weights: np.ndarray):
    order = np.argsort(pos, kind="stable")
    pos, weights = pos[order], weights[order]
    keep_pos, keep_w = [], []
    for x, w in zip(pos, weights):
        if keep_pos and x - keep_pos[-1] < MERGE_TOL:
            keep_w[-1] = keep_w[-1] + w
        else:
            keep_pos.append(float(x))
            keep_w.append(w.copy())
    return keep_pos, keep_w


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """Atoms ``(theta_j, W_j)`` with ``theta_j`` in [-pi, pi) and ``W_j >= 0``.

    Use :meth:`from_atoms` to build one; it normalizes angles, merges
    coincident atoms and validates the weights.
    """

    thetas: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, thetas, weights, tol: Tolerances = DEFAULT_TOL) -> "CircleMeasure":
        thetas = normalize_angle(np.atleast_1d(np.asarray(thetas, dtype=float)))
        weights = _check_weights(weights, tol)
        if thetas.shape[0] != weights.shape[0]:
            raise InvalidInput("number of angles and weights differ")
        pos, ws = _merge_sorted(thetas, weights)
        # the circle wraps: an atom just below pi coincides with one at -pi
        if len(pos) > 1 and (pos[0] + 2 * np.pi) - pos[-1] < MERGE_TOL:
            ws[0] = ws[0] + ws.pop()
            pos.pop()
        return cls(_frozen(np.array(pos)), _frozen(np.array(ws)))

    @property
    def p(self) -> int:
        return self.weights.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.thetas.shape[0]

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.thetas)

    def atoms(self) -> Iterable[tuple[float, np.ndarray]]:
        return zip(self.thetas.tolist(), self.weights)


@dataclass(frozen=True, eq=False)
class IntervalMeasure:
    """Atoms ``(x_j, W_j)`` with ``x_j`` in [-1, 1] and ``W_j >= 0``."""

    xs: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, xs, weights, tol: Tolerances = DEFAULT_TOL) -> "IntervalMeasure":
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if not np.all(np.isfinite(xs)) or np.any(np.abs(xs) > 1 + MERGE_TOL):
            raise InvalidInput("interval atoms must lie in [-1, 1]")
        xs = np.clip(xs, -1.0, 1.0)
        weights = _check_weights(weights, tol)
        if xs.shape[0] != weights.shape[0]:
            raise InvalidInput("number of abscissae and weights differ")
        pos, ws = _merge_sorted(xs, weights)
        return cls(_frozen(np.array(pos)), _frozen(np.array(ws)))

    @property
    def p(self) -> int:
        return self.weights.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.xs.shape[0]

    def atoms(self) -> Iterable[tuple[float, np.ndarray]]:
        return zip(self.xs.tolist(), self.weights)


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Trigonometric moments ``Gamma_0 .. Gamma_m`` of a circle measure.

    Only nonnegative indices are stored; ``gamma(-k)`` returns ``Gamma_k^*``.
    """

    gammas: np.ndarray

    @classmethod
    def from_gammas(cls, gammas, tol: Tolerances = DEFAULT_TOL) -> "MomentSequence":
        g = np.array(gammas, dtype=complex)
        if g.ndim != 3 or g.shape[1] != g.shape[2] or g.shape[0] == 0:
            raise InvalidInput(f"moments must have shape (m+1, p, p), got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InvalidInput("moments have non-finite entries")
        g[0] = hermitian(g[0], tol)
        return cls(_frozen(g))

    @property
    def p(self) -> int:
        return self.gammas.shape[1]

    @property
    def order(self) -> int:
        """Highest available moment index ``m``."""
        return self.gammas.shape[0] - 1

    def gamma(self, k: int) -> np.ndarray:
        if abs(k) > self.order:
            raise InsufficientData(f"moment {k} requested, only 0..{self.order} available")
        return self.gammas[k] if k >= 0 else self.gammas[-k].conj().T

    def truncate(self, m: int) -> "MomentSequence":
        if m > self.order:
            raise InsufficientData(f"cannot truncate order {self.order} to {m}")
        return MomentSequence(_frozen(self.gammas[: m + 1]))

    def extend(self, W) -> "MomentSequence":
        W = np.asarray(W, dtype=complex)[None]
        return MomentSequence(_frozen(np.concatenate([self.gammas, W])))


@dataclass(frozen=True, eq=False)
class IntervalMomentSequence:
    """Power moments ``S_0 .. S_n`` of a measure on [-1, 1]."""

    s: np.ndarray

    @classmethod
    def from_moments(cls, s, tol: Tolerances = DEFAULT_TOL) -> "IntervalMomentSequence":
        s = np.array(s, dtype=complex)
        if s.ndim != 3 or s.shape[1] != s.shape[2] or s.shape[0] == 0:
            raise InvalidInput(f"moments must have shape (n+1, p, p), got {s.shape}")
        for k in range(s.shape[0]):
            s[k] = hermitian(s[k], tol)
        return cls(_frozen(s))

    @property
    def p(self) -> int:
        return self.s.shape[1]

    @property
    def order(self) -> int:
        return self.s.shape[0] - 1

    def __getitem__(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.order:
            raise InsufficientData(f"moment S_{k} requested, only 0..{self.order} available")
        return self.s[k]


def circle_moments(mu: CircleMeasure, m: int) -> MomentSequence:
    """Exact moments ``Gamma_k = sum_j exp(i k theta_j) W_j``, k = 0..m."""
    if m < 0:
        raise InvalidInput("moment order must be nonnegative")
    g = kernels.circle_moments(mu.thetas, mu.weights, m)
    g[0] = 0.5 * (g[0] + g[0].conj().T)
    return MomentSequence(_frozen(g))


def trig_moments(seq: MomentSequence):
    """Split ``Gamma_k = alpha_k + i beta_k`` into cosine and sine moments.

    ``alpha_k = (Gamma_k + Gamma_-k) / 2`` and ``beta_k = (Gamma_k - Gamma_-k) / 2i``,
    i.e. the integrals of ``cos(k theta)`` and ``sin(k theta)``.  Both are
    real matrices for real-valued measures.  Returns ``(alphas, betas)``
    with ``alphas[k]`` for k = 0..m and ``betas[k-1]`` for k = 1..m.
    """
    g = seq.gammas
    gh = np.conj(np.swapaxes(g, 1, 2))
    alphas = 0.5 * (g + gh)
    betas = (g[1:] - gh[1:]) / 2j
    return alphas, betas


def interval_moments(mu: IntervalMeasure, n: int) -> IntervalMomentSequence:
    if n < 0:
        raise InvalidInput("moment order must be nonnegative")
    s = kernels.interval_moments(mu.xs, mu.weights, n)
    s = 0.5 * (s + np.conj(np.swapaxes(s, 1, 2)))
    return IntervalMomentSequence(_frozen(s))


def _weight_scale(mu) -> float:
    return max(1.0, max(np.max(np.abs(w)) for w in mu.weights))


def _find_mirror(mu: CircleMeasure, theta: float) -> int | None:
    target = float(normalize_angle(-theta))
    d = np.abs(mu.thetas - target)
    d = np.minimum(d, 2 * np.pi - d)
    j = int(np.argmin(d))
    return j if d[j] < MERGE_TOL else None


def is_symmetric(mu: CircleMeasure, tol: float = 1e-10) -> bool:
    """True iff the measure is invariant under ``theta -> -theta``."""
    scale = _weight_scale(mu)
    for theta, w in mu.atoms():
        j = _find_mirror(mu, theta)
        if j is None or np.max(np.abs(mu.weights[j] - w)) > tol * scale:
            return False
    return True


def symmetrize(mu: CircleMeasure) -> CircleMeasure:
    """Return ``(mu(theta) + mu(-theta)) / 2``."""
    thetas = np.concatenate([mu.thetas, -mu.thetas])
    weights = np.concatenate([mu.weights, mu.weights]) / 2
    return CircleMeasure.from_atoms(thetas, weights)


def szego_map(mu: CircleMeasure, tol: float = 1e-10) -> IntervalMeasure:
    """Push a symmetric circle measure forward under ``theta -> cos(theta)``."""
    if not is_symmetric(mu, tol):
        raise NotSymmetric("the Szego map needs a measure invariant under theta -> -theta")
    return IntervalMeasure.from_atoms(np.cos(mu.thetas), mu.weights)


def inverse_szego_map(mu_i: IntervalMeasure) -> CircleMeasure:
    """Split every interior atom ``x`` into ``+-arccos(x)`` with half the weight.

    Endpoint atoms go to ``theta = 0`` (x = 1) and ``theta = -pi`` (x = -1).
    """
    thetas, weights = [], []
    for x, w in mu_i.atoms():
        if x >= 1.0:
            thetas.append(0.0)
            weights.append(w)
        elif x <= -1.0:
            thetas.append(-np.pi)
            weights.append(w)
        else:
            t = math.acos(x)
            thetas += [t, -t]
            weights += [w / 2, w / 2]
    return CircleMeasure.from_atoms(thetas, np.array(weights))


def chebyshev_coefficient(j: int, k: int) -> Fraction:
    """Coefficient of ``x^(j-2k)`` in ``T_j(x)`` including the sign ``(-1)^k``.

    ``j Gamma(j-k) / (Gamma(k+1) Gamma(j-2k+1)) 2^(j-2k-1)`` evaluated exactly.
    """
    if j == 0:
        return Fraction(1) if k == 0 else Fraction(0)
    c = Fraction(j * math.factorial(j - k - 1),
                 math.factorial(k) * math.factorial(j - 2 * k)) * Fraction(2) ** (j - 2 * k - 1)
    return -c if k % 2 else c


def gamma_from_chebyshev(S: IntervalMomentSequence, j: int) -> np.ndarray:
    """Circle moment ``Gamma_j = int T_j(x) dmu_I(x)`` from power moments."""
    if j < 0:
        raise InvalidInput("moment index must be nonnegative")
    if j > S.order:
        raise InsufficientData(f"Gamma_{j} needs S_0..S_{j}, have up to S_{S.order}")
    if j == 0:
        return S[0].copy()
    out = np.zeros((S.p, S.p), dtype=complex)
    for k in range(j // 2 + 1):
        out += float(chebyshev_coefficient(j, k)) * S[j - 2 * k]
    return out
