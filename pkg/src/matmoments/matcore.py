"""Dense complex matrix primitives with explicit tolerances.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Hermitian
inputs are symmetrized on entry so that round-off does not accumulate
through long pipelines.
"""
from __future__ import annotations

import enum
import os
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    InvalidInput,
    NotPositiveDefinite,
    NotPositiveSemidefinite,
    SingularSystem,
)


@dataclass(frozen=True)
class Tolerances:
    hermitian_tol: float = 1e-10
    psd_tol: float = 1e-10
    boundary_tol: float = 1e-8
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("hermitian_tol", "psd_tol", "boundary_tol", "residual_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be strictly positive, got {value!r}")

    def with_overrides(self, **kwargs) -> "Tolerances":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)

    def as_dict(self) -> dict:
        return {
            "hermitian_tol": self.hermitian_tol,
            "psd_tol": self.psd_tol,
            "boundary_tol": self.boundary_tol,
            "residual_tol": self.residual_tol,
        }


DEFAULT_TOL = Tolerances()

PROFILES = {
    "default": DEFAULT_TOL,
    "strict": Tolerances(hermitian_tol=1e-12, psd_tol=1e-12, boundary_tol=1e-10,
                         residual_tol=1e-10),
}


def tolerance_profile(name: str | None = None) -> Tolerances:
    """Return a named tolerance preset (``OPUC_TOLERANCE_PROFILE`` if unset)."""
    if name is None:
        name = os.environ.get("OPUC_TOLERANCE_PROFILE", "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise InvalidInput(f"unknown tolerance profile {name!r}") from None


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    PSD_SINGULAR = "PositiveSemidefiniteSingular"
    INDEFINITE = "Indefinite"


class PSDClass(NamedTuple):
    kind: Definiteness
    min_eigenvalue: float


class ContractionCheck(NamedTuple):
    is_contraction: bool
    sigma_max: float


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise InvalidInput(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


def hermitian(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate that `M` is Hermitian and return ``(M + M*) / 2``."""
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise InvalidInput(f"Hermitian matrix must be square, got {A.shape}")
    dev = np.max(np.abs(A - A.conj().T), initial=0.0)
    scale = max(1.0, np.max(np.abs(A), initial=0.0))
    if dev > tol.hermitian_tol * scale:
        raise InvalidInput(f"matrix is not Hermitian (deviation {dev:.3e})")
    return 0.5 * (A + A.conj().T)


def _eigh(H: np.ndarray):
    return np.linalg.eigh(0.5 * (H + H.conj().T))


def _threshold(evals: np.ndarray, tol: Tolerances) -> float:
    scale = np.max(np.abs(evals), initial=0.0)
    return scale * tol.psd_tol


def psd_classify(H, tol: Tolerances = DEFAULT_TOL) -> PSDClass:
    """Classify a Hermitian matrix by its smallest eigenvalue.

    The threshold is relative, ``psd_tol * max|lambda|``, so a rescaled
    measure keeps its classification.
    """
    H = hermitian(H, tol)
    evals = np.linalg.eigvalsh(H)
    lam_min = float(evals[0]) if evals.size else 0.0
    thr = _threshold(evals, tol)
    if lam_min > thr:
        kind = Definiteness.POSITIVE_DEFINITE
    elif lam_min >= -thr:
        kind = Definiteness.PSD_SINGULAR
    else:
        kind = Definiteness.INDEFINITE
    return PSDClass(kind, lam_min)


def principal_sqrt(H, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique PSD square root via the spectral decomposition.

    Eigenvalues within the PSD threshold of zero are clamped to zero.
    """
    H = hermitian(H, tol)
    evals, V = _eigh(H)
    thr = _threshold(evals, tol)
    if evals.size and evals[0] < -thr:
        raise NotPositiveSemidefinite(
            f"matrix is indefinite (min eigenvalue {evals[0]:.3e})")
    root = np.sqrt(np.clip(evals, 0.0, None))
    S = (V * root) @ V.conj().T
    return 0.5 * (S + S.conj().T)


def inv_sqrt(H, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``H^{-1/2}`` for a positive definite Hermitian `H`."""
    H = hermitian(H, tol)
    evals, V = _eigh(H)
    thr = _threshold(evals, tol)
    if evals.size and evals[0] <= thr:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (min eigenvalue {evals[0]:.3e})")
    S = (V / np.sqrt(evals)) @ V.conj().T
    return 0.5 * (S + S.conj().T)


def contraction_check(U, tol: Tolerances = DEFAULT_TOL) -> ContractionCheck:
    U = as_matrix(U, "U")
    if U.shape[0] != U.shape[1]:
        raise InvalidInput("contraction check needs a square matrix")
    sigma = float(np.linalg.norm(U, 2)) if U.size else 0.0
    return ContractionCheck(sigma <= 1.0 + tol.boundary_tol, sigma)


def det(M) -> complex:
    """Determinant by LU with partial pivoting."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise InvalidInput("determinant needs a square matrix")
    if M.shape[0] == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(M))


def solve(A, B, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve ``A X = B`` with an explicit pivot-size check."""
    A = as_matrix(A, "A")
    B = np.asarray(B, dtype=complex)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
        raise InvalidInput(f"incompatible shapes {A.shape} and {B.shape}")
    if A.shape[0] == 0:
        X = np.zeros((0, B.shape[1]), dtype=complex)
        return X[:, 0] if vector else X
    with warnings.catch_warnings():
        # singularity is reported below through the pivot check
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= tol.psd_tol * np.linalg.norm(A, 2):
        raise SingularSystem(f"matrix is numerically singular (pivot {pivots.min():.3e})")
    X = scipy.linalg.lu_solve((lu, piv), B, check_finite=False)
    return X[:, 0] if vector else X


def block_assemble(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return np.block([[np.asarray(b, dtype=complex) for b in row] for row in blocks])


def block_get(M, i: int, j: int, p: int) -> np.ndarray:
    M = np.asarray(M)
    return M[i * p:(i + 1) * p, j * p:(j + 1) * p]


def opnorm(M) -> float:
    M = np.asarray(M)
    return float(np.linalg.norm(M, 2)) if M.size else 0.0
