"""Canonical moments and orthogonal polynomials of matrix measures.

Finite-atomic matrix measures on the unit circle and on [-1, 1], their
moment spaces, canonical (Verblunsky) moments, matrix orthogonal
polynomials and the Szego correspondence between the two settings.
"""
from .errors import (
    DegenerateMeasure,
    DegreeExceeds,
    DimensionMismatch,
    ImaginaryResidue,
    InsufficientData,
    InvalidInput,
    MomentError,
    NotContraction,
    NotInterior,
    NotPositiveDefinite,
    NotPositiveSemidefinite,
    NotSymmetric,
    ParseError,
    SingularSystem,
    SizeGuard,
)
from .generate import discrete_uniform, random_circle_measure
from .interval import (
    canonical_U,
    canonical_link_check,
    geronimus_check,
    recurrence_direct,
    recurrence_from_abar,
    s_bounds,
)
from .kernels import BACKEND
from .matcore import DEFAULT_TOL, Tolerances, psd_classify, tolerance_profile
from .measures import (
    CircleMeasure,
    IntervalMeasure,
    IntervalMomentSequence,
    MomentSequence,
    circle_moments,
    interval_moments,
    inverse_szego_map,
    is_symmetric,
    szego_map,
)
from .moment_space import (
    canonical_moment,
    canonical_sequence,
    membership,
    moment_ball,
    moments_from_verblunsky,
)
from .opuc import MatrixPolynomial, monic_system, psi_determinantal
from .verify import run_checks

__version__ = "0.1.0"
