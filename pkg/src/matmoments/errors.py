"""Exception hierarchy shared by every module of the package."""


class MomentError(Exception):
    """Base class for all errors raised by :mod:`matmoments`."""


class InvalidInput(MomentError, ValueError):
    pass


class ParseError(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NotPositiveSemidefinite(MomentError):
    pass


class NotPositiveDefinite(MomentError):
    pass


class SingularSystem(MomentError):
    pass


class InsufficientData(MomentError):
    pass


class NotSymmetric(MomentError):
    pass


class NotInterior(MomentError):
    """The moment point lies on the boundary of (or outside) the moment space."""


class DegenerateMeasure(MomentError):
    """The zeroth moment is singular, so no canonical moment is defined."""


class NotContraction(MomentError):
    pass


class ImaginaryResidue(MomentError):
    pass


class SizeGuard(MomentError):
    """Raised by the determinantal constructions above their size limit."""


class DegreeExceeds(MomentError):
    pass
