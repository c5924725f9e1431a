"""Exception types shared across the package."""


class HalfqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(HalfqError, ValueError):
    """A parameter violates a documented precondition (q = 0, bad shape, ...)."""


class DimensionError(HalfqError, ValueError):
    """Leg counts or matrix shapes do not match."""


class AdmissibilityError(InvalidParameterError):
    """Some symmetric q-number k_q with k <= j vanishes at this q."""


class NotHeckeError(HalfqError):
    """R does not satisfy the quadratic Hecke condition at this q."""


class NotSkewInvertibleError(HalfqError):
    """The defining linear system for the skew inverse is singular."""


class SingularMatrixError(HalfqError):
    """Exact inversion hit a singular matrix."""


class RecursionMismatchError(HalfqError):
    """Left and right projector recursions disagree; internal inconsistency."""


class HeightError(HalfqError):
    """Rank conditions for evenness at the requested height fail."""


class CertificationError(HalfqError):
    """A constructed object failed one of its self-certification checks."""


class DegenerateFactorizationError(HalfqError):
    """Rank-one factorization produced a zero contraction."""
