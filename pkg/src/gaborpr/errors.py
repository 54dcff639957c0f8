"""Exception hierarchy shared by all modules."""


class GaborPRError(Exception):
    """Base class for every error raised by the package."""


class ExponentOverflowError(GaborPRError, ArithmeticError):
    """An intermediate exponent left the guarded range.

    Attributes
    ----------
    exponent : float
        The offending natural-log magnitude.
    limit : float
        The configured guard.
    """

    def __init__(self, exponent, limit, where=""):
        self.exponent = float(exponent)
        self.limit = float(limit)
        msg = f"exponent {self.exponent:.6g} exceeds guard {self.limit:.6g}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class QuadratureError(GaborPRError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class TruncationError(GaborPRError):
    """A tail tolerance cannot be met within the supported range."""


class HypothesisError(GaborPRError):
    """The hypotheses of a diagnostic are not met by its inputs."""


class BoundaryZeroError(GaborPRError):
    """A zero of the function lies on (or too near) a contour."""


class WindingError(GaborPRError):
    """Winding counts are inconsistent after maximal subdivision."""


class AmbiguousMatchError(GaborPRError):
    """More than one zero lies within the matching radius."""


class ZeroFloorError(GaborPRError):
    """Every evaluation point falls below the zero floor."""
