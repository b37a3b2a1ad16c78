"""Exception hierarchy shared by every module."""


class FHarmonicError(Exception):
    """Base class for all package errors."""


class ParameterError(FHarmonicError, ValueError):
    """A builtin was requested with parameters outside its valid range."""


class DomainError(FHarmonicError, ValueError):
    """A point lies outside the domain where a quantity is defined."""


class ConfigurationError(FHarmonicError, ValueError):
    """Sampling grids or scenario settings are unusable."""


class PreconditionError(FHarmonicError, ValueError):
    """A hypothesis required by an operation does not hold.

    ``location`` carries the first offending radius when there is one.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NoPoleError(FHarmonicError):
    """The warping function vanished before ``r_max`` (conjugate point)."""

    def __init__(self, message, radius):
        super().__init__(message)
        self.radius = radius


class NumericError(FHarmonicError, ArithmeticError):
    """Integration or quadrature failed to reach the requested tolerance."""


class EmptyDomainError(FHarmonicError):
    """The flux equation has no solution anywhere on the requested interval."""


class AmbiguousRootError(FHarmonicError):
    """The flux function is not monotone, so the slope is not unique."""

    def __init__(self, message, brackets):
        super().__init__(message)
        self.brackets = brackets


class DegenerateMetricError(FHarmonicError, ValueError):
    """A conformal factor vanished where the metric was evaluated."""
