"""Exception types shared across the package."""


class RdmLabError(Exception):
    """Base class for package errors."""


class ResolutionError(RdmLabError):
    """Grid resolution below the supported minimum."""


class CapacityError(RdmLabError):
    """Requested problem exceeds a configured size cap."""


class ConfigError(RdmLabError):
    """Displacement configuration inconsistent with the requested box."""


class SiteError(RdmLabError):
    """Single-site potential parameters out of range."""


class ConvergenceError(RdmLabError):
    """Iterative eigensolve failed to reach the residual tolerance."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class AlternativeTwoError(RdmLabError):
    """Flat landscape detected where a corner-slope constant was requested."""


class InconclusiveError(RdmLabError):
    """Monte Carlo run produced no usable trials."""
