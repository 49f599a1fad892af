"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "GenrabiError",
    "ConfigError",
    "NumericError",
    "StepResolutionError",
    "QuadratureError",
    "SingularAnsatzError",
    "InconsistentProfileError",
    "UnitarityDriftError",
]


class GenrabiError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(GenrabiError, ValueError):
    """Invalid parameter, scenario, or configuration input."""


class NumericError(GenrabiError):
    """Base class for failures detected during numerical evaluation."""


class StepResolutionError(NumericError):
    """Propagator step too coarse for the fastest field scale."""


class QuadratureError(NumericError):
    """Adaptive quadrature did not converge to the requested tolerance."""


class SingularAnsatzError(NumericError):
    """The ansatz phase integral hits an interior cotangent singularity.

    The phase quadratures are only well defined while twice the accumulated
    cosine integral stays inside its first half-turn; a zero crossing in the
    interior means the supplied ansatz does not yield a valid representation
    on the requested window.
    """


class InconsistentProfileError(NumericError):
    """The field profile does not satisfy the condition a formula requires.

    Raised when closed-form entries or ansatz entries are requested for a
    profile whose detuning does not match the one the representation solves.
    """


class UnitarityDriftError(NumericError):
    """Accumulated unitarity defect exceeded the configured bound."""
