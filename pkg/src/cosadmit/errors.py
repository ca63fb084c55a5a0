"""Exception taxonomy shared by all cosadmit modules.

Every operation rejects non-finite or out-of-range inputs up front and
raises one of these instead of returning NaN/inf silently.
"""

from __future__ import annotations


class CosAdmitError(Exception):
    """Base class for all cosadmit errors."""


class DomainError(CosAdmitError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class DivergenceError(DomainError):
    """A requested integral or series diverges for the given parameters."""

    def __init__(self, message: str, threshold: float | None = None):
        super().__init__(message)
        self.threshold = threshold


class AccuracyError(CosAdmitError, RuntimeError):
    """A numerical routine could not meet its accuracy target.

    Carries the best available estimate and a bound on its error so
    callers can decide whether the partial result is still usable.
    """

    def __init__(self, message: str, best_estimate: float, error_bound: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound


class OverflowRangeError(CosAdmitError, OverflowError):
    """A result over- or underflows the representable double range.

    ``log_magnitude_sign`` is +1 for overflow (log-magnitude too large
    positive) and -1 for underflow.
    """

    def __init__(self, message: str, log_magnitude_sign: int):
        super().__init__(message)
        self.log_magnitude_sign = log_magnitude_sign


class DegenerateDataError(CosAdmitError, ValueError):
    """Input data admits no well-defined answer (e.g. log of B <= 0)."""


class UnsupportedDimensionError(CosAdmitError, ValueError):
    """Dimension outside the supported range (d <= 3 for tensor sums)."""
