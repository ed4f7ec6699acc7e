"""Exception types raised across the package.

Every error derives from :class:`HempssError` so callers (and the CLI) can
separate computational failures from programming mistakes.
"""


class HempssError(Exception):
    """Base class for all package errors."""


class InvalidCutoffError(HempssError, ValueError):
    pass


class DimensionError(HempssError, ValueError):
    pass


class ConvergenceError(HempssError, RuntimeError):
    """An iterative or quadrature procedure did not reach its tolerance."""

    def __init__(self, message, residual=None, diagnostics=None):
        super().__init__(message)
        self.residual = residual
        self.diagnostics = diagnostics or {}


class NormalizationError(HempssError, ValueError):
    pass


class ConstraintError(HempssError, ValueError):
    """Parameters violate the canonical constraints."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class BranchError(HempssError, ValueError):
    pass


class SingularTransformationError(HempssError, ZeroDivisionError):
    pass


class ExponentRangeError(HempssError, OverflowError):
    pass


class UnsupportedOrderError(HempssError, ValueError):
    pass


class NonUniqueStateError(HempssError, RuntimeError):
    pass


class TruncationError(HempssError, RuntimeError):
    """Fock cutoff or photon-number range too small for the requested accuracy."""


class ConventionMismatchError(HempssError, RuntimeError):
    pass


class AmbiguityError(HempssError, ValueError):
    pass


class IncompleteInputError(HempssError, ValueError):
    pass


class InfeasibleDesignError(HempssError, ValueError):
    pass


class CoverageError(HempssError, ValueError):
    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)
