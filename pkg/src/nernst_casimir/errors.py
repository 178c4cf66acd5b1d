"""Exception hierarchy."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CasimirError, ValueError):
    """Argument outside the domain where a formula is defined."""


class DegenerateModelError(DomainError):
    """Drude model with nu = 0, which is really the plasma model."""


class RangeError(DomainError):
    """Query outside a tabulated grid (no extrapolation is done)."""


class ValidationError(CasimirError, ValueError):
    """Malformed input data (tables, config values)."""


class NumericalError(CasimirError, ArithmeticError):
    """A quadrature or summation did not reach its tolerance.

    ``diagnostics`` carries whatever partial information was available.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class TruncationError(NumericalError):
    """Matsubara summation hit its term cap; ``partial`` holds the partial result."""

    def __init__(self, message, partial=None, **diagnostics):
        super().__init__(message, **diagnostics)
        self.partial = partial
