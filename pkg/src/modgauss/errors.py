"""Exception hierarchy shared by all modules."""


class ModGaussError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ModGaussError, ValueError):
    """An argument lies outside the domain of an operation."""


class AccuracyError(ModGaussError, ArithmeticError):
    """A computation could not reach the requested accuracy.

    ``log_value`` carries the logarithm of the result when it is known
    (for instance when only the exponentiation overflowed).
    """

    def __init__(self, message, log_value=None):
        super().__init__(message)
        self.log_value = log_value


class IntegrityError(ModGaussError, RuntimeError):
    """An internal consistency check failed (RH check, truncation check)."""


class ResourceError(ModGaussError, RuntimeError):
    """A configuration exceeds the desk-scale budget."""

    def __init__(self, message, projected_cost=None):
        super().__init__(message)
        self.projected_cost = projected_cost


class SingularSampleError(ModGaussError, ValueError):
    """A sample hit a probability-zero singularity (eigenangle exactly 0)."""
