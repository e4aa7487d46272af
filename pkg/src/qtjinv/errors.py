class QtjError(Exception):
    """Base class for library errors."""


class DomainError(QtjError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PrecisionError(QtjError, ArithmeticError):
    """Known coefficients do not suffice to certify the requested result."""


class ConsistencyError(QtjError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class ResourceError(QtjError, RuntimeError):
    """The requested computation exceeds the configured cost guard."""
