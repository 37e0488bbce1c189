"""Exception types shared across the package."""


class NovikovError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(NovikovError, ValueError):
    """Shapes, ranks or coefficient domains of the inputs do not fit together."""


class UndefinedError(NovikovError, ValueError):
    """A quantity is undefined for the given input (e.g. leading value of zero)."""


class InexactDivisionError(NovikovError, ArithmeticError):
    """Raised by exact division when the divisor does not divide the dividend."""


class ValidationError(NovikovError, ValueError):
    """Input data violates a mathematical invariant (chain condition, relators, ...)."""


class ResourceError(NovikovError, RuntimeError):
    """A configured enumeration cap would be exceeded."""
