"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class SupportError(DomainError):
    """Recursion data incompatible with the requested support ([0, inf) or [0, 1])."""


class NotAMomentSequenceError(DomainError):
    """Hankel matrices of the moment sequence are not positive definite."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine failed to converge."""
