"""Exception types shared across the package."""


class RejectedInput(ValueError):
    """An argument violates a documented precondition."""


class SingularMatrixError(ArithmeticError):
    """An information matrix is numerically singular at working precision."""


class ConsistencyError(ArithmeticError):
    """An internal quantity violates a structural requirement (e.g. a
    Schur-complement scalar that must be positive came out non-positive)."""
