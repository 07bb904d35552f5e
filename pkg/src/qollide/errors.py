"""Exception types separating input/state validation from numeric failures."""


class QollideError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(QollideError, ValueError):
    """A precondition, configuration value or state invariant is invalid."""


class NumericError(QollideError, RuntimeError):
    """A numeric invariant broke during computation (drift, negativity,
    non-convergence)."""
