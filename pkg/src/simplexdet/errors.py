"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A code parameter (k, n, m, t, ...) is outside its admissible range."""


class BudgetExceeded(RuntimeError):
    """A computation was refused or abandoned because it exceeds its budget."""

    def __init__(self, message, *, limit=None):
        super().__init__(message)
        self.limit = limit


class InvariantViolation(AssertionError):
    """Two independent formulas that must agree did not. Always a bug."""
