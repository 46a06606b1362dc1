class QuivhomError(Exception):
    """Base class for all library errors."""


class ValidationError(QuivhomError):
    """Bad input document, bad witness, unmet precondition."""


class BudgetExceeded(QuivhomError):
    """A computation would exceed the configured size budget."""


class TruncationError(QuivhomError):
    """Requested degree is outside the range a complex was built for."""


class ComputationError(QuivhomError):
    """An internal identity failed (d^2 != 0, operator does not descend, ...)."""
