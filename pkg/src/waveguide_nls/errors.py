"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class NumericError(RuntimeError):
    """An iterative routine failed to converge; the message carries diagnostics."""
