"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input: bad dimensions, violated model invariants, bad config."""


class NumericalError(RuntimeError):
    """Non-finite values or other numerical failure during optimization."""
