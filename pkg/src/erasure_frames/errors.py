"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class ConsistencyError(RuntimeError):
    """An internal invariant that should be unreachable was violated."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap."""


class StatisticalError(RuntimeError):
    """A simulation produced no usable samples (e.g. zero acceptances)."""
