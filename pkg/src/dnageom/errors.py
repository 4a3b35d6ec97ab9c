"""Exception types raised by the geometry kernels."""

from __future__ import annotations


class GeometryError(ValueError):
    """Base class for all geometric input problems."""


class DegenerateInputError(GeometryError):
    """Input collapses below the dimension an operation needs."""


class InvalidInputError(GeometryError):
    """Input is well formed but violates an operation precondition."""


class DomainError(GeometryError):
    """Scalar argument outside the function's domain."""


class BudgetExceededError(RuntimeError):
    """Improvement engine ran out of moves; carries the trace for autopsy."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
