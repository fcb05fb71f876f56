"""Exception hierarchy. The CLI maps each family to an exit code."""

from __future__ import annotations


class DehnFloerError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(DehnFloerError, ValueError):
    """Matrix or basis dimensions do not line up."""


class DegreeError(DehnFloerError, ValueError):
    """A linear map has a nonzero entry that breaks its degree shift."""


class DomainError(DehnFloerError, ValueError):
    """Input is well formed but outside the supported mathematical domain."""


class InvalidCurveError(DomainError):
    """The twist curve cannot exist on the given surface."""


class UnsupportedTopologyError(DomainError):
    """The surface/curve pair is outside the genus and boundary conditions the maps need."""

    def __init__(self, message: str, bullet: int):
        super().__init__(message)
        self.bullet = bullet


class NotBoundaryLabelError(DomainError):
    """A slice index inside the twist region was passed where 0 or m is required."""


class ArityError(DomainError):
    """Wrapping data or end lists have the wrong number of entries."""


class NumericError(DehnFloerError, ArithmeticError):
    """A quadrature or shooting step missed its tolerance."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved
