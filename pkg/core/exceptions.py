"""
irslab Exceptions
=================
This module contains:
1. IrsLabError - base class of every library error
2. DomainError - argument outside a function's mathematical domain
3. ConvergenceError - an iterative evaluation ran out of iterations
4. QuadratureError - adaptive quadrature failed to reach its tolerance
5. NonFiniteResultError - a computation produced NaN
6. InsufficientPointsError - a slope fit had fewer than two usable points

Configuration objects raise django.core.exceptions.ValidationError instead,
the same way model clean() methods do.
"""


class IrsLabError(Exception):
    """Base class for irslab library errors."""


class DomainError(IrsLabError, ValueError):
    """Raised when an argument lies outside the domain of a function."""


class ConvergenceError(IrsLabError, ArithmeticError):
    """Raised when a series or continued fraction does not converge."""


class QuadratureError(ConvergenceError):
    """
    Raised when a numeric integral does not converge.

    Attributes:
        estimate: Best value QUADPACK reached
        error_estimate: Its absolute error estimate
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate

    def __str__(self):
        base = super().__str__()
        if self.error_estimate is None:
            return base
        return f"{base} (estimate={self.estimate!r}, error={self.error_estimate!r})"


class NonFiniteResultError(IrsLabError, ArithmeticError):
    """Raised when a probability or integral evaluates to NaN."""


class InsufficientPointsError(IrsLabError, ValueError):
    """Raised when fewer than two curve points are available for a fit."""
