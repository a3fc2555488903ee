"""
Numerical Plumbing
==================
This module contains:
1. QuadratureSpec - tolerances and subdivision limit governing every integral
2. integrate() - adaptive Gauss-Kronrod quadrature (QUADPACK via scipy)
3. clamp_probability() - keep CDF values inside [0, 1]
"""

import logging
import math
from dataclasses import dataclass

from django.conf import settings
from django.core.exceptions import ValidationError
from scipy import integrate as sp_integrate

from core.exceptions import NonFiniteResultError, QuadratureError

logger = logging.getLogger(__name__)

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
DEFAULT_MAX_SUBDIVISIONS = 200

# Raw CDF values further than this outside [0, 1] are reported
CLAMP_WARNING_SLACK = 1e-6

# A QUADPACK diagnostic is tolerated while the reported error stays below
# this multiple of the requested tolerance
ACCEPTED_ERROR_FACTOR = 1e4


# ============================================================================
# QUADRATURE SPEC
# ============================================================================

@dataclass(frozen=True)
class QuadratureSpec:
    """
    Tolerances for adaptive quadrature.

    The integral is accepted once the error estimate is below
    max(abs_tol, rel_tol * |value|).
    """
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValidationError("Quadrature tolerances must be positive.")
        if int(self.max_subdivisions) < 1:
            raise ValidationError("max_subdivisions must be at least 1.")

    @classmethod
    def default(cls):
        """
        Build the settings from settings.IRSLAB_QUADRATURE.

        Falls back to the module constants when Django settings are not
        configured (plain library use).
        """
        if not settings.configured:
            return cls()
        conf = getattr(settings, 'IRSLAB_QUADRATURE', {})
        return cls(
            abs_tol=float(conf.get('ABS_TOL', DEFAULT_ABS_TOL)),
            rel_tol=float(conf.get('REL_TOL', DEFAULT_REL_TOL)),
            max_subdivisions=int(conf.get('MAX_SUBDIVISIONS', DEFAULT_MAX_SUBDIVISIONS)),
        )

    def tolerance_for(self, value):
        """Absolute error target for an integral of the given size."""
        return max(self.abs_tol, self.rel_tol * abs(value))

    def as_dict(self):
        return {
            'abs_tol': self.abs_tol,
            'rel_tol': self.rel_tol,
            'max_subdivisions': self.max_subdivisions,
        }


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def integrate(func, lower, upper, q=None, points=None):
    """
    Integrate func over [lower, upper] with QUADPACK's adaptive
    Gauss-Kronrod rule.

    Args:
        func: Scalar integrand
        lower, upper: Limits; either may be +/- infinity
        q: QuadratureSpec (defaults to QuadratureSpec.default())
        points: Optional interior breakpoints (finite intervals only)

    Returns:
        float: Integral value

    Raises:
        QuadratureError: When QUADPACK reports a failure and the error
            estimate exceeds the accepted band.
    """
    q = q or QuadratureSpec.default()
    if lower == upper:
        return 0.0

    options = {
        'epsabs': q.abs_tol,
        'epsrel': q.rel_tol,
        'limit': int(q.max_subdivisions),
        'full_output': 1,
    }
    if points and math.isfinite(lower) and math.isfinite(upper):
        inner = sorted(p for p in points if lower < p < upper)
        if inner:
            options['points'] = inner

    result = sp_integrate.quad(func, lower, upper, **options)
    value, error = float(result[0]), float(result[1])

    if not math.isfinite(value):
        raise QuadratureError("Integral is not finite", estimate=value, error_estimate=error)

    if len(result) > 3:
        message = result[3]
        if error > ACCEPTED_ERROR_FACTOR * q.tolerance_for(value):
            raise QuadratureError(message, estimate=value, error_estimate=error)
        logger.debug("Quadrature accepted with diagnostic: %s (error=%.3g)", message, error)

    return value


def clamp_probability(value, label='probability'):
    """
    Clamp a raw CDF value into [0, 1].

    Excursions larger than CLAMP_WARNING_SLACK are logged; approximate
    closed forms can leave the unit interval slightly at extreme arguments.

    Raises:
        NonFiniteResultError: If value is NaN
    """
    if math.isnan(value):
        raise NonFiniteResultError(f"{label} evaluated to NaN")
    if value < -CLAMP_WARNING_SLACK or value > 1.0 + CLAMP_WARNING_SLACK:
        logger.warning("Clamping %s=%.6g into [0, 1]", label, value)
    return min(max(value, 0.0), 1.0)
