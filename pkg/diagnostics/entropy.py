"""
Entropy Diagnostics
===================
This module contains:
1. KlSpec - gamma surrogate with shape k + epsilon / N
2. kl_double_rayleigh_vs_gamma - relative entropy of one cascaded path
   against the surrogate
3. kl_student_t_vs_normal - Student-t(N) against the standard normal
4. joint_pdf_xy / marginal_x_pdf - law of (X_n, Y_n) under one-bit alignment
5. differential_entropy, joint_entropy_xy, mutual_information_xy
6. phase_correlation, xy_covariance - X_n and Y_n are uncorrelated

All entropies are in nats.
"""

import logging
import math
from dataclasses import dataclass

from django.core.exceptions import ValidationError
from scipy import stats

from core.exceptions import DomainError
from core.numerics import integrate
from fading.distributions import (
    GammaShapeScale,
    double_rayleigh_logpdf,
    double_rayleigh_pdf,
    gamma_surrogate,
    rounded_shape,
)
from specfun.functions import bessel_k0, log_bessel_k0

logger = logging.getLogger(__name__)

# Both densities are below 1e-300 past this point
TAIL_CUTOFF = 750.0

# K0(r) r underflows past this radius
RADIAL_CUTOFF = 700.0

BREAKPOINTS = (1.0, 5.0, 20.0, 80.0)

ENTROPY_X = 1.0
ENTROPY_Y = 1.0 + math.log(2.0)


# ============================================================================
# RELATIVE ENTROPY
# ============================================================================

@dataclass(frozen=True)
class KlSpec:
    """
    Surrogate gamma(k + epsilon / N, theta) for one path.

    epsilon is the rounding N k -> round(N k) spread over the N paths.
    """
    n_elements: int
    epsilon: float = 0.0

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValidationError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if not -0.5 <= self.epsilon <= 0.5:
            raise ValidationError(f"epsilon must lie in [-0.5, 0.5], got {self.epsilon!r}")
        if not self.shape > 0:
            raise ValidationError("Derived gamma shape must be positive.")

    @classmethod
    def from_rounding(cls, n_elements):
        """Shape offset matching the rounding the closed-form CDF makes."""
        return cls(n_elements, rounded_shape(n_elements) - n_elements * gamma_surrogate().k)

    @property
    def shape(self):
        return gamma_surrogate().k + self.epsilon / self.n_elements

    @property
    def law(self):
        return GammaShapeScale(self.shape, gamma_surrogate().theta)


def kl_double_rayleigh_vs_gamma(spec, q=None):
    """
    D(f_H || gamma) = int f_H ln(f_H / g) over (0, TAIL_CUTOFF).

    Args:
        spec: KlSpec
        q: QuadratureSpec

    Returns:
        float: Relative entropy in nats
    """
    law = spec.law

    def integrand(x):
        if x <= 0:
            return 0.0
        f = double_rayleigh_pdf(x)
        if f == 0.0:
            return 0.0
        return f * (double_rayleigh_logpdf(x) - law.logpdf(x))

    return integrate(integrand, 0.0, TAIL_CUTOFF, q, BREAKPOINTS)


@dataclass(frozen=True)
class StudentTDivergence:
    """KL of Student-t from the standard normal; saturated when infinite (nu <= 2)."""
    dof: float
    value_nats: float
    saturated: bool = False


def kl_student_t_vs_normal(dof, q=None):
    """
    D(t_nu || N(0, 1)).

    The cross-entropy term needs E[x^2], which is infinite for nu <= 2; the
    divergence saturates to inf there.
    """
    if not dof >= 1:
        raise DomainError(f"Degrees of freedom must be at least 1, got {dof!r}")
    if dof <= 2:
        return StudentTDivergence(dof=dof, value_nats=math.inf, saturated=True)

    law = stats.t(dof)

    def integrand(x):
        log_t = float(law.logpdf(x))
        return math.exp(log_t) * (log_t - float(stats.norm.logpdf(x)))

    value = 2.0 * integrate(integrand, 0.0, math.inf, q)
    return StudentTDivergence(dof=dof, value_nats=value)


# ============================================================================
# IN-PHASE / QUADRATURE COMPONENTS
# ============================================================================

def joint_pdf_xy(x, y):
    """(1/pi) K0(sqrt(x^2 + y^2)) on the half plane x >= 0."""
    if x == 0 and y == 0:
        raise DomainError("joint_pdf_xy is singular at the origin")
    if x < 0:
        return 0.0
    return bessel_k0(math.hypot(x, y)) / math.pi


def marginal_x_pdf(x, q=None):
    """int f(x, y) dy; equals e^-x."""
    if x < 0:
        return 0.0
    if x == 0:
        # log singularity of K0 at y = 0 is integrable
        return 2.0 * integrate(lambda y: joint_pdf_xy(0.0, y) if y > 0 else 0.0, 0.0, math.inf, q)
    return 2.0 * integrate(lambda y: joint_pdf_xy(x, y), 0.0, math.inf, q)


def differential_entropy(pdf, lower, upper, q=None, points=None):
    """-int p ln p over [lower, upper]."""
    def integrand(x):
        p = pdf(x)
        return -p * math.log(p) if p > 0 else 0.0

    return integrate(integrand, lower, upper, q, points)


def joint_entropy_xy(q=None):
    """
    h(X_n, Y_n) in polar coordinates.

    The angular integral spans pi and cancels the 1/pi, leaving
    ln(pi) - int_0^inf r K0(r) ln K0(r) dr.
    """
    def integrand(r):
        if r <= 0:
            return 0.0
        k0 = bessel_k0(r)
        if k0 == 0.0:
            return 0.0
        return r * k0 * log_bessel_k0(r)

    return math.log(math.pi) - integrate(integrand, 0.0, RADIAL_CUTOFF, q, BREAKPOINTS)


def mutual_information_xy(q=None):
    """I(X_n; Y_n) = h(X_n) + h(Y_n) - h(X_n, Y_n)."""
    value = ENTROPY_X + ENTROPY_Y - joint_entropy_xy(q)
    logger.debug("I(X;Y) = %.6f nats", value)
    return value


def phase_correlation(q=None):
    """E[cos(phi) sin(phi)] for phi ~ U[-pi/2, pi/2]."""
    return integrate(lambda p: math.cos(p) * math.sin(p) / math.pi, -math.pi / 2.0, math.pi / 2.0, q)


def xy_covariance(q=None):
    """
    Cov(X_n, Y_n) from the joint density.

    In polar form E[XY] = int r^3 K0 dr * int cos sin dphi / pi and
    E[Y] = int r^2 K0 dr * int sin dphi / pi.
    """
    def radial(power):
        return integrate(lambda r: r ** power * bessel_k0(r) if r > 0 else 0.0, 0.0, RADIAL_CUTOFF, q, BREAKPOINTS)

    half = (-math.pi / 2.0, math.pi / 2.0)
    angular_xy = integrate(lambda p: math.cos(p) * math.sin(p), *half, q)
    angular_x = integrate(math.cos, *half, q)
    angular_y = integrate(math.sin, *half, q)
    mean_x = radial(2) * angular_x / math.pi
    mean_y = radial(2) * angular_y / math.pi
    return radial(3) * angular_xy / math.pi - mean_x * mean_y
