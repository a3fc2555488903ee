"""
Integral Lemmas
===============
This module contains:
1. lemma1_cdf - CDF of Q + R for Q >= 0 independent of R ~ Rayleigh(sigma)
2. lemma2_integral - int_0^t x^I e^(-a x) e^(-b (t - x)^2) dx
3. Prop1Terms / erlang_rayleigh_terms - the closed-form pieces of
   F_{Q+R} when Q is Erlang (integer-shape gamma)
4. erlang_rayleigh_cdf - that CDF, with quadrature fallback

Closed form of the second lemma, with m = t - a / (2b), U = t - m = a / (2b)
and c_i = (i + 1) / 2:

    exp(a^2/(4b) - a t) * sum_i C(I, i) m^(I-i) * 1/2 b^(-c_i) * E_i

where b U^2 = a^2 / (4b) and the substitution n = x - m maps [0, t] to [-m, U].
- U >= 0 and (m <= 0 or i odd): E_i = Gamma(c_i, b m^2) - Gamma(c_i, a^2/(4b)).
- U >= 0, m > 0 and i even: the interval crosses zero and
  E_i = gamma(c_i, a^2/(4b)) + gamma(c_i, b m^2) (lower incomplete gammas).
- U < 0: both limits are negative and
  E_i = (-1)^i (gamma(c_i, b m^2) - gamma(c_i, a^2/(4b))).
The published expression uses the first form for every term; it is still
available through as_printed=True.
"""

import logging
import math
import sys
from dataclasses import dataclass

from django.db import models

from core.exceptions import DomainError
from core.numerics import QuadratureSpec, clamp_probability, integrate
from specfun.functions import (
    binomial,
    ln_gamma,
    log_upper_incomplete_gamma,
    lower_incomplete_gamma,
    regularized_lower_gamma,
)

logger = logging.getLogger(__name__)

# Rounding error of the alternating closed-form sum, relative to its largest terms
ROUNDING_FACTOR = 8 * sys.float_info.epsilon


class Lemma2Mode(models.TextChoices):
    CLOSED_FORM = 'closed_form', 'Closed form'
    QUADRATURE = 'quadrature', 'Quadrature'


def mass_points(mean, spread):
    """Quadrature breakpoints around the bulk of a density."""
    return tuple(p for p in (mean - 4 * spread, mean, mean + 4 * spread, mean + 12 * spread) if p > 0)


# ============================================================================
# SURROGATE PLUS RAYLEIGH CDF
# ============================================================================

def lemma1_cdf(f_Q, F_Q, sigma, z, q=None, points=None):
    """
    CDF of Z = Q + R with Q >= 0 and R ~ Rayleigh(sigma) independent.

    F_Z(z) = F_Q(0) (1 - e^(-z^2/2 sigma^2)) + int_0^z f_Q(s) (1 - e^(-(z-s)^2/2 sigma^2)) ds

    which equals F_Q(z) - int_0^z f_Q(s) e^(-(z-s)^2/2 sigma^2) ds for a
    continuous Q and also covers a point mass of Q at zero (F_Q(0) > 0).

    Args:
        f_Q: Density of the continuous part of Q
        F_Q: CDF of Q (only F_Q(0) is read)
        sigma: Rayleigh scale
        z: Evaluation point
        q: QuadratureSpec
        points: Optional breakpoints where f_Q carries its mass

    Returns:
        float: F_Z(z) in [0, 1]
    """
    if not sigma > 0:
        raise DomainError(f"Rayleigh scale must be positive, got {sigma!r}")
    if z <= 0:
        return 0.0
    if math.isinf(z):
        return 1.0

    two_var = 2.0 * sigma * sigma
    atom = F_Q(0.0)
    continuous = integrate(
        lambda s: f_Q(s) * -math.expm1(-(z - s) ** 2 / two_var), 0.0, z, q, points
    )
    return clamp_probability(atom * -math.expm1(-z * z / two_var) + continuous, 'lemma1_cdf')


# ============================================================================
# ONE-BIT INTEGRAL
# ============================================================================

def _gamma_difference(c, x1, x2, log_factor=0.0):
    """
    exp(log_factor) * (Gamma(c, x1) - Gamma(c, x2)) and the sum of the two pieces.

    Both arguments inside the series region: the difference is taken between
    lower incomplete gammas, which carry full relative precision there.
    """
    if max(x1, x2) < c + 1.0:
        scale = math.exp(log_factor + ln_gamma(c))
        low1, low2 = regularized_lower_gamma(c, x1), regularized_lower_gamma(c, x2)
        return scale * (low2 - low1), scale * (low1 + low2)
    first = math.exp(log_factor + log_upper_incomplete_gamma(c, x1))
    second = math.exp(log_factor + log_upper_incomplete_gamma(c, x2))
    return first - second, first + second


def _shifted_moments(I, a, b, t, log_factor=0.0, as_printed=False):
    """
    exp(log_factor) * int_{-m}^{a/(2b)} n^i e^(-b n^2) dn for i = 0..I.

    Returns:
        list: (value, sum of the absolute pieces behind it) per i
    """
    offset = a * a / (4.0 * b)
    m = t - a / (2.0 * b)
    bm2 = b * m * m

    moments = []
    for i in range(I + 1):
        c = 0.5 * (i + 1)
        half = 0.5 * b ** (-c)
        if as_printed or (a >= 0 and (m <= 0 or i % 2 == 1)):
            value, pieces = _gamma_difference(c, bm2, offset, log_factor)
        elif a < 0:
            # Both limits negative
            value, pieces = _gamma_difference(c, bm2, offset, log_factor)
            if i % 2 == 0:
                value = -value
        else:
            value = math.exp(log_factor) * (lower_incomplete_gamma(c, offset) + lower_incomplete_gamma(c, bm2))
            pieces = value
        moments.append((half * value, half * pieces))
    return moments


def lemma2_integral(I, a, b, t, mode=Lemma2Mode.CLOSED_FORM, q=None, as_printed=False):
    """
    int_0^t x^I e^(-a x) e^(-b (t-x)^2) dx.

    Args:
        I: Nonnegative integer power
        a: Exponential rate (real)
        b: Gaussian rate, b > 0
        t: Upper limit, t >= 0
        mode: 'closed_form' or 'quadrature' (the reference)
        q: QuadratureSpec for quadrature mode
        as_printed: Evaluate the published form of the closed expression,
            which differs from the integral for m > 0 and even i
    """
    if int(I) != I or I < 0:
        raise DomainError(f"I must be a nonnegative integer, got {I!r}")
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if t == 0:
        return 0.0

    I = int(I)
    if mode == Lemma2Mode.QUADRATURE:
        return integrate(lambda x: x ** I * math.exp(-a * x - b * (t - x) ** 2), 0.0, t, q)
    if mode == Lemma2Mode.CLOSED_FORM:
        m = t - a / (2.0 * b)
        moments = _shifted_moments(I, a, b, t, a * a / (4.0 * b) - a * t, as_printed)
        return math.fsum(
            binomial(I, i) * m ** (I - i) * value
            for i, (value, _) in enumerate(moments)
            if m != 0.0 or i == I
        )
    raise DomainError(f"Unknown lemma2_integral mode {mode!r}")


# ============================================================================
# ERLANG + RAYLEIGH
# ============================================================================

@dataclass(frozen=True)
class Prop1Terms:
    """
    Closed-form pieces of F_{Q+R}(t) for Q ~ Gamma(rounded_shape, scale):

        F(t) = P(K, t / scale) - A * sum_i C(K-1, i) B_i m^(K-1-i)

    A may overflow to inf and B_i underflow to 0 for large sigma. AB then
    holds the products A * B_i evaluated in log space, with magnitudes the
    absolute pieces each product is the difference of.
    """
    rounded_shape: int
    A: float
    m: float
    B: tuple
    scale: float = 1.0
    AB: tuple = None
    magnitudes: tuple = None

    def __post_init__(self):
        if self.rounded_shape < 1:
            raise DomainError("rounded_shape must be at least 1")
        if len(self.B) != self.rounded_shape:
            raise DomainError("B must hold one coefficient per shape index")
        if self.AB is not None and len(self.AB) != self.rounded_shape:
            raise DomainError("AB must hold one product per shape index")

    def products(self):
        if self.AB is not None:
            return self.AB
        return tuple(self.A * b for b in self.B)

    def _weights(self):
        K = self.rounded_shape
        for i in range(K):
            power = K - 1 - i
            if self.m == 0.0 and power > 0:
                continue
            yield i, binomial(K - 1, i) * self.m ** power

    def weighted_sum(self):
        """A * sum_i C(K-1, i) B_i m^(K-1-i)."""
        products = self.products()
        return math.fsum(weight * products[i] for i, weight in self._weights())

    def head(self, t):
        return regularized_lower_gamma(self.rounded_shape, t / self.scale)

    def cdf(self, t):
        return self.head(t) - self.weighted_sum()

    def rounding_bound(self, t):
        """Worst-case rounding error of cdf(t) from cancellation in the sum."""
        magnitudes = self.magnitudes or tuple(abs(p) for p in self.products())
        total = math.fsum(abs(weight) * magnitudes[i] for i, weight in self._weights())
        return ROUNDING_FACTOR * (total + self.head(t))


def erlang_rayleigh_terms(t, shape, scale, sigma):
    """
    Assemble Prop1Terms for Gamma(shape, scale) + Rayleigh(sigma) at t.

    The one-bit integral with a = 1/scale, b = 1/(2 sigma^2), I = shape - 1.

    Raises:
        OverflowError: When even the log-space products leave float range
    """
    shape = int(shape)
    if shape < 1:
        raise DomainError(f"Erlang shape must be at least 1, got {shape}")
    a = 1.0 / scale
    b = 1.0 / (2.0 * sigma * sigma)
    log_A = a * a / (4.0 * b) - a * t - ln_gamma(shape) - shape * math.log(scale)
    try:
        A = math.exp(log_A)
    except OverflowError:
        A = math.inf

    B = tuple(value for value, _ in _shifted_moments(shape - 1, a, b, t))
    scaled = _shifted_moments(shape - 1, a, b, t, log_factor=log_A)
    return Prop1Terms(
        rounded_shape=shape,
        A=A,
        m=t - a / (2.0 * b),
        B=B,
        scale=scale,
        AB=tuple(value for value, _ in scaled),
        magnitudes=tuple(pieces for _, pieces in scaled),
    )


def erlang_rayleigh_cdf(t, shape, scale, sigma, q=None):
    """
    CDF of Q + R with Q ~ Gamma(integer shape, scale), R ~ Rayleigh(sigma).

    Evaluates the assembled Prop1Terms. When their rounding bound exceeds
    q.abs_tol the value is recomputed with Lemma-1 quadrature.
    """
    q = q or QuadratureSpec.default()
    shape = int(shape)
    if shape < 1:
        raise DomainError(f"Erlang shape must be at least 1, got {shape}")
    if t <= 0:
        return 0.0
    if math.isinf(t):
        return 1.0

    try:
        terms = erlang_rayleigh_terms(t, shape, scale, sigma)
        raw = terms.cdf(t)
        bound = terms.rounding_bound(t)
    except OverflowError:
        raw, bound = math.nan, math.inf

    if not math.isfinite(raw) or bound > q.abs_tol:
        logger.debug(
            "Closed form for shape=%d sigma=%.4g t=%.4g has rounding bound %.3g; using quadrature",
            shape, sigma, t, bound,
        )
        return _erlang_rayleigh_quadrature(t, shape, scale, sigma, q)
    return clamp_probability(raw, 'Erlang-Rayleigh CDF')


def _erlang_rayleigh_quadrature(t, shape, scale, sigma, q):
    log_norm = -ln_gamma(shape) - shape * math.log(scale)

    def density(s):
        if s <= 0:
            return 0.0
        return math.exp((shape - 1) * math.log(s) - s / scale + log_norm)

    def at_zero(_):
        return 0.0

    return lemma1_cdf(density, at_zero, sigma, t, q, points=mass_points(shape * scale, math.sqrt(shape) * scale))
