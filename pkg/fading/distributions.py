"""
Fading Distributions
====================
This module contains:
1. GammaShapeScale - (k, theta) of a gamma law
2. Double Rayleigh - density x K0(x), moments, exact sums for small N
3. Gamma surrogate - moment-matched gamma for one cascaded path and for S
4. One-bit components - cos(phi) law, X_n ~ Exp(1), Y_n ~ Laplace(1),
   X ~ Erlang(N), Y ~ sum of N Laplace variables, Y^2
5. Rayleigh - direct-link magnitude

Notation:
- H_n = |h_1n| |h_2n| (unit-scale Rayleigh factors), S = sum_n H_n
- Under one-bit alignment the residual phase phi_n ~ U[-pi/2, pi/2]
  and H_n e^{j phi_n} = X_n + j Y_n
"""

import math
from dataclasses import dataclass

from django.core.exceptions import ValidationError
from scipy import special

from core.exceptions import DomainError
from core.numerics import integrate
from specfun.functions import (
    bessel_k0,
    ln_gamma,
    log_bessel_k0,
    regularized_lower_gamma,
)


# ============================================================================
# GAMMA LAW
# ============================================================================

@dataclass(frozen=True)
class GammaShapeScale:
    """Gamma distribution with shape k and scale theta."""
    k: float
    theta: float

    def __post_init__(self):
        if not (self.k > 0 and self.theta > 0):
            raise ValidationError(f"Gamma shape and scale must be positive, got ({self.k}, {self.theta})")

    @property
    def mean(self):
        return self.k * self.theta

    @property
    def variance(self):
        return self.k * self.theta ** 2

    def logpdf(self, x):
        if x <= 0:
            return math.log(self.pdf(x)) if self.pdf(x) > 0 else -math.inf
        return (float(special.xlogy(self.k - 1.0, x)) - x / self.theta
                - self.k * math.log(self.theta) - ln_gamma(self.k))

    def pdf(self, x):
        if x > 0:
            return math.exp(self.logpdf(x))
        if x < 0 or self.k > 1:
            return 0.0
        # k <= 1 at the origin
        return 1.0 / self.theta if self.k == 1 else math.inf

    def cdf(self, x):
        if x <= 0:
            return 0.0
        return regularized_lower_gamma(self.k, x / self.theta)

    def scaled_shape(self, n):
        """Law of a sum of n independent copies (shape n k, same scale)."""
        return GammaShapeScale(n * self.k, self.theta)


def gamma_surrogate():
    """
    Moment-matched gamma law for one double-Rayleigh path.

    k = pi^2 / (16 - pi^2), theta = (16 - pi^2) / (2 pi); k theta = pi / 2.
    """
    pi2 = math.pi ** 2
    return GammaShapeScale(k=pi2 / (16.0 - pi2), theta=(16.0 - pi2) / (2.0 * math.pi))


def rounded_shape(n):
    """Nearest integer to N k, the Erlang shape used by the closed forms."""
    shape = math.floor(n * gamma_surrogate().k + 0.5)
    if shape < 1:
        raise DomainError(f"Rounded gamma shape must be at least 1, got {shape} for N={n}")
    return shape


def sum_S_pdf(x, n):
    """Gamma surrogate density of S = sum of n double-Rayleigh paths (shape n k)."""
    if n < 1:
        raise DomainError(f"sum_S_pdf requires n >= 1, got {n!r}")
    return gamma_surrogate().scaled_shape(n).pdf(x)


# ============================================================================
# DOUBLE RAYLEIGH
# ============================================================================

def double_rayleigh_pdf(x):
    """Density x K0(x) of the product of two unit-scale Rayleigh magnitudes."""
    if x <= 0:
        return 0.0
    return x * bessel_k0(x)


def double_rayleigh_logpdf(x):
    if x <= 0:
        return -math.inf
    return math.log(x) + log_bessel_k0(x)


def double_rayleigh_moment(p):
    """E[H_n^p] = (2^(p/2) Gamma(1 + p/2))^2 for p > -2."""
    if not p > -2:
        raise DomainError(f"Moment order must exceed -2, got {p!r}")
    return (2.0 ** (p / 2.0) * math.gamma(1.0 + p / 2.0)) ** 2


def exact_sum_pdf(x, n, q=None):
    """
    Exact density of S without the gamma surrogate, for n in {1, 2}.

    n = 2 is the convolution of two double-Rayleigh densities, integrated
    numerically.
    """
    if n == 1:
        return double_rayleigh_pdf(x)
    if n == 2:
        if x <= 0:
            return 0.0
        return integrate(lambda u: double_rayleigh_pdf(u) * double_rayleigh_pdf(x - u), 0.0, x, q)
    raise DomainError(f"exact_sum_pdf supports n in {{1, 2}}, got {n!r}")


# ============================================================================
# ONE-BIT PHASE COMPONENTS
# ============================================================================

def cos_phase_pdf(x):
    """Density of cos(phi) for phi ~ U[-pi/2, pi/2]; inf at the x = 1 singularity."""
    if x < 0 or x > 1:
        return 0.0
    if x == 1:
        return math.inf
    return 2.0 / (math.pi * math.sqrt(1.0 - x * x))


def xn_pdf(z):
    """In-phase component X_n = H_n cos(phi_n) is unit exponential."""
    return math.exp(-z) if z >= 0 else 0.0


def yn_pdf(y):
    """Quadrature component Y_n = H_n sin(phi_n) is unit Laplace."""
    return 0.5 * math.exp(-abs(y))


def xn_pdf_convolution(z, q=None):
    """
    Density of X_n from the product law: int_0^1 (1/x) f_cos(x) f_H(z/x) dx.

    Evaluated with x = cos(u), which maps f_cos(x) dx onto (2/pi) du and
    removes the endpoint singularity.
    """
    if z < 0:
        return 0.0

    def integrand(u):
        c = math.cos(u)
        if c <= 0:
            return 0.0
        return (2.0 / math.pi) * double_rayleigh_pdf(z / c) / c

    return integrate(integrand, 0.0, math.pi / 2.0, q)


def x_pdf(x, n):
    """X = sum of n unit exponentials: Erlang(n) density."""
    if n < 1:
        raise DomainError(f"x_pdf requires n >= 1, got {n!r}")
    if n == 1:
        return xn_pdf(x)
    if x < 0:
        return 0.0
    if x == 0:
        return 0.0
    return math.exp((n - 1) * math.log(x) - x - ln_gamma(n))


def x_cdf(u, n):
    """Erlang(n) CDF, 1 - sum_{j<n} u^j e^-u / j!, via the regularized lower gamma."""
    if n < 1:
        raise DomainError(f"x_cdf requires n >= 1, got {n!r}")
    if u <= 0:
        return 0.0
    return regularized_lower_gamma(n, u)


def y_logpdf(y, n):
    """
    ln f_Y for Y = sum of n unit Laplace variables.

    f_Y(y) = e^-|y| / (2^n (n-1)!) sum_{m=0}^{n-1} (n-1+m)! / (2^m m! (n-1-m)!) |y|^(n-1-m),
    accumulated in log space.
    """
    if n < 1:
        raise DomainError(f"y_pdf requires n >= 1, got {n!r}")
    a = abs(y)
    log_terms = [
        ln_gamma(n + m) - m * math.log(2.0) - ln_gamma(m + 1) - ln_gamma(n - m)
        + float(special.xlogy(n - 1 - m, a))
        for m in range(n)
    ]
    return -a - n * math.log(2.0) - ln_gamma(n) + float(special.logsumexp(log_terms))


def y_pdf(y, n):
    if n == 1:
        return yn_pdf(y)
    return math.exp(y_logpdf(y, n))


def y2_pdf(v, n):
    """Density of Y^2: f_Y(sqrt v) / sqrt v, singular like v^(-1/2) at 0."""
    if v <= 0:
        return 0.0 if v < 0 else math.inf
    root = math.sqrt(v)
    return y_pdf(root, n) / root


def y2_pdf_substituted(u, n):
    """
    Y^2 density after the substitution v = u^2 (dv = 2u du).

    int g(v) f_{Y^2}(v) dv = int g(u^2) * y2_pdf_substituted(u, n) du over u >= 0.
    """
    if u < 0:
        return 0.0
    return 2.0 * y_pdf(u, n)


# ============================================================================
# RAYLEIGH
# ============================================================================

def rayleigh_pdf(r, sigma):
    if not sigma > 0:
        raise DomainError(f"Rayleigh scale must be positive, got {sigma!r}")
    if r < 0:
        return 0.0
    return r / sigma ** 2 * math.exp(-r * r / (2.0 * sigma ** 2))


def rayleigh_cdf(r, sigma):
    if not sigma > 0:
        raise DomainError(f"Rayleigh scale must be positive, got {sigma!r}")
    if r <= 0:
        return 0.0
    return -math.expm1(-r * r / (2.0 * sigma ** 2))
