"""
Leading-Order Expansions
========================
This module contains:
1. f_S_leading - small-x density of S (sum of N double-Rayleigh paths)
2. cdf_H_leading - small-t CDF of H = S + R
3. f_xr2_leading / f_y2_leading - small-argument densities of (X + R)^2 and Y^2
4. cdf_G2_leading - small-t CDF of the one-bit |G|^2, a pure power law
5. cdf_H_leading_quadrature - the convolution of the leading densities, numerically

Functions carrying a (ln 1/t)^N factor refuse t >= 1.
"""

import math

from core.exceptions import DomainError
from core.numerics import integrate
from specfun.functions import ln_gamma


def _check_small(x, name):
    if not 0.0 < x < 1.0:
        raise DomainError(f"{name} is a small-argument expansion and needs 0 < {name} < 1, got {x!r}")


def _check_order(n, sigma_d=1.0):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not sigma_d > 0:
        raise DomainError(f"sigma_d must be positive, got {sigma_d!r}")


# ============================================================================
# PERFECT ALIGNMENT
# ============================================================================

def f_S_leading(x, n):
    """x^(2N-1) (ln 1/x)^N / (2N-1)!"""
    _check_order(n)
    _check_small(x, 'x')
    return math.exp((2 * n - 1) * math.log(x) + n * math.log(-math.log(x)) - ln_gamma(2 * n))


def cdf_H_leading(t, n, sigma_d):
    """
    t^(2(N+1)) (ln 1/t)^N / (4 sigma_d^2 N (N+1) (2N+1) (2N-1)!)

    The denominator equals sigma_d^2 (2N+2)!.
    """
    _check_order(n, sigma_d)
    _check_small(t, 't')
    log_value = (
        2 * (n + 1) * math.log(t) + n * math.log(-math.log(t))
        - math.log(4.0 * sigma_d ** 2 * n * (n + 1) * (2 * n + 1)) - ln_gamma(2 * n)
    )
    return math.exp(log_value)


def cdf_H_leading_quadrature(t, n, sigma_d, q=None):
    """
    int int_{s + r <= t} f_S_leading(s) f_R_leading(r) dr ds with f_R_leading(r) = r / sigma_d^2.

    The inner integral over r is (t - s)^2 / (2 sigma_d^2); the outer one is
    done by quadrature. Agrees with cdf_H_leading up to a relative
    correction of order 1 / ln(1/t).
    """
    _check_order(n, sigma_d)
    _check_small(t, 't')
    inner = 2.0 * sigma_d ** 2
    return integrate(lambda s: f_S_leading(s, n) * (t - s) ** 2 / inner if s > 0 else 0.0, 0.0, t, q)


# ============================================================================
# ONE-BIT ALIGNMENT
# ============================================================================

def f_xr2_leading(x, n, sigma_d):
    """Density of (X + R)^2 near zero: x^(N/2) / (2 sigma_d^2 (N+1)!)."""
    _check_order(n, sigma_d)
    if x < 0:
        return 0.0
    return x ** (n / 2.0) / (2.0 * sigma_d ** 2 * math.exp(ln_gamma(n + 2)))


def f_y2_leading(y, n):
    """Density of Y^2 near zero: Gamma(N - 1/2) / (2 Gamma(N) sqrt(pi y))."""
    _check_order(n)
    if y <= 0:
        raise DomainError(f"f_y2_leading needs y > 0, got {y!r}")
    return math.exp(ln_gamma(n - 0.5) - ln_gamma(n)) / (2.0 * math.sqrt(math.pi * y))


def cdf_G2_leading(t, n, sigma_d):
    """
    t^((N+3)/2) Gamma(N/2+2) Gamma(N-1/2) / (2 sigma_d^2 Gamma(N) Gamma(N+3) Gamma((N+5)/2))
    """
    _check_order(n, sigma_d)
    if not t > 0:
        raise DomainError(f"cdf_G2_leading needs t > 0, got {t!r}")
    log_coeff = (
        ln_gamma(n / 2.0 + 2.0) + ln_gamma(n - 0.5)
        - ln_gamma(n) - ln_gamma(n + 3.0) - ln_gamma((n + 5.0) / 2.0)
    )
    return math.exp((n + 3.0) / 2.0 * math.log(t) + log_coeff) / (2.0 * sigma_d ** 2)

