"""
Special Functions
=================
This module contains:
1. AccuracyBudget - stopping rule for the incomplete-gamma iterations
2. ln_gamma - ln Gamma(a)
3. Incomplete gamma family - Gamma(a, x), gamma(a, x), P(a, x), Q(a, x), ln Gamma(a, x)
4. bessel_k0 / bessel_k1 / log_bessel_k0 - modified Bessel functions of the second kind
5. binomial - binomial weights

The incomplete gamma function is evaluated with the power series for
x < a + 1 and the Lentz continued fraction otherwise. Log-gamma and the
Bessel functions delegate to scipy.special (Cephes Chebyshev expansions).
All functions are pure and take real arguments only.
"""

import math
import sys
from dataclasses import dataclass

from django.core.exceptions import ValidationError
from scipy import special

from core.exceptions import ConvergenceError, DomainError

# Lentz guard against zero denominators
_FPMIN = sys.float_info.min / sys.float_info.epsilon

# Binomials up to this n are returned as exact integers
EXACT_BINOMIAL_LIMIT = 60


# ============================================================================
# ACCURACY BUDGET
# ============================================================================

@dataclass(frozen=True)
class AccuracyBudget:
    """
    Stopping rule for series and continued-fraction evaluation.

    Iteration stops once the last correction is below
    max(abs_tol, rel_tol * |partial result|).
    """
    abs_tol: float = 1e-300
    rel_tol: float = 4 * sys.float_info.epsilon
    max_iter: int = 1000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValidationError("AccuracyBudget tolerances must be positive.")
        if int(self.max_iter) < 1:
            raise ValidationError("AccuracyBudget.max_iter must be at least 1.")


DEFAULT_BUDGET = AccuracyBudget()


# ============================================================================
# GAMMA FUNCTIONS
# ============================================================================

def ln_gamma(a):
    """Return ln Gamma(a) for a > 0."""
    if not a > 0:
        raise DomainError(f"ln_gamma requires a > 0, got {a!r}")
    return float(special.gammaln(a))


def _check_incomplete_args(a, x):
    if not a > 0:
        raise DomainError(f"Incomplete gamma requires a > 0, got a={a!r}")
    if not x >= 0:
        raise DomainError(f"Incomplete gamma requires x >= 0, got x={x!r}")


def _lower_series(a, x, budget):
    """
    Power series for the regularized lower function P(a, x).

    Returns the scaled sum; P = sum * exp(-x + a ln x - ln Gamma(a)).
    """
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(budget.max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) <= max(budget.abs_tol, budget.rel_tol * abs(total)):
            return total
    raise ConvergenceError(f"Incomplete gamma series did not converge for a={a}, x={x}")


def _upper_continued_fraction(a, x, budget):
    """
    Modified Lentz evaluation of the continued fraction for Gamma(a, x).

    Returns h with Gamma(a, x) = h * exp(-x + a ln x).
    """
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, budget.max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= budget.rel_tol:
            return h
    raise ConvergenceError(f"Incomplete gamma continued fraction did not converge for a={a}, x={x}")


def regularized_lower_gamma(a, x, budget=DEFAULT_BUDGET):
    """
    Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).

    Accurate in relative terms for small x, where P is tiny; the Erlang
    and gamma CDFs are built on it.
    """
    _check_incomplete_args(a, x)
    if x == 0:
        return 0.0
    if x < a + 1.0:
        series = _lower_series(a, x, budget)
        return series * math.exp(-x + a * math.log(x) - ln_gamma(a))
    return 1.0 - regularized_upper_gamma(a, x, budget)


def regularized_upper_gamma(a, x, budget=DEFAULT_BUDGET):
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    _check_incomplete_args(a, x)
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - regularized_lower_gamma(a, x, budget)
    h = _upper_continued_fraction(a, x, budget)
    return h * math.exp(-x + a * math.log(x) - ln_gamma(a))


def log_upper_incomplete_gamma(a, x, budget=DEFAULT_BUDGET):
    """
    ln Gamma(a, x).

    Stays finite where Gamma(a, x) itself underflows, so products such as
    exp(c) * Gamma(a, x) with large c can be formed in log space.
    """
    _check_incomplete_args(a, x)
    if x == 0:
        return ln_gamma(a)
    if x < a + 1.0:
        lower = _lower_series(a, x, budget) * math.exp(-x + a * math.log(x) - ln_gamma(a))
        return math.log1p(-lower) + ln_gamma(a)
    h = _upper_continued_fraction(a, x, budget)
    return -x + a * math.log(x) + math.log(h)


def upper_incomplete_gamma(a, x, budget=DEFAULT_BUDGET):
    """
    Upper incomplete gamma function Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.

    Args:
        a: Shape, a > 0
        x: Lower limit, x >= 0
        budget: AccuracyBudget for the series / continued fraction

    Returns:
        float: Gamma(a, x); equals Gamma(a) at x = 0
    """
    return math.exp(log_upper_incomplete_gamma(a, x, budget))


def lower_incomplete_gamma(a, x, budget=DEFAULT_BUDGET):
    """Lower incomplete gamma function gamma(a, x) = Gamma(a) - Gamma(a, x)."""
    return regularized_lower_gamma(a, x, budget) * math.exp(ln_gamma(a))


# ============================================================================
# BESSEL FUNCTIONS
# ============================================================================

def bessel_k0(x):
    """
    Modified Bessel function of the second kind, order zero.

    Underflows to 0.0 for x beyond roughly 700.
    """
    if not x > 0:
        raise DomainError(f"bessel_k0 requires x > 0, got {x!r}")
    return float(special.k0(x))


def bessel_k1(x):
    """Modified Bessel function of the second kind, order one."""
    if not x > 0:
        raise DomainError(f"bessel_k1 requires x > 0, got {x!r}")
    return float(special.k1(x))


def log_bessel_k0(x):
    """ln K0(x), finite for every x > 0 (uses the exponentially scaled K0)."""
    if not x > 0:
        raise DomainError(f"log_bessel_k0 requires x > 0, got {x!r}")
    return math.log(float(special.k0e(x))) - x


# ============================================================================
# COMBINATORICS
# ============================================================================

def binomial(n, i):
    """
    Binomial coefficient C(n, i).

    Returns an exact int for n <= 60 and a float from ln_gamma otherwise.
    """
    if int(n) != n or int(i) != i or n < 0 or i < 0:
        raise DomainError(f"binomial requires nonnegative integers, got ({n!r}, {i!r})")
    n, i = int(n), int(i)
    if i > n:
        raise DomainError(f"binomial requires i <= n, got ({n}, {i})")
    if n <= EXACT_BINOMIAL_LIMIT:
        return int(special.comb(n, i, exact=True))
    return math.exp(ln_gamma(n + 1) - ln_gamma(i + 1) - ln_gamma(n - i + 1))
