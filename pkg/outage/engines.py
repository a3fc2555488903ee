"""
Outage Engines
==============
This module contains:
1. cdf_H - CDF of the perfect-alignment amplitude H = S + R
2. cdf_G2 - CDF of the one-bit power |G|^2 = (X + R)^2 + Y^2 (X, Y independent)
3. clt_outage_perfect - Gaussian baseline for the perfect-alignment case
4. outage / outage_at - gamma_t sweeps for every analytic method
5. snr_for_outage, rounding_discrepancy - inverse lookup and shape-rounding error
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

from django.db import models
from scipy import optimize, stats

from asymptotics import leading
from channel.geometry import PhaseMode, db_to_linear, gain_threshold
from core.exceptions import DomainError, IrsLabError
from core.numerics import QuadratureSpec, clamp_probability, integrate
from fading.distributions import (
    GammaShapeScale,
    exact_sum_pdf,
    gamma_surrogate,
    rounded_shape,
    y2_pdf_substituted,
)
from outage.curves import CurvePoint, OutageCurve
from outage.lemmas import erlang_rayleigh_cdf, lemma1_cdf, mass_points

logger = logging.getLogger(__name__)


class CdfMode(models.TextChoices):
    PROP1_CLOSED = 'prop1_closed', 'Closed form (rounded shape)'
    LEMMA1_QUADRATURE = 'lemma1_quadrature', 'Surrogate plus Rayleigh by quadrature'
    EXACT_QUADRATURE = 'exact_quadrature', 'Exact double-Rayleigh sum (N <= 2)'


class OutageMethod(models.TextChoices):
    PERFECT = 'perfect', 'Perfect phase alignment'
    ONE_BIT = 'one_bit', 'One-bit phase alignment'
    CLT_PERFECT = 'clt_perfect', 'CLT baseline (perfect)'
    ASYMPTOTIC_PERFECT = 'asymptotic_perfect', 'Leading order (perfect)'
    ASYMPTOTIC_ONE_BIT = 'asymptotic_one_bit', 'Leading order (one-bit)'


PHASE_MODE_FOR_METHOD = {
    OutageMethod.PERFECT: PhaseMode.PERFECT,
    OutageMethod.CLT_PERFECT: PhaseMode.PERFECT,
    OutageMethod.ASYMPTOTIC_PERFECT: PhaseMode.PERFECT,
    OutageMethod.ONE_BIT: PhaseMode.ONE_BIT,
    OutageMethod.ASYMPTOTIC_ONE_BIT: PhaseMode.ONE_BIT,
}


# ============================================================================
# CDF ENGINES
# ============================================================================

def cdf_H(t, n, sigma_d, q=None, mode=CdfMode.PROP1_CLOSED, exact_shape=False):
    """
    CDF of H = S + R, S the sum of n double-Rayleigh paths.

    Args:
        t: Evaluation point, t >= 0
        n: Number of IRS elements, n >= 1
        sigma_d: Direct-link Rayleigh scale
        q: QuadratureSpec
        mode: prop1_closed (gamma surrogate with rounded shape, closed form),
            lemma1_quadrature (same surrogate, by quadrature) or
            exact_quadrature (true double-Rayleigh sum, n <= 2)
        exact_shape: lemma1_quadrature only; use n k instead of the rounded shape

    Returns:
        float: F_H(t) in [0, 1]
    """
    if n < 1:
        raise DomainError(f"cdf_H requires n >= 1, got {n!r}")
    if not sigma_d > 0:
        raise DomainError(f"sigma_d must be positive, got {sigma_d!r}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if t == 0:
        return 0.0
    if math.isinf(t):
        return 1.0

    q = q or QuadratureSpec.default()
    surrogate = gamma_surrogate()

    if mode == CdfMode.PROP1_CLOSED:
        return erlang_rayleigh_cdf(t, rounded_shape(n), surrogate.theta, sigma_d, q)

    if mode == CdfMode.LEMMA1_QUADRATURE:
        shape = n * surrogate.k if exact_shape else rounded_shape(n)
        law = GammaShapeScale(shape, surrogate.theta)
        points = mass_points(law.mean, math.sqrt(law.variance))
        return lemma1_cdf(law.pdf, law.cdf, sigma_d, t, q, points)

    if mode == CdfMode.EXACT_QUADRATURE:
        if n > 2:
            raise DomainError(f"exact_quadrature supports n <= 2, got {n}")
        points = mass_points(n * math.pi / 2.0, math.sqrt(n * (4.0 - math.pi ** 2 / 4.0)))
        return lemma1_cdf(lambda s: exact_sum_pdf(s, n, q), lambda s: 0.0, sigma_d, t, q, points)

    raise DomainError(f"Unknown cdf_H mode {mode!r}")


def cdf_G2(t, n, sigma_d, q=None):
    """
    CDF of |G|^2 under one-bit alignment, treating X and Y as independent.

    F(t) = int_0^sqrt(t) 2 f_Y(u) F_{X+R}(sqrt(t - u^2)) du

    where X ~ Erlang(n, 1) and F_{X+R} is the Erlang-Rayleigh closed form.
    """
    if n < 1:
        raise DomainError(f"cdf_G2 requires n >= 1, got {n!r}")
    if not sigma_d > 0:
        raise DomainError(f"sigma_d must be positive, got {sigma_d!r}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if t == 0:
        return 0.0
    if math.isinf(t):
        return 1.0

    q = q or QuadratureSpec.default()
    root = math.sqrt(t)

    def integrand(u):
        rest = t - u * u
        if rest <= 0:
            return 0.0
        return y2_pdf_substituted(u, n) * erlang_rayleigh_cdf(math.sqrt(rest), n, 1.0, sigma_d, q)

    # Y has spread of order sqrt(n)
    points = tuple(math.sqrt(n) * s for s in (1.0, 4.0, 16.0))
    return clamp_probability(integrate(integrand, 0.0, root, q, points), 'one-bit CDF')


# ============================================================================
# CLT BASELINE
# ============================================================================

def clt_moments(n, sigma_d):
    """Exact mean and variance of H = S + R."""
    mean = n * math.pi / 2.0 + sigma_d * math.sqrt(math.pi / 2.0)
    variance = n * (4.0 - math.pi ** 2 / 4.0) + sigma_d ** 2 * (2.0 - math.pi / 2.0)
    return mean, variance


def clt_cdf_H(t, n, sigma_d):
    mean, variance = clt_moments(n, sigma_d)
    return float(stats.norm.cdf(t, loc=mean, scale=math.sqrt(variance)))


def clt_outage_perfect(cfg, gamma_t_db):
    """Gaussian approximation of the perfect-alignment outage probability."""
    t = gain_threshold(cfg.gamma_th_db, gamma_t_db, PhaseMode.PERFECT)
    return clt_cdf_H(t, cfg.n_elements, cfg.sigma_d)


# ============================================================================
# OUTAGE SWEEPS
# ============================================================================

def direct_link_outage(cfg, gamma_t_db):
    """N = 0: the link is a single Rayleigh path."""
    ratio = db_to_linear(cfg.gamma_th_db - gamma_t_db)
    return -math.expm1(-ratio / (2.0 * cfg.sigma_d ** 2))


def outage_at(method, cfg, gamma_t_db, q=None):
    """Outage probability of one method at one transmit SNR."""
    if method not in PHASE_MODE_FOR_METHOD:
        raise DomainError(f"Unknown outage method {method!r}")
    if cfg.n_elements == 0:
        return direct_link_outage(cfg, gamma_t_db)

    t = gain_threshold(cfg.gamma_th_db, gamma_t_db, PHASE_MODE_FOR_METHOD[method])
    n, sigma = cfg.n_elements, cfg.sigma_d
    if method == OutageMethod.PERFECT:
        return cdf_H(t, n, sigma, q)
    if method == OutageMethod.ONE_BIT:
        return cdf_G2(t, n, sigma, q)
    if method == OutageMethod.CLT_PERFECT:
        return clt_cdf_H(t, n, sigma)
    if method == OutageMethod.ASYMPTOTIC_PERFECT:
        return min(1.0, leading.cdf_H_leading(t, n, sigma))
    return min(1.0, leading.cdf_G2_leading(t, n, sigma))


def _evaluate_point(method, cfg, gamma_t_db, q):
    try:
        return CurvePoint(gamma_t_db=gamma_t_db, p_out=outage_at(method, cfg, gamma_t_db, q))
    except IrsLabError as exc:
        logger.warning("%s failed at gamma_t=%.2f dB: %s", method, gamma_t_db, exc)
        return CurvePoint(gamma_t_db=gamma_t_db, error=str(exc))


def outage(mode, cfg, q=None, workers=1):
    """
    Evaluate an outage curve over cfg.gamma_t_grid_db.

    Points are independent; with workers > 1 they are spread over a thread
    pool and returned in grid order. A point whose engine raises carries the
    error text instead of a probability.

    Args:
        mode: An OutageMethod value
        cfg: SystemConfig
        q: QuadratureSpec
        workers: Thread-pool size

    Returns:
        OutageCurve
    """
    q = q or QuadratureSpec.default()
    try:
        method = OutageMethod(mode)
    except ValueError:
        raise DomainError(f"Unknown outage method {mode!r}") from None
    grid = cfg.gamma_t_grid_db

    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda g: _evaluate_point(method, cfg, g, q), grid))
    else:
        points = [_evaluate_point(method, cfg, g, q) for g in grid]

    return OutageCurve(
        method=method.value,
        n_elements=cfg.n_elements,
        sigma_d=cfg.sigma_d,
        gamma_th_db=cfg.gamma_th_db,
        points=tuple(points),
    )


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def snr_for_outage(mode, cfg, p_target, bracket_db=(-60.0, 120.0), q=None):
    """
    Transmit SNR (dB) at which the method reaches p_target.

    Solved with Brent's method on log10 P over bracket_db.
    """
    if not 0.0 < p_target < 1.0:
        raise DomainError(f"Target probability must lie in (0, 1), got {p_target!r}")
    target = math.log10(p_target)

    def residual(gamma_t_db):
        p = outage_at(mode, cfg, gamma_t_db, q)
        return math.log10(max(p, 1e-300)) - target

    low, high = bracket_db
    if residual(low) * residual(high) > 0:
        raise DomainError(f"P={p_target:g} is not bracketed by {bracket_db} dB")
    return optimize.brentq(residual, low, high, xtol=1e-6)


def rounding_discrepancy(n, sigma_d, t_values, q=None):
    """Largest |F_H| difference between the rounded and the exact gamma shape."""
    worst = 0.0
    for t in t_values:
        rounded = cdf_H(t, n, sigma_d, q, mode=CdfMode.LEMMA1_QUADRATURE)
        exact = cdf_H(t, n, sigma_d, q, mode=CdfMode.LEMMA1_QUADRATURE, exact_shape=True)
        worst = max(worst, abs(rounded - exact))
    return worst
