"""
Channel Sampling
================
This module contains:
1. rayleigh - inverse-CDF Rayleigh variates
2. sample_components / sample_H / sample_G2 - channel statistics
3. mc_outage / mc_curve - outage frequencies over a gamma_t grid

Draw order inside a stream is fixed: |h_1n|, |h_2n|, then the residual
phases (one-bit only), then |h_sd|.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from channel.geometry import PhaseMode, gain_threshold
from core.exceptions import DomainError
from montecarlo.streams import McEstimate, chunk_sizes, substream
from outage.curves import CurvePoint, OutageCurve

logger = logging.getLogger(__name__)


def rayleigh(rng, sigma, size):
    """sigma sqrt(-2 ln(1 - U)) with U uniform on [0, 1)."""
    return sigma * np.sqrt(-2.0 * np.log1p(-rng.random(size)))


def _check(n, sigma_d):
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if sigma_d < 0:
        raise DomainError(f"sigma_d must be nonnegative, got {sigma_d!r}")


def _scalar_or_array(values, size):
    return float(values[0]) if size is None else values


def sample_H(n, sigma_d, rng, size=None):
    """H = sum_n |h_1n| |h_2n| + |h_sd| under perfect phase alignment."""
    _check(n, sigma_d)
    count = 1 if size is None else int(size)
    cascaded = rayleigh(rng, 1.0, (count, n)) * rayleigh(rng, 1.0, (count, n))
    values = cascaded.sum(axis=1) + rayleigh(rng, sigma_d, count)
    return _scalar_or_array(values, size)


def sample_components(n, sigma_d, rng, size=None):
    """
    (X, Y, R) under one-bit alignment: X + jY = sum_n |h_1n| |h_2n| e^(j phi_n),
    phi_n ~ U[-pi/2, pi/2], R = |h_sd|.
    """
    _check(n, sigma_d)
    count = 1 if size is None else int(size)
    cascaded = rayleigh(rng, 1.0, (count, n)) * rayleigh(rng, 1.0, (count, n))
    phases = rng.uniform(-math.pi / 2.0, math.pi / 2.0, (count, n))
    x = (cascaded * np.cos(phases)).sum(axis=1)
    y = (cascaded * np.sin(phases)).sum(axis=1)
    r = rayleigh(rng, sigma_d, count)
    if size is None:
        return float(x[0]), float(y[0]), float(r[0])
    return x, y, r


def sample_G2(n, sigma_d, rng, size=None):
    """|G|^2 = (X + R)^2 + Y^2; n = 0 gives R^2."""
    x, y, r = sample_components(n, sigma_d, rng, size=1 if size is None else size)
    values = (x + r) ** 2 + y ** 2
    return _scalar_or_array(values, size)


STATISTICS = {
    PhaseMode.PERFECT: sample_H,
    PhaseMode.ONE_BIT: sample_G2,
}


# ============================================================================
# OUTAGE ESTIMATION
# ============================================================================

def _count_hits(statistic, cfg, threshold, seed, point, chunk, size):
    draws = statistic(cfg.n_elements, cfg.sigma_d, substream(seed, point, chunk), size=size)
    return int(np.count_nonzero(draws < threshold))


def mc_outage(mode, cfg, mc):
    """
    Outage frequency at every point of cfg.gamma_t_grid_db.

    Perfect alignment counts H < sqrt(gamma_th / gamma_t); one-bit counts
    |G|^2 < gamma_th / gamma_t. Chunks are spread over mc.n_streams threads;
    integer hit counts make the result independent of that number.

    Returns:
        list: One McEstimate per grid point
    """
    mode = PhaseMode(mode)
    statistic = STATISTICS[mode]
    sizes = chunk_sizes(mc.n_samples)
    estimates = []

    with ThreadPoolExecutor(max_workers=mc.n_streams) as pool:
        for point, gamma_t_db in enumerate(cfg.gamma_t_grid_db):
            threshold = gain_threshold(cfg.gamma_th_db, gamma_t_db, mode)
            hits = sum(pool.map(
                lambda job: _count_hits(statistic, cfg, threshold, mc.seed, point, job[0], job[1]),
                enumerate(sizes),
            ))
            estimates.append(McEstimate.from_counts(hits, mc.n_samples, mc.seed))
            logger.debug("mc %s N=%d gamma_t=%.2f dB: %d/%d", mode.value, cfg.n_elements,
                         gamma_t_db, hits, mc.n_samples)
    return estimates


def mc_curve(mode, cfg, mc):
    """mc_outage as an OutageCurve tagged mc_<mode>."""
    mode = PhaseMode(mode)
    estimates = mc_outage(mode, cfg, mc)
    points = tuple(
        CurvePoint(gamma_t_db=g, p_out=e.p_hat, std_err=e.std_err, n_samples=e.n_samples, seed=e.seed)
        for g, e in zip(cfg.gamma_t_grid_db, estimates)
    )
    return OutageCurve(
        method=f'mc_{mode.value}',
        n_elements=cfg.n_elements,
        sigma_d=cfg.sigma_d,
        gamma_th_db=cfg.gamma_th_db,
        points=points,
    )
