"""
Diversity Orders
================
This module contains:
1. DiversityReport - theoretical order next to the slope fitted on a curve
2. diversity_order - N + 1 (perfect) or (N + 3) / 2 (one-bit), as a Fraction
3. estimate_slope - least-squares -d log10 P / d log10 gamma_t
4. diversity_report - evaluate a curve, fit it and compare
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from channel.geometry import PhaseMode, SystemConfig
from core.exceptions import DomainError, InsufficientPointsError
from outage.engines import outage

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiversityReport:
    mode: str
    n_elements: int
    theoretical_order: Fraction
    fitted_slope: float
    fit_range_db: tuple
    method: str = ''
    n_points: int = 0

    def __post_init__(self):
        if self.theoretical_order != diversity_order(self.mode, self.n_elements):
            raise DomainError(
                f"Theoretical order {self.theoretical_order} does not match mode {self.mode!r}, N={self.n_elements}"
            )

    @property
    def relative_error(self):
        order = float(self.theoretical_order)
        return abs(self.fitted_slope - order) / order


def diversity_order(mode, n):
    """
    High-SNR slope of the outage curve.

    Args:
        mode: 'perfect' or 'one_bit'
        n: Number of IRS elements, n >= 1

    Returns:
        Fraction: N + 1 for perfect alignment, (N + 3) / 2 for one-bit
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    mode = PhaseMode(mode)
    if mode == PhaseMode.PERFECT:
        return Fraction(int(n) + 1)
    return Fraction(int(n) + 3, 2)


def fit_points(curve, fit_range_db=None, p_range=None):
    """
    Curve points with P > 0 inside the optional dB and probability windows.

    Either end of fit_range_db may be None (unbounded).
    """
    points = curve.valid_points()
    if fit_range_db is not None:
        low, high = fit_range_db
        points = [
            p for p in points
            if (low is None or p.gamma_t_db >= low) and (high is None or p.gamma_t_db <= high)
        ]
    if p_range is not None:
        p_min, p_max = p_range
        points = [p for p in points if p_min <= p.p_out <= p_max]
    return points


def estimate_slope(curve, fit_range_db=None, p_range=None):
    """
    Negated least-squares slope of log10 P against log10 gamma_t.

    Args:
        curve: OutageCurve
        fit_range_db: Optional (low, high) gamma_t window in dB, inclusive
        p_range: Optional (p_min, p_max) window on the probability, inclusive

    Raises:
        InsufficientPointsError: Fewer than two usable points in the window
    """
    points = fit_points(curve, fit_range_db, p_range)
    if len(points) < 2:
        raise InsufficientPointsError(
            f"Slope fit on '{curve.method}' needs at least two points, found {len(points)}"
        )

    x = np.array([p.gamma_t_db / 10.0 for p in points])
    y = np.log10([p.p_out for p in points])
    slope, _ = np.polyfit(x, y, 1)
    return -float(slope)


def diversity_report(mode, cfg, engine='analytic', fit_range_db=None, p_range=None, q=None, workers=1):
    """
    Evaluate the curve for mode on cfg's grid and fit its slope.

    Args:
        mode: 'perfect' or 'one_bit'
        cfg: SystemConfig with the sweep grid
        engine: 'analytic' (cdf_H / cdf_G2) or 'asymptotic' (leading order)
        fit_range_db, p_range: Windows passed to estimate_slope

    Returns:
        DiversityReport
    """
    mode = PhaseMode(mode)
    if not isinstance(cfg, SystemConfig):
        raise DomainError("diversity_report needs a SystemConfig")
    if engine == 'analytic':
        method = mode.value
    elif engine == 'asymptotic':
        method = f'asymptotic_{mode.value}'
    else:
        raise DomainError(f"Unknown engine {engine!r}")

    curve = outage(method, cfg, q, workers=workers)
    slope = estimate_slope(curve, fit_range_db, p_range)
    used = [p.gamma_t_db for p in fit_points(curve, fit_range_db, p_range)]
    report = DiversityReport(
        mode=mode.value,
        n_elements=cfg.n_elements,
        theoretical_order=diversity_order(mode, cfg.n_elements),
        fitted_slope=slope,
        fit_range_db=(min(used), max(used)),
        method=method,
        n_points=len(used),
    )
    logger.info(
        "%s N=%d: theoretical %s, fitted %.4f over %s dB",
        method, cfg.n_elements, report.theoretical_order, slope, report.fit_range_db,
    )
    return report
