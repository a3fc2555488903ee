"""
Outage Curves
=============
This module contains:
1. CurvePoint / OutageCurve - one method's outage probability over a gamma_t grid
2. crossing_snr_db - gamma_t (dB) at which a curve crosses a target probability
3. snr_gap_db - horizontal dB gap between two curves (one-bit penalty, coding gain)
"""

import math
from dataclasses import dataclass, field

from core.exceptions import DomainError


@dataclass(frozen=True)
class CurvePoint:
    """A single grid point; p_out is None when the engine failed there."""
    gamma_t_db: float
    p_out: float = None
    std_err: float = None
    n_samples: int = None
    seed: int = None
    error: str = ''

    @property
    def failed(self):
        return self.p_out is None


@dataclass(frozen=True)
class OutageCurve:
    method: str
    n_elements: int
    sigma_d: float
    gamma_th_db: float
    points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        points = tuple(self.points)
        grid = [p.gamma_t_db for p in points]
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("Curve grid must be strictly increasing.")
        for p in points:
            if p.p_out is not None and not 0.0 <= p.p_out <= 1.0:
                raise DomainError(f"Outage probability {p.p_out!r} outside [0, 1] at {p.gamma_t_db} dB")
        object.__setattr__(self, 'points', points)

    @property
    def grid_db(self):
        return [p.gamma_t_db for p in self.points]

    @property
    def probabilities(self):
        return [p.p_out for p in self.points]

    def valid_points(self):
        """Points with a usable, strictly positive probability (log-scale safe)."""
        return [p for p in self.points if p.p_out is not None and p.p_out > 0]

    def failures(self):
        return [p for p in self.points if p.failed]


def crossing_snr_db(curve, p_target):
    """
    First gamma_t (dB) where the curve falls to p_target.

    Interpolates linearly in (gamma_t_db, log10 P) between the bracketing points.

    Raises:
        DomainError: If the curve never crosses p_target
    """
    if not 0.0 < p_target < 1.0:
        raise DomainError(f"Target probability must lie in (0, 1), got {p_target!r}")
    target = math.log10(p_target)
    points = curve.valid_points()
    for left, right in zip(points, points[1:]):
        if left.p_out >= p_target >= right.p_out:
            y0, y1 = math.log10(left.p_out), math.log10(right.p_out)
            if y0 == y1:
                return left.gamma_t_db
            frac = (y0 - target) / (y0 - y1)
            return left.gamma_t_db + frac * (right.gamma_t_db - left.gamma_t_db)
    raise DomainError(f"Curve '{curve.method}' does not cross P={p_target:g} on its grid")


def snr_gap_db(curve_a, curve_b, p_target):
    """SNR (dB) curve_b needs beyond curve_a to reach p_target."""
    return crossing_snr_db(curve_b, p_target) - crossing_snr_db(curve_a, p_target)
