"""
Channel Geometry and Link Budget
================================
This module contains:
1. PhaseMode - perfect or one-bit phase alignment at the surface
2. SystemGeometry - source/surface/destination distances
3. LinkBudget - linear path gains and the normalised direct-link scale
4. SystemConfig - element count, sigma_d, SNR threshold and SNR grid
5. Helper functions - path loss, dB conversions, gain thresholds

Conventions:
- Path gains follow the urban-micro NLOS model at 5 GHz:
  xi = -40.9 - 36.7 log10(d) dB.
- After normalising by the reflected-path gain, the direct link is
  Rayleigh with scale sigma_d = sqrt(2 xi_d / (xi_1 xi_2)).
- gamma_t is the transmit SNR of the normalised model.
"""

import math
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError
from django.db import models

from core.exceptions import DomainError

PATH_LOSS_INTERCEPT_DB = -40.9
PATH_LOSS_SLOPE_DB = 36.7


class PhaseMode(models.TextChoices):
    PERFECT = 'perfect', 'Perfect phase alignment'
    ONE_BIT = 'one_bit', 'One-bit phase alignment'


# ============================================================================
# GEOMETRY AND LINK BUDGET
# ============================================================================

@dataclass(frozen=True)
class SystemGeometry:
    """Distances in meters: source-surface, surface-destination, source-destination."""
    d_sr: float
    d_rd: float
    d_sd: float

    def __post_init__(self):
        for name in ('d_sr', 'd_rd', 'd_sd'):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)!r}")


# Placement used for the reference outage curves
REFERENCE_GEOMETRY = SystemGeometry(d_sr=40.0, d_rd=30.0, d_sd=50.0)

# Destination close to the source: strong direct link, shows the coding gain
STRONG_DIRECT_GEOMETRY = SystemGeometry(d_sr=40.0, d_rd=30.0, d_sd=10.0)


@dataclass(frozen=True)
class LinkBudget:
    """Linear power gains of the three hops and the resulting sigma_d."""
    xi1: float
    xi2: float
    xi_d: float
    sigma_d: float

    def __post_init__(self):
        if not (self.xi1 > 0 and self.xi2 > 0 and self.xi_d > 0):
            raise ValidationError("Link gains must be positive.")
        if not self.sigma_d > 0:
            raise ValidationError("sigma_d must be positive.")

    @classmethod
    def from_gains(cls, xi1, xi2, xi_d):
        """Build a budget with sigma_d derived from the gains."""
        return cls(xi1=xi1, xi2=xi2, xi_d=xi_d, sigma_d=direct_link_scale(xi1, xi2, xi_d))


@dataclass(frozen=True)
class SystemConfig:
    """
    Everything an outage sweep needs.

    n_elements = 0 is the direct-link-only validation mode.
    """
    n_elements: int
    sigma_d: float
    gamma_th_db: float = 0.0
    gamma_t_grid_db: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 0:
            raise ValidationError(f"n_elements must be a nonnegative integer, got {self.n_elements!r}")
        if not (self.sigma_d > 0 and math.isfinite(self.sigma_d)):
            raise ValidationError(f"sigma_d must be positive and finite, got {self.sigma_d!r}")
        if not math.isfinite(self.gamma_th_db):
            raise ValidationError("gamma_th_db must be finite.")
        grid = tuple(float(g) for g in self.gamma_t_grid_db)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("gamma_t grid must be strictly increasing.")
        object.__setattr__(self, 'n_elements', int(self.n_elements))
        object.__setattr__(self, 'gamma_t_grid_db', grid)

    @classmethod
    def from_geometry(cls, geometry, n_elements, gamma_th_db=0.0, gamma_t_grid_db=()):
        """Derive sigma_d from a geometry through the path-loss model."""
        return cls(
            n_elements=n_elements,
            sigma_d=link_budget(geometry).sigma_d,
            gamma_th_db=gamma_th_db,
            gamma_t_grid_db=gamma_t_grid_db,
        )


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def db_to_linear(value_db):
    """Convert a power ratio from dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    """Convert a positive linear power ratio to dB."""
    if not value > 0:
        raise DomainError(f"linear_to_db requires a positive value, got {value!r}")
    return 10.0 * math.log10(value)


def path_loss_db(d):
    """
    UMi NLOS path gain in dB at distance d (meters).

    Args:
        d: Distance, d > 0

    Returns:
        float: -40.9 - 36.7 log10(d)
    """
    if not d > 0:
        raise DomainError(f"Distance must be positive, got {d!r}")
    return PATH_LOSS_INTERCEPT_DB - PATH_LOSS_SLOPE_DB * math.log10(d)


def direct_link_scale(xi1, xi2, xi_d):
    """sigma_d = sqrt(2 xi_d / (xi1 xi2)) from linear gains."""
    return math.sqrt(2.0 * xi_d / (xi1 * xi2))


def link_budget(geometry):
    """Linear gains and sigma_d for a geometry."""
    return LinkBudget.from_gains(
        xi1=db_to_linear(path_loss_db(geometry.d_sr)),
        xi2=db_to_linear(path_loss_db(geometry.d_rd)),
        xi_d=db_to_linear(path_loss_db(geometry.d_sd)),
    )


def physical_to_normalized_snr_db(gamma_t_db, budget):
    """
    Map a physical transmit SNR P / sigma_w'^2 onto the normalised gamma_t.

    Normalising the receiver by sqrt(xi1 xi2) / 2 scales the noise
    variance by 4 / (xi1 xi2), so gamma_t = gamma_physical * xi1 xi2 / 4.
    """
    return gamma_t_db + linear_to_db(budget.xi1 * budget.xi2 / 4.0)


def gain_threshold(gamma_th_db, gamma_t_db, mode):
    """
    Channel-gain threshold at which the link is in outage.

    Perfect alignment compares the amplitude H against sqrt(gamma_th / gamma_t);
    one-bit alignment compares the power |G|^2 against gamma_th / gamma_t.
    """
    ratio = db_to_linear(gamma_th_db - gamma_t_db)
    if mode == PhaseMode.PERFECT:
        return math.sqrt(ratio)
    if mode == PhaseMode.ONE_BIT:
        return ratio
    raise DomainError(f"Unknown phase mode {mode!r}")
