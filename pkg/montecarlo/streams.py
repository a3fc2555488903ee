"""
Random Streams
==============
This module contains:
1. substream - Philox generator keyed by (seed, grid point, chunk)
2. chunk_sizes - fixed partition of a sample budget
3. McConfig / McEstimate - sampling parameters and binomial estimates

Every chunk owns its own counter-based stream, so the hit count of a grid
point is the same whichever thread draws which chunk.
"""

import math
from dataclasses import dataclass

from django.core.exceptions import ValidationError
from numpy.random import Generator, Philox, SeedSequence

CHUNK_SIZE = 65536

SEED_LIMIT = 2 ** 64


def substream(seed, point, chunk):
    """Philox stream for chunk `chunk` of grid point `point`."""
    return Generator(Philox(SeedSequence(entropy=int(seed), spawn_key=(int(point), int(chunk)))))


def chunk_sizes(n_samples, chunk_size=CHUNK_SIZE):
    full, rest = divmod(int(n_samples), chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class McConfig:
    seed: int
    n_samples: int
    n_streams: int = 1

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < SEED_LIMIT:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ValidationError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if int(self.n_streams) != self.n_streams or self.n_streams < 1:
            raise ValidationError(f"n_streams must be a positive integer, got {self.n_streams!r}")

    @staticmethod
    def samples_for_target(p, rel_err):
        """
        Samples needed for a relative standard error rel_err at probability p.

        Args:
            p: Anticipated outage probability, 0 < p < 1
            rel_err: Target std_err / p

        Returns:
            int: ceil((1 - p) / (p rel_err^2))
        """
        if not (0.0 < p < 1.0 and rel_err > 0):
            raise ValidationError("samples_for_target needs 0 < p < 1 and rel_err > 0.")
        return math.ceil((1.0 - p) / (p * rel_err ** 2))


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    std_err: float
    n_samples: int
    seed: int

    @classmethod
    def from_counts(cls, hits, n_samples, seed):
        p_hat = hits / n_samples
        return cls(
            p_hat=p_hat,
            std_err=math.sqrt(p_hat * (1.0 - p_hat) / n_samples),
            n_samples=n_samples,
            seed=seed,
        )
