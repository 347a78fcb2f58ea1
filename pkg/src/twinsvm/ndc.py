"""Synthetic binary classification data built from normally distributed clusters.

The procedure: draw a random unit direction ``u`` and a threshold; scatter
cluster centers from a standard Gaussian; draw each sample as its cluster
center plus unit Gaussian noise; label by the sign of ``x·u − threshold``;
shift each sample half the separation along ``u`` toward its class side;
finally flip a fixed fraction of labels.  Centers (and flips) are resampled
until the class balance lands in [40%, 60%].  Everything is driven by one
seeded generator, so output is deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ValidationError

_BALANCE_LOW = 0.40
_BALANCE_HIGH = 0.60
# after this many unbalanced draws the threshold falls back to the median
# projection, which forces an almost even split
_MEDIAN_FALLBACK_AFTER = 100


@dataclass(frozen=True)
class NdcConfig:
    """Size and shape of the generated problem."""

    n: int
    d: int
    cluster_count: int = 10
    separation: float = 2.0
    noise_fraction: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValidationError("n must be at least 2")
        if self.n == 3:
            raise ValidationError(
                "n=3 cannot satisfy the 40-60% class balance; use n=2 or n>=4"
            )
        if self.d < 1:
            raise ValidationError("d must be at least 1")
        if self.cluster_count < 1:
            raise ValidationError("cluster_count must be at least 1")
        if not (np.isfinite(self.separation) and self.separation >= 0):
            raise ValidationError("separation must be a nonnegative finite number")
        if not 0.0 <= self.noise_fraction < 0.5:
            raise ValidationError("noise_fraction must lie in [0, 0.5)")


def generate(cfg: NdcConfig) -> Dataset:
    """Generate a labeled dataset per the module's documented procedure."""
    rng = np.random.default_rng(cfg.seed)
    u = rng.standard_normal(cfg.d)
    u /= np.linalg.norm(u)
    threshold = rng.uniform(-0.5, 0.5)
    flip_count = int(np.floor(cfg.noise_fraction * cfg.n))

    attempt = 0
    while True:
        centers = rng.standard_normal((2 * cfg.cluster_count, cfg.d))
        assignment = rng.integers(0, centers.shape[0], size=cfg.n)
        points = centers[assignment] + rng.standard_normal((cfg.n, cfg.d))

        projections = points @ u
        cut = threshold
        if attempt >= _MEDIAN_FALLBACK_AFTER:
            cut = float(np.median(projections))
        side = np.where(projections >= cut, 1, -1)

        samples = points + (cfg.separation / 2.0) * side[:, None] * u
        labels = side.copy()
        if flip_count:
            flip = rng.choice(cfg.n, size=flip_count, replace=False)
            labels[flip] = -labels[flip]

        positive = float(np.mean(labels == 1))
        if _BALANCE_LOW <= positive <= _BALANCE_HIGH:
            return Dataset.from_arrays(samples, labels)
        attempt += 1
