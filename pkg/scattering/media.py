"""
Point-like scattering media: sums of isotropic Gaussians on the medium grid.

    η(y) = Σ_p A_p exp(−‖y − c_p‖² / (2σ_p²))
"""

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from scattering.geometry import ScatterGeometry

logger = logging.getLogger(__name__)


class MediaRanges(BaseModel):
    """Sampling ranges for gen_point_media; every range is [lo, hi]."""
    n_points: tuple[int, int] = Field(default=(2, 4), description="Point count, inclusive")
    amplitude: tuple[float, float] = (0.5, 1.5)
    width: tuple[float, float] = Field(default=(0.02, 0.08), description="Gaussian σ")
    center: tuple[float, float] = Field(default=(-0.3, 0.3), description="Per-axis center range")

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _ordered(self) -> "MediaRanges":
        for name in ("n_points", "amplitude", "width", "center"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range is reversed: ({lo}, {hi})")
        if self.n_points[0] < 0 or self.width[0] <= 0:
            raise ValueError("Point counts must be ≥ 0 and widths > 0")
        if self.center[0] < -0.5 or self.center[1] > 0.5:
            raise ValueError(f"Centers {self.center} leave the domain [−0.5, 0.5]")
        return self


def point_medium(geometry: ScatterGeometry, centers: Sequence[Sequence[float]],
                 amplitudes: Sequence[float], widths: Sequence[float]) -> np.ndarray:
    if not len(centers) == len(amplitudes) == len(widths):
        raise ValueError(f"Got {len(centers)} centers, {len(amplitudes)} amplitudes and {len(widths)} widths")
    y1, y2 = np.meshgrid(geometry.nodes(), geometry.nodes(), indexing="ij")
    eta = np.zeros(geometry.medium_shape)
    for (c1, c2), a, sigma in zip(centers, amplitudes, widths):
        eta += a * np.exp(-((y1 - c1) ** 2 + (y2 - c2) ** 2) / (2 * sigma ** 2))
    return eta


def gen_point_media(rng: np.random.Generator, geometry: ScatterGeometry,
                    ranges: MediaRanges | None = None) -> np.ndarray:
    ranges = ranges or MediaRanges()
    n = int(rng.integers(ranges.n_points[0], ranges.n_points[1] + 1))
    centers = rng.uniform(*ranges.center, size=(n, 2))
    amplitudes = rng.uniform(*ranges.amplitude, size=n)
    widths = rng.uniform(*ranges.width, size=n)
    return point_medium(geometry, centers, amplitudes, widths)
