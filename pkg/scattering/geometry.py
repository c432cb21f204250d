"""
Measurement geometry for the linearized scattering problem.

The medium lives on an n_y × n_y midpoint grid over [−0.5, 0.5]². Sources
and receivers sit on the unit circle at n_dir uniform angles. Node i on
each axis is y_i = −0.5 + i/n_y, so node n_y/2 is the origin.
"""

import math

import numpy as np
from pydantic import BaseModel, Field, model_validator


class ScatterGeometry(BaseModel):
    n_y: int = Field(default=24, ge=8, description="Medium grid points per axis")
    n_dir: int = Field(default=16, ge=4, description="Source and receiver angles on [0, 2π)")
    omega: float = Field(default=4 * math.pi, gt=0, description="Frequency in radians")

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _nyquist(self) -> "ScatterGeometry":
        if self.omega * self.spacing >= math.pi:
            raise ValueError(
                f"omega={self.omega:.4g} is too high for n_y={self.n_y}: "
                f"omega·(1/n_y) must stay below π"
            )
        return self

    @property
    def spacing(self) -> float:
        return 1.0 / self.n_y

    @property
    def cell_area(self) -> float:
        """Δy, the medium quadrature weight."""
        return self.spacing ** 2

    @property
    def angle_step(self) -> float:
        return 2 * math.pi / self.n_dir

    @property
    def measurement_weight(self) -> float:
        """Δθ², the measurement quadrature weight."""
        return self.angle_step ** 2

    @property
    def medium_shape(self) -> tuple[int, int]:
        return self.n_y, self.n_y

    @property
    def measurement_shape(self) -> tuple[int, int]:
        return self.n_dir, self.n_dir

    def nodes(self) -> np.ndarray:
        return -0.5 + np.arange(self.n_y) / self.n_y

    def medium_points(self) -> np.ndarray:
        """(n_y², 2) coordinates, row-major over (y₁, y₂)."""
        y1, y2 = np.meshgrid(self.nodes(), self.nodes(), indexing="ij")
        return np.stack([y1.ravel(), y2.ravel()], axis=1)

    def directions(self) -> np.ndarray:
        """(n_dir, 2) unit vectors (cos θ, sin θ)."""
        theta = np.arange(self.n_dir) * self.angle_step
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)

    def manifest(self) -> dict[str, str]:
        return {"n_y": str(self.n_y), "n_dir": str(self.n_dir), "omega": self.omega.hex()}

    @classmethod
    def from_manifest(cls, fields: dict[str, str]) -> "ScatterGeometry":
        return cls(n_y=int(fields["n_y"]), n_dir=int(fields["n_dir"]), omega=float.fromhex(fields["omega"]))
