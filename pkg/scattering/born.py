"""
Linearized (Born) scattering operator on a ScatterGeometry.

    forward   Λ(r_i, s_j) = Σ_y e^{−iω(r_i − s_j)·y} η(y) Δy
    adjoint   image(y)    = Σ_{i,j} e^{+iω(r_i − s_j)·y} Λ(r_i, s_j) Δθ²

With the medium inner product weighted by Δy and the measurement inner
product weighted by Δθ², the two maps are exact discrete adjoints.
The phase matrix is built once per operator; each application is one
matrix-vector product.
"""

import logging

import numpy as np

from scattering.geometry import ScatterGeometry

logger = logging.getLogger(__name__)


class BornOperator:
    """
    Matrix-free view of F : medium (n_y, n_y) → measurement (n_dir, n_dir).

    Rows of the phase matrix are ordered (receiver i, source j), columns
    row-major over the medium grid.
    """

    def __init__(self, geometry: ScatterGeometry):
        self.geometry = geometry
        dirs = geometry.directions()
        offsets = (dirs[:, None, :] - dirs[None, :, :]).reshape(-1, 2)      # r_i − s_j
        self._phase = np.exp(-1j * geometry.omega * (offsets @ geometry.medium_points().T))
        logger.debug(f"Born operator: {self._phase.shape[0]} measurements × {self._phase.shape[1]} cells")

    @property
    def inshape(self) -> tuple[int, int]:
        return self.geometry.medium_shape

    @property
    def outshape(self) -> tuple[int, int]:
        return self.geometry.measurement_shape

    def _check(self, x: np.ndarray, shape: tuple[int, int], what: str) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != shape:
            raise ValueError(f"{what} has shape {x.shape}, geometry expects {shape}")
        return x

    def forward(self, eta: np.ndarray) -> np.ndarray:
        eta = self._check(eta, self.inshape, "Medium")
        return (self._phase @ eta.ravel() * self.geometry.cell_area).reshape(self.outshape)

    def adjoint(self, data: np.ndarray) -> np.ndarray:
        data = self._check(data, self.outshape, "Measurement")
        image = self._phase.conj().T @ data.ravel() * self.geometry.measurement_weight
        return image.reshape(self.inshape)

    def normal(self, eta: np.ndarray) -> np.ndarray:
        """F*F η."""
        return self.adjoint(self.forward(eta))

    def medium_inner(self, a: np.ndarray, b: np.ndarray) -> complex:
        return complex(np.vdot(b, a) * self.geometry.cell_area)

    def measurement_inner(self, a: np.ndarray, b: np.ndarray) -> complex:
        return complex(np.vdot(b, a) * self.geometry.measurement_weight)

    # short aliases
    A = forward
    As = adjoint


def born_forward(eta: np.ndarray, geometry: ScatterGeometry) -> np.ndarray:
    return BornOperator(geometry).forward(eta)


def born_adjoint(data: np.ndarray, geometry: ScatterGeometry) -> np.ndarray:
    return BornOperator(geometry).adjoint(data)
