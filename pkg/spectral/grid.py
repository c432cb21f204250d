"""
Grid and spectrum value types, and the operations between them.

    ComplexGrid  samples g(x_j) on x_j = j/s over [0,1)^d, d ∈ {1, 2}
    Spectrum     centered coefficients c_k, k ∈ [−⌊m/2⌋, ⌈m/2⌉−1] per axis

These wrap the array primitives in spectral.transforms with validation. Model
code works on tape nodes and calls the primitives through autodiff ops; this
module is the typed surface for data preparation, tests and tooling.
"""

import enum
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from spectral import transforms


@dataclass(frozen=True)
class ComplexGrid:
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.ndim not in (1, 2):
            raise ValueError(f"Grid must be 1-D or 2-D, got shape {values.shape}")
        if min(values.shape) < 2:
            raise ValueError(f"Grid needs at least 2 points per axis, got {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.values.shape

    def coords(self) -> np.ndarray:
        return grid_coords(self.sizes)


@dataclass(frozen=True)
class Spectrum:
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.ndim not in (1, 2):
            raise ValueError(f"Spectrum must be 1-D or 2-D, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    @property
    def modes(self) -> tuple[int, ...]:
        return self.coeffs.shape

    def wavenumbers(self, axis: int = 0) -> np.ndarray:
        return centered_wavenumbers(self.modes[axis])

    def coeff(self, *k: int) -> complex:
        """Coefficient at integer wavenumber(s) k."""
        idx = tuple(n // 2 + kk for n, kk in zip(self.modes, k))
        return complex(self.coeffs[idx])


def centered_wavenumbers(n: int) -> np.ndarray:
    """Ascending k = −⌊n/2⌋ … ⌈n/2⌉−1."""
    return np.arange(n) - n // 2


def grid_coords(sizes: Sequence[int]) -> np.ndarray:
    """Row-major list of grid points x_j = j/s, shape (∏ sizes, d)."""
    axes = [np.arange(s) / s for s in sizes]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def fft_forward(g: ComplexGrid) -> Spectrum:
    return Spectrum(transforms.centered_fft(g.values, g.dim))


def fft_inverse(sp: Spectrum, s: int | Sequence[int]) -> ComplexGrid:
    sizes = transforms.as_sizes(s, sp.dim)
    if any(n < m for n, m in zip(sizes, sp.modes)):
        raise ValueError(f"Target size {sizes} is smaller than {sp.modes} modes: truncate first")
    return ComplexGrid(transforms.synthesize(sp.coeffs, sizes, sp.dim))


def truncate(sp: Spectrum, m: int | Sequence[int]) -> Spectrum:
    modes = transforms.as_sizes(m, sp.dim)
    if any(k < 2 for k in modes):
        raise ValueError(f"Need at least 2 modes per axis, got {modes}")
    return Spectrum(transforms.truncate_modes(sp.coeffs, modes, sp.dim))


def pad(sp: Spectrum, s: int | Sequence[int]) -> Spectrum:
    return Spectrum(transforms.pad_modes(sp.coeffs, s, sp.dim))


class ResampleMethod(str, enum.Enum):
    SPECTRAL = "spectral"
    BILINEAR = "bilinear"


ArrayResampler = Callable[[np.ndarray, tuple[int, ...], int], np.ndarray]

_RESAMPLERS: dict[ResampleMethod, ArrayResampler] = {
    ResampleMethod.SPECTRAL: transforms.resample_spectral,
    ResampleMethod.BILINEAR: transforms.resample_linear,
}


def get_resampler(method: ResampleMethod | str) -> ArrayResampler:
    """Look up an array resampler. Raises ValueError if the method is unknown."""
    try:
        return _RESAMPLERS[ResampleMethod(method)]
    except ValueError:
        raise ValueError(
            f"Unknown resample method: '{method}'. Available: {[m.value for m in _RESAMPLERS]}"
        ) from None


def resample(g: ComplexGrid, s: int | Sequence[int],
             method: ResampleMethod | str = ResampleMethod.SPECTRAL) -> ComplexGrid:
    sizes = transforms.as_sizes(s, g.dim)
    if any(n < 2 for n in sizes):
        raise ValueError(f"Target grid needs at least 2 points per axis, got {sizes}")
    return ComplexGrid(get_resampler(method)(g.values, sizes, g.dim))


def resample_array(x: np.ndarray, sizes: int | Sequence[int], ndim: int,
                   method: ResampleMethod | str = ResampleMethod.SPECTRAL) -> np.ndarray:
    """
    Resample the trailing `ndim` axes of a batch of real or complex fields.

    Real input gives real output (the spectral path keeps the real part;
    an unpaired Nyquist mode is the only source of an imaginary residue).
    Same-size requests return an unmodified copy.
    """
    sizes = transforms.as_sizes(sizes, ndim)
    if sizes == transforms.trailing_sizes(x, ndim):
        return np.array(x, copy=True)
    out = get_resampler(method)(x, sizes, ndim)
    if not np.iscomplexobj(x):
        out = np.real(out)
    return np.array(out, copy=True)
