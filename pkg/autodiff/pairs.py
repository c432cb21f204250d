"""
Complex values as real pairs.

A complex array is stored as a float64 array whose trailing axis has length 2
(re, im). Every differentiable op works on these real arrays; complex
arithmetic is done by viewing them as complex128 for the duration of one op.
"""

import numpy as np

from autodiff.errors import ShapeError


def to_complex(x: np.ndarray) -> np.ndarray:
    return x[..., 0] + 1j * x[..., 1]


def to_pairs(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    return np.stack([z.real, z.imag], axis=-1).astype(np.float64)


def require_pairs(shape: tuple[int, ...], what: str) -> None:
    if len(shape) == 0 or shape[-1] != 2:
        raise ShapeError(f"{what} must be a complex (…, 2) array, got shape {shape}")
