"""
Min-max normalization with statistics taken from the training split.

One (min, max) pair per tensor role (input, output). Complex tensors are
handled on their real-pair values, so a single pair covers both parts and
both parts are shifted by the same min. Values outside the training range
map outside [0, 1]; nothing is clamped.
"""

from dataclasses import dataclass

import numpy as np


def _real_view(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    return np.stack([x.real, x.imag], axis=-1) if np.iscomplexobj(x) else x


@dataclass(frozen=True)
class RoleStats:
    lo: float
    hi: float

    @property
    def constant(self) -> bool:
        return self.hi == self.lo

    @classmethod
    def of(cls, x: np.ndarray) -> "RoleStats":
        values = _real_view(x)
        if values.size == 0:
            raise ValueError("Cannot compute normalization statistics of an empty tensor")
        if not np.all(np.isfinite(values)):
            raise ValueError("Cannot compute normalization statistics of a non-finite tensor")
        return cls(float(values.min()), float(values.max()))


@dataclass(frozen=True)
class NormStats:
    inputs: RoleStats
    outputs: RoleStats

    @classmethod
    def fit(cls, train_inputs: np.ndarray, train_outputs: np.ndarray) -> "NormStats":
        return cls(RoleStats.of(train_inputs), RoleStats.of(train_outputs))


def _shift(x: np.ndarray, lo: float) -> complex | float:
    return complex(lo, lo) if np.iscomplexobj(x) else lo


def normalize(x: np.ndarray, stats: RoleStats) -> np.ndarray:
    """x̂ = (x − min) / (max − min). Constant statistics pass a constant tensor through."""
    x = np.asarray(x)
    if stats.constant:
        values = _real_view(x)
        if values.size and np.ptp(values) > 0:
            raise ValueError(f"Statistics are degenerate (min == max == {stats.lo}) "
                             f"but the tensor is not constant")
        return np.array(x, copy=True)
    return (x - _shift(x, stats.lo)) / (stats.hi - stats.lo)


def denormalize(x_hat: np.ndarray, stats: RoleStats) -> np.ndarray:
    x_hat = np.asarray(x_hat)
    if stats.constant:
        return np.array(x_hat, copy=True)
    return x_hat * (stats.hi - stats.lo) + _shift(x_hat, stats.lo)
