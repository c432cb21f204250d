"""
The augmented training loss.

    loss = MSE(model(f), g) + λ · MSE(model(I_X f), I_Y g)

I_X resamples the inputs to a grid drawn from the configured list and I_Y
resamples the targets by the same ratio, so a pair whose input and output
grids differ keeps its shape relation. Draws that would put either grid
below m are rejected and redrawn. A draw equal to the native grid is the
identity, which makes λ = 1 exactly twice the plain MSE.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from autodiff.pairs import to_pairs
from autodiff.tape import Node, Tape
from network.model import PdIaeModel
from spectral.grid import ResampleMethod, resample_array

logger = logging.getLogger(__name__)


def model_inputs(f: np.ndarray) -> np.ndarray:
    """(B, C, *s) real or complex → (B, C, *s, 2) pairs."""
    return to_pairs(np.asarray(f, dtype=np.complex128))


def model_targets(g: np.ndarray, real_output: bool) -> np.ndarray:
    """Targets in the layout the model emits: real grids, or pairs for complex output."""
    g = np.asarray(g)
    if real_output:
        if np.iscomplexobj(g):
            raise ValueError("A real-output model cannot be trained on complex targets")
        return g.astype(np.float64)
    return to_pairs(g.astype(np.complex128))


def grid_sizes_of(x: np.ndarray, d: int) -> tuple[int, ...]:
    return tuple(np.shape(x)[-d:])


def scaled_sizes(in_sizes: Sequence[int], out_sizes: Sequence[int], new_in: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Input resized to new_in per axis; output scaled by the same ratio (identical if the grids match)."""
    new_in_sizes = tuple(new_in for _ in in_sizes)
    if tuple(in_sizes) == tuple(out_sizes):
        return new_in_sizes, new_in_sizes
    new_out = tuple(max(1, int(round(o * new_in / i))) for i, o in zip(in_sizes, out_sizes))
    return new_in_sizes, new_out


@dataclass(frozen=True)
class Interpolators:
    in_sizes: tuple[int, ...]
    out_sizes: tuple[int, ...]
    method: ResampleMethod = ResampleMethod.SPECTRAL

    def apply(self, f: np.ndarray, g: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
        return (resample_array(f, self.in_sizes, d, self.method),
                resample_array(g, self.out_sizes, d, self.method))


def draw_interpolators(rng: np.random.Generator, grids: Sequence[int], in_sizes: Sequence[int],
                       out_sizes: Sequence[int], m: int,
                       method: ResampleMethod | str = ResampleMethod.SPECTRAL) -> Interpolators:
    """Uniform draw from grids, redrawn while either resampled grid falls below m."""
    candidates = [scaled_sizes(in_sizes, out_sizes, s) for s in grids]
    if not any(min(i) >= m and min(o) >= m for i, o in candidates):
        raise ValueError(f"No augmentation grid in {list(grids)} keeps both grids at or above m={m}")
    while True:
        new_in, new_out = candidates[int(rng.integers(len(candidates)))]
        if min(new_in) >= m and min(new_out) >= m:
            return Interpolators(new_in, new_out, ResampleMethod(method))
        logger.debug(f"Rejected augmentation draw {new_in} → {new_out} (below m={m})")


def pair_mse(tape: Tape, model: PdIaeModel, f: np.ndarray, g: np.ndarray) -> Node:
    d = model.config.d
    pred = model.forward(tape, tape.constant(model_inputs(f)), grid_sizes_of(g, d))
    return tape.mse(pred, tape.constant(model_targets(g, model.config.real_output)))


def augmented_loss(tape: Tape, model: PdIaeModel, f: np.ndarray, g: np.ndarray,
                   aug_weight: float, interpolators: Interpolators | None = None) -> Node:
    """
    f: (B, C_in, *s_in) inputs, g: (B, C_out, *s_out) targets (raw arrays).
    The model structure comes from `model`; parameters come from the tape.
    """
    if len(f) == 0:
        raise ValueError("Cannot compute a loss on an empty batch")
    if aug_weight < 0:
        raise ValueError(f"aug_weight must be ≥ 0, got {aug_weight}")
    loss = pair_mse(tape, model, f, g)
    if aug_weight == 0 or interpolators is None:
        return loss
    f_aug, g_aug = interpolators.apply(f, g, model.config.d)
    return tape.add(loss, tape.scale(pair_mse(tape, model, f_aug, g_aug), aug_weight))
