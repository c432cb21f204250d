"""
Relative L2 error, averaged over samples and discretizations.

For each grid in the list the inputs are resampled to that grid, the
targets by the same ratio, the model is evaluated there and each sample
contributes ‖a − â‖₂ / ‖a‖₂. Samples whose target is identically zero have
no relative error; they are skipped and counted.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from network.model import PdIaeModel
from spectral.grid import ResampleMethod, resample_array
from training.loss import grid_sizes_of, scaled_sizes
from training.normalize import NormStats, denormalize, normalize
from worker.pool import run_parallel

logger = logging.getLogger(__name__)

Predictor = Callable[[np.ndarray, tuple[int, ...]], np.ndarray]


@dataclass(frozen=True)
class RelErrReport:
    mean: float
    per_grid: dict[int | None, float] = field(default_factory=dict)
    skipped: int = 0
    evaluated: int = 0


def relative_errors(targets: np.ndarray, predictions: np.ndarray) -> np.ndarray:
    """Per-sample ‖t − p‖₂ / ‖t‖₂ over every axis but the first; NaN where ‖t‖₂ = 0."""
    t = np.asarray(targets).reshape(len(targets), -1)
    p = np.asarray(predictions).reshape(len(predictions), -1)
    if t.shape != p.shape:
        raise ValueError(f"Targets {np.shape(targets)} and predictions {np.shape(predictions)} differ")
    num = np.linalg.norm(t - p, axis=1)
    den = np.linalg.norm(t, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)


def model_predictor(model: PdIaeModel, norm: NormStats | None = None) -> Predictor:
    """Predict in physical units: normalize inputs, run the model, denormalize outputs."""
    def predict(f: np.ndarray, out_sizes: tuple[int, ...]) -> np.ndarray:
        if norm is None:
            return model.predict(f, out_sizes)
        return denormalize(model.predict(normalize(f, norm.inputs), out_sizes), norm.outputs)
    return predict


def avg_relative_error(model: PdIaeModel | Predictor, inputs: np.ndarray, targets: np.ndarray,
                       grids: Sequence[int] = (), d: int = 1, m: int = 2,
                       method: ResampleMethod | str = ResampleMethod.SPECTRAL,
                       max_workers: int | None = 1) -> RelErrReport:
    """
    Mean relative error over samples × grids. An empty grid list evaluates on
    the native grid only. Grids are evaluated concurrently when max_workers > 1.
    """
    predict = model_predictor(model) if isinstance(model, PdIaeModel) else model
    if isinstance(model, PdIaeModel):
        d, m = model.config.d, model.config.m
    if len(inputs) == 0:
        raise ValueError("Cannot evaluate on an empty sample set")
    in_sizes, out_sizes = grid_sizes_of(inputs, d), grid_sizes_of(targets, d)

    plan: list[tuple[int | None, tuple[int, ...], tuple[int, ...]]] = []
    for s in grids:
        new_in, new_out = scaled_sizes(in_sizes, out_sizes, s)
        if min(new_in) < m or min(new_out) < m:
            raise ValueError(f"Evaluation grid {s} puts {new_in} → {new_out} below m={m}")
        plan.append((s, new_in, new_out))
    if not plan:
        plan.append((None, in_sizes, out_sizes))

    def evaluate(entry) -> np.ndarray:
        _, new_in, new_out = entry
        f = resample_array(inputs, new_in, d, method)
        g = resample_array(targets, new_out, d, method)
        return relative_errors(g, predict(f, new_out))

    per_entry = run_parallel(evaluate, plan, max_workers)
    errors = np.stack(per_entry)                     # (grids, samples)
    zero = np.isnan(errors[0])
    if zero.any():
        logger.warning(f"Skipped {int(zero.sum())} samples with zero-norm targets")
    kept = errors[:, ~zero]
    if kept.size == 0:
        raise ValueError("Every target has zero norm; relative error is undefined")
    report = RelErrReport(
        mean=float(kept.mean()),
        per_grid={s: float(row.mean()) for (s, _, _), row in zip(plan, kept)},
        skipped=int(zero.sum()),
        evaluated=int(kept.shape[1]),
    )
    logger.debug(f"avg relative error {report.mean:.4e} over {report.evaluated} samples × {len(plan)} grids")
    return report
