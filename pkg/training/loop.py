"""
Training loop: shuffled mini-batches, Adam, the plateau schedule, best-by-test-error retention.

Per epoch:
    shuffle → for each batch: draw interpolators → augmented loss → backprop → adam_step
    → test avg relative error → schedule decision → EpochRecord

When normalization statistics are given, training runs on min-max
normalized pairs and the test error is measured in physical units.
"""

import csv
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from autodiff.tape import Tape
from network.model import PdIaeModel
from training.adam import AdamState, adam_step
from training.config import TrainConfig
from training.loss import augmented_loss, draw_interpolators, grid_sizes_of
from training.metrics import avg_relative_error, model_predictor
from training.normalize import NormStats, normalize
from training.schedule import Decision, PlateauSchedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairSet:
    inputs: np.ndarray     # (N, C_in, *s_in)
    targets: np.ndarray    # (N, C_out, *s_out)

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise ValueError(f"{len(self.inputs)} inputs but {len(self.targets)} targets")

    def __len__(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class Split:
    train: PairSet
    test: PairSet


def split_pairs(inputs: np.ndarray, targets: np.ndarray, n_train: int) -> Split:
    """First n_train pairs train, the rest test."""
    if not 0 < n_train < len(inputs):
        raise ValueError(f"n_train must leave both splits non-empty, got {n_train} of {len(inputs)}")
    return Split(PairSet(inputs[:n_train], targets[:n_train]), PairSet(inputs[n_train:], targets[n_train:]))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    test_rel_err: float
    lr: float


@dataclass(frozen=True)
class TrainResult:
    model: PdIaeModel           # parameters with the best test error
    log: list[EpochRecord]
    best_epoch: int
    best_error: float
    steps: int


def train_loop(model: PdIaeModel, data: Split, config: TrainConfig,
               norm: NormStats | None = None) -> TrainResult:
    if len(data.train) == 0 or len(data.test) == 0:
        raise ValueError(f"Empty split: {len(data.train)} train and {len(data.test)} test pairs")
    d, m = model.config.d, model.config.m
    rng = np.random.default_rng(config.seed)

    train_f, train_g = data.train.inputs, data.train.targets
    if norm is not None:
        train_f, train_g = normalize(train_f, norm.inputs), normalize(train_g, norm.outputs)
    in_sizes, out_sizes = grid_sizes_of(train_f, d), grid_sizes_of(train_g, d)
    augment = config.aug_weight > 0 and len(config.augment_grids) > 0

    params = dict(model.params)
    state = AdamState.zeros(params)
    schedule = PlateauSchedule(config.lr, config.plateau_halve, config.plateau_stop)
    best_params, best_epoch = params, 0
    log: list[EpochRecord] = []
    steps = 0

    for epoch in range(1, config.max_epochs + 1):
        lr = schedule.lr
        order = rng.permutation(len(train_f))
        losses = []
        for start in range(0, len(order), config.batch_size):
            idx = order[start:start + config.batch_size]
            interp = (draw_interpolators(rng, config.augment_grids, in_sizes, out_sizes, m,
                                         config.augment_method) if augment else None)
            tape = Tape(params)
            loss = augmented_loss(tape, model, train_f[idx], train_g[idx], config.aug_weight, interp)
            step = adam_step(params, tape.backprop(loss), state, lr, (config.beta1, config.beta2), config.eps)
            if step.applied:
                params, state = step.params, step.state
            losses.append(float(loss.value))
            steps += 1
            if config.max_steps is not None and steps >= config.max_steps:
                break

        current = model.with_params(params)
        report = avg_relative_error(model_predictor(current, norm), data.test.inputs, data.test.targets,
                                    config.eval_grids, d, m)
        record = EpochRecord(epoch, float(np.mean(losses)), report.mean, lr)
        log.append(record)
        logger.info(f"epoch {epoch}: train loss {record.train_loss:.4e}, "
                    f"test rel err {record.test_rel_err:.4e}, lr {lr:.3g}")

        decision = schedule.observe(report.mean)
        if decision == Decision.IMPROVED:
            best_params, best_epoch = params, epoch
        if decision == Decision.STOP:
            break
        if config.max_steps is not None and steps >= config.max_steps:
            logger.info(f"Reached the step budget ({config.max_steps}) at epoch {epoch}")
            break

    best_error = schedule.best if math.isfinite(schedule.best) else float("nan")
    logger.info(f"Training finished after {len(log)} epochs / {steps} steps; "
                f"best test rel err {best_error:.4e} at epoch {best_epoch}")
    return TrainResult(model=model.with_params(best_params), log=log, best_epoch=best_epoch,
                       best_error=best_error, steps=steps)


def write_epoch_log(log: list[EpochRecord], path: str | Path) -> Path:
    """CSV with header epoch,train_loss,test_rel_err,lr."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["epoch", "train_loss", "test_rel_err", "lr"])
        writer.writeheader()
        for record in log:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(record).items()})
    return path
