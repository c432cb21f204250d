"""
Central-difference gradient check.

f is a graph builder: given a Tape bound to parameters it returns the scalar
loss node. The analytic gradient comes from one backprop; the numeric one
re-runs f on fresh tapes with a single coordinate nudged by ±h.
"""

import logging
from collections.abc import Callable, Mapping

import numpy as np

from autodiff.errors import NonFiniteError
from autodiff.tape import Node, Tape

logger = logging.getLogger(__name__)

GraphFn = Callable[[Tape], Node]


def grad_check(
    f: GraphFn,
    theta: Mapping[str, np.ndarray],
    h: float = 1e-5,
    n_samples: int = 100,
    rng: np.random.Generator | None = None,
    zero_tol: float = 1e-8,
) -> float:
    """
    Max relative error between backprop and central differences.

    Error per coordinate is |analytic − numeric| / max(|analytic|, 1e-12).
    Coordinates where both derivatives are below zero_tol count as 0, so a
    constant f reports 0. At most n_samples coordinates are checked, drawn
    without replacement when there are more.
    """
    if h <= 0:
        raise ValueError(f"Step h must be positive, got {h}")
    theta = {name: np.asarray(value, dtype=np.float64) for name, value in theta.items()}

    tape = Tape(theta)
    loss = f(tape)
    _require_finite(loss)
    analytic = tape.backprop(loss)

    coords = [(name, i) for name, value in theta.items() for i in range(value.size)]
    if len(coords) > n_samples:
        rng = rng if rng is not None else np.random.default_rng(0)
        picks = rng.choice(len(coords), size=n_samples, replace=False)
        coords = [coords[int(p)] for p in sorted(picks)]

    worst = 0.0
    for name, i in coords:
        plus = _nudged(f, theta, name, i, h)
        minus = _nudged(f, theta, name, i, -h)
        numeric = (plus - minus) / (2.0 * h)
        exact = float(analytic[name].flat[i])
        if max(abs(exact), abs(numeric)) < zero_tol:
            continue
        worst = max(worst, abs(exact - numeric) / max(abs(exact), 1e-12))
    logger.debug(f"grad_check over {len(coords)} coordinates: max rel err {worst:.3e}")
    return worst


def _nudged(f: GraphFn, theta: dict[str, np.ndarray], name: str, i: int, delta: float) -> float:
    shifted = dict(theta)
    arr = np.array(theta[name], copy=True)
    arr.flat[i] += delta
    shifted[name] = arr
    loss = f(Tape(shifted))
    _require_finite(loss)
    return loss.value.item()


def _require_finite(loss: Node) -> None:
    if not np.all(np.isfinite(loss.value)):
        raise NonFiniteError("Function under check returned a non-finite value")
