"""
Adam with bias correction, on a flat {name: array} parameter dict.

    m ← β₁ m + (1 − β₁) g
    v ← β₂ v + (1 − β₂) g²
    θ ← θ − lr · m̂ / (√v̂ + ε),   m̂ = m / (1 − β₁ᵗ),  v̂ = v / (1 − β₂ᵗ)

A step with any non-finite gradient entry is not applied: parameters and
state come back unchanged and the step is flagged.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdamState:
    t: int
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]

    @classmethod
    def zeros(cls, params: Mapping[str, np.ndarray]) -> "AdamState":
        return cls(
            t=0,
            m={name: np.zeros_like(value, dtype=np.float64) for name, value in params.items()},
            v={name: np.zeros_like(value, dtype=np.float64) for name, value in params.items()},
        )


@dataclass(frozen=True)
class AdamStep:
    params: dict[str, np.ndarray]
    state: AdamState
    applied: bool


def adam_step(params: Mapping[str, np.ndarray], grads: Mapping[str, np.ndarray], state: AdamState,
              lr: float, betas: tuple[float, float] = (0.9, 0.999), eps: float = 1e-8) -> AdamStep:
    if grads.keys() != params.keys():
        raise ValueError(f"Gradient names do not match parameters: {sorted(grads.keys() ^ params.keys())}")
    for name, value in params.items():
        if np.shape(grads[name]) != np.shape(value):
            raise ValueError(f"Gradient for '{name}' has shape {np.shape(grads[name])}, "
                             f"expected {np.shape(value)}")

    bad = [name for name, g in grads.items() if not np.all(np.isfinite(g))]
    if bad:
        logger.warning(f"Adam step {state.t + 1} aborted: non-finite gradient in {bad}")
        return AdamStep(params=dict(params), state=state, applied=False)

    b1, b2 = betas
    t = state.t + 1
    new_params, new_m, new_v = {}, {}, {}
    for name, theta in params.items():
        g = np.asarray(grads[name], dtype=np.float64)
        m = b1 * state.m[name] + (1 - b1) * g
        v = b2 * state.v[name] + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        new_params[name] = np.asarray(theta, dtype=np.float64) - lr * m_hat / (np.sqrt(v_hat) + eps)
        new_m[name], new_v[name] = m, v
    return AdamStep(params=new_params, state=AdamState(t=t, m=new_m, v=new_v), applied=True)
