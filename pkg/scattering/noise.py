"""
Additive Gaussian measurement noise scaled to the signal.

    out = x + g,   std(g) = (p / 100) · RMS(x)

Complex tensors get std/√2 on each of the real and imaginary parts, so
E|g|² = std².
"""

import numpy as np


def add_noise(x: np.ndarray, percent: float, rng: np.random.Generator) -> np.ndarray:
    if percent < 0:
        raise ValueError(f"Noise level must be ≥ 0 percent, got {percent}")
    x = np.asarray(x)
    if percent == 0 or x.size == 0:
        return np.array(x, copy=True)
    std = percent / 100 * float(np.sqrt(np.mean(np.abs(x) ** 2)))
    if np.iscomplexobj(x):
        g = std / np.sqrt(2) * (rng.normal(size=x.shape) + 1j * rng.normal(size=x.shape))
    else:
        g = std * rng.normal(size=x.shape)
    return x + g
