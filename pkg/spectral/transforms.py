"""
Centered, integral-normalized FFT primitives acting on the trailing axes of an array.

Conventions, per axis of size s:

    coefficient order   k = -floor(s/2), ..., ceil(s/2) - 1   (fftshift order)
    analysis            c_k = (1/s) Σ_j g_j e^{-2πi k j/s}
    synthesis           g_j = Σ_k c_k e^{+2πi k j/s}

Because analysis carries the 1/s, the coefficient of a band-limited signal is
the same whatever grid it was sampled on. Every leading axis is a batch axis.

Each linear map here has an `*_adjoint` partner. The autodiff tape backpropagates
through these maps by applying the adjoint to the incoming gradient.
"""

from collections.abc import Sequence

import numpy as np


def as_sizes(n: int | Sequence[int], ndim: int) -> tuple[int, ...]:
    """Broadcast a scalar size to `ndim` axes, or validate a per-axis tuple."""
    if isinstance(n, (int, np.integer)):
        return (int(n),) * ndim
    sizes = tuple(int(v) for v in n)
    if len(sizes) != ndim:
        raise ValueError(f"Expected {ndim} sizes, got {sizes}")
    return sizes


def trailing_sizes(x: np.ndarray, ndim: int) -> tuple[int, ...]:
    return tuple(x.shape[x.ndim - ndim:])


def band_slice(n: int, m: int) -> slice:
    """Index range of the centered band of m modes inside n centered modes."""
    start = n // 2 - m // 2
    return slice(start, start + m)


def _axes(ndim: int) -> tuple[int, ...]:
    return tuple(range(-ndim, 0))


def fit_modes(c: np.ndarray, sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    """
    Truncate or zero-pad a centered spectrum per axis.

    Truncation keeps k in [-floor(m/2), ceil(m/2) - 1]; padding places the
    input band at the same indices of the larger array. The two are exact
    adjoints of each other.
    """
    sizes = as_sizes(sizes, ndim)
    out = c
    for offset, n_new in enumerate(sizes):
        axis = c.ndim - ndim + offset
        n_old = out.shape[axis]
        if n_new == n_old:
            continue
        idx = [slice(None)] * out.ndim
        if n_new < n_old:
            idx[axis] = band_slice(n_old, n_new)
            out = out[tuple(idx)]
        else:
            shape = list(out.shape)
            shape[axis] = n_new
            padded = np.zeros(shape, dtype=out.dtype)
            idx[axis] = band_slice(n_new, n_old)
            padded[tuple(idx)] = out
            out = padded
    return np.array(out, copy=True)


def truncate_modes(c: np.ndarray, modes: int | Sequence[int], ndim: int) -> np.ndarray:
    modes = as_sizes(modes, ndim)
    have = trailing_sizes(c, ndim)
    if any(m > n for m, n in zip(modes, have)):
        raise ValueError(f"Cannot truncate {have} modes to {modes}: pad instead")
    if any(m < 1 for m in modes):
        raise ValueError(f"Mode count must be positive, got {modes}")
    return fit_modes(c, modes, ndim)


def pad_modes(c: np.ndarray, sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    sizes = as_sizes(sizes, ndim)
    have = trailing_sizes(c, ndim)
    if any(s < n for s, n in zip(sizes, have)):
        raise ValueError(f"Cannot pad {have} modes to {sizes}: truncate first")
    return fit_modes(c, sizes, ndim)


def centered_fft(x: np.ndarray, ndim: int) -> np.ndarray:
    axes = _axes(ndim)
    norm = float(np.prod(trailing_sizes(x, ndim)))
    return np.fft.fftshift(np.fft.fftn(x, axes=axes), axes=axes) / norm


def centered_fft_adjoint(g: np.ndarray, ndim: int) -> np.ndarray:
    axes = _axes(ndim)
    return np.fft.ifftn(np.fft.ifftshift(g, axes=axes), axes=axes)


def synthesize(c: np.ndarray, sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    """Evaluate Σ_k c_k e^{2πi k·x_j} on the uniform grid of the given sizes."""
    sizes = as_sizes(sizes, ndim)
    padded = pad_modes(c, sizes, ndim)
    axes = _axes(ndim)
    return np.fft.ifftn(np.fft.ifftshift(padded, axes=axes), axes=axes) * float(np.prod(sizes))


def synthesize_adjoint(g: np.ndarray, modes: int | Sequence[int], ndim: int) -> np.ndarray:
    axes = _axes(ndim)
    spectrum = np.fft.fftshift(np.fft.fftn(g, axes=axes), axes=axes)
    return truncate_modes(spectrum, modes, ndim)


def resample_spectral(x: np.ndarray, sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    sizes = as_sizes(sizes, ndim)
    if sizes == trailing_sizes(x, ndim):
        return np.array(x, dtype=np.complex128, copy=True)
    return synthesize(fit_modes(centered_fft(x, ndim), sizes, ndim), sizes, ndim)


def resample_spectral_adjoint(g: np.ndarray, in_sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    in_sizes = as_sizes(in_sizes, ndim)
    out_sizes = trailing_sizes(g, ndim)
    if in_sizes == out_sizes:
        return np.array(g, dtype=np.complex128, copy=True)
    spectrum = synthesize_adjoint(g, out_sizes, ndim)
    return centered_fft_adjoint(fit_modes(spectrum, in_sizes, ndim), ndim)


def resample_linear(x: np.ndarray, sizes: int | Sequence[int], ndim: int) -> np.ndarray:
    """Separable piecewise-linear interpolation with periodic wrap."""
    sizes = as_sizes(sizes, ndim)
    out = np.asarray(x)
    for offset, n_new in enumerate(sizes):
        axis = out.ndim - ndim + offset
        out = _linear_axis(out, n_new, axis)
    return np.array(out, copy=True)


def _linear_axis(x: np.ndarray, n_new: int, axis: int) -> np.ndarray:
    n_old = x.shape[axis]
    if n_new == n_old:
        return x
    pos = np.arange(n_new) * (n_old / n_new)
    lo = np.floor(pos).astype(np.int64)
    t = pos - lo
    lo %= n_old
    hi = (lo + 1) % n_old
    shape = [1] * x.ndim
    shape[axis] = n_new
    t = t.reshape(shape)
    return (1.0 - t) * np.take(x, lo, axis=axis) + t * np.take(x, hi, axis=axis)
