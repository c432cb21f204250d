"""
Tests for spectral and bilinear resampling, and for the adjoint pairs the
autodiff tape relies on.
"""

import numpy as np
import pytest

from spectral import transforms
from spectral.grid import ComplexGrid, ResampleMethod, resample, resample_array


def _band_limited(rng, m: int, s: int) -> np.ndarray:
    coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
    coeffs[0] = 0.0             # drop the unpaired -m/2 mode
    return transforms.synthesize(coeffs, s, 1)


@pytest.mark.parametrize("method", list(ResampleMethod))
def test_constant_stays_constant(method):
    for s_new in (2, 5, 16, 33):
        out = resample(ComplexGrid(np.full(8, 2.5 - 1j)), s_new, method).values
        np.testing.assert_allclose(out, np.full(s_new, 2.5 - 1j), atol=1e-13)


def test_spectral_up_then_down_recovers_band_limited_signal():
    rng = np.random.default_rng(0)
    g = ComplexGrid(_band_limited(rng, 8, 32))
    back = resample(resample(g, 64), 32).values
    assert np.max(np.abs(back - g.values)) < 1e-10


def test_bilinear_midpoints_are_neighbour_means():
    g = ComplexGrid(np.arange(4) / 4)
    out = resample(g, 8, "bilinear").values
    np.testing.assert_allclose(out[0::2], g.values)
    np.testing.assert_allclose(out[1:7:2], (g.values[:-1] + g.values[1:]) / 2)
    assert out[7] == pytest.approx((g.values[3] + g.values[0]) / 2)   # periodic wrap


def test_bilinear_2d_is_separable():
    rng = np.random.default_rng(1)
    g = rng.normal(size=(6, 6))
    both = transforms.resample_linear(g, (12, 9), 2)
    rows = transforms.resample_linear(g.T, 12, 1).T
    stepwise = transforms.resample_linear(rows, 9, 1)
    np.testing.assert_allclose(both, stepwise, atol=1e-14)


def test_unknown_method_rejected():
    with pytest.raises(ValueError, match="Unknown resample method"):
        resample(ComplexGrid(np.ones(4)), 8, "bicubic")


def test_resample_array_keeps_real_dtype():
    out = resample_array(np.ones((3, 16)), 24, 1)
    assert not np.iscomplexobj(out)
    assert out.shape == (3, 24)


def test_same_size_resample_is_exact_copy():
    x = np.random.default_rng(2).normal(size=(2, 10))
    out = resample_array(x, 10, 1)
    np.testing.assert_array_equal(out, x)
    assert out is not x


@pytest.mark.parametrize("shape_in, sizes_out", [((16,), (24,)), ((20,), (12,)), ((8, 12), (12, 6))])
def test_linear_map_adjoints(shape_in, sizes_out):
    """⟨T x, y⟩ = ⟨x, Tᴴ y⟩ for every map the tape backpropagates through."""
    rng = np.random.default_rng(3)
    ndim = len(shape_in)

    def rand(shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    x = rand(shape_in)
    fwd = transforms.centered_fft(x, ndim)
    y = rand(fwd.shape)
    assert abs(np.vdot(y, fwd) - np.vdot(transforms.centered_fft_adjoint(y, ndim), x)) < 1e-10

    out = transforms.resample_spectral(x, sizes_out, ndim)
    y = rand(out.shape)
    back = transforms.resample_spectral_adjoint(y, shape_in, ndim)
    assert abs(np.vdot(y, out) - np.vdot(back, x)) < 1e-9

    modes = tuple(min(a, b) for a, b in zip(shape_in, sizes_out))
    c = rand(modes)
    syn = transforms.synthesize(c, shape_in, ndim)
    y = rand(syn.shape)
    assert abs(np.vdot(y, syn) - np.vdot(transforms.synthesize_adjoint(y, modes, ndim), c)) < 1e-9
