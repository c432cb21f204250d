"""
Tests for the Fourier-layer baseline block.
"""

import numpy as np
import pytest

from autodiff.gradcheck import grad_check
from autodiff.pairs import to_complex, to_pairs
from autodiff.tape import Tape
from baselines.spectral_conv import SpectralConvBlock, identity_mode_params, spectral_conv_forward


def _band_limited(coeffs: np.ndarray, s: int) -> np.ndarray:
    """(c, 2·deg+1) coefficients → (1, c, s, 2) pairs."""
    degree = coeffs.shape[1] // 2
    k = np.arange(-degree, degree + 1)
    x = np.arange(s) / s
    return to_pairs(coeffs @ np.exp(2j * np.pi * np.outer(k, x)))[None]


def _run(block, params, field) -> np.ndarray:
    tape = Tape(params)
    return spectral_conv_forward(tape, tape.constant(field), block).value


def _coeffs(rng, c: int, degree: int) -> np.ndarray:
    return rng.normal(size=(c, 2 * degree + 1)) + 1j * rng.normal(size=(c, 2 * degree + 1))


def test_identity_modes_pass_band_limited_input(rng):
    block = SpectralConvBlock("fno", d=1, m=8, c=2, activation=False)
    field = _band_limited(_coeffs(rng, 2, 3), 32)
    np.testing.assert_allclose(_run(block, identity_mode_params(block), field), field, atol=1e-12)


def test_modes_outside_band_are_dropped():
    block = SpectralConvBlock("fno", d=1, m=8, c=1, activation=False)
    x = np.arange(32) / 32
    field = to_pairs(np.exp(2j * np.pi * 9 * x))[None, None]
    assert np.max(np.abs(_run(block, identity_mode_params(block), field))) < 1e-12


def test_outputs_agree_on_shared_points(rng):
    block = SpectralConvBlock("fno", d=1, m=12, c=3)
    params = block.init_params(rng)
    coeffs = _coeffs(rng, 3, 5)
    reference = _run(block, params, _band_limited(coeffs, 24))
    for factor in (2, 4):
        fine = _run(block, params, _band_limited(coeffs, 24 * factor))
        np.testing.assert_allclose(fine[:, :, ::factor], reference, atol=1e-9)


def test_two_dimensional_grid(rng):
    block = SpectralConvBlock("fno", d=2, m=4, c=1)
    out = _run(block, block.init_params(rng), rng.normal(size=(2, 1, 8, 10, 2)))
    assert out.shape == (2, 1, 8, 10, 2)


def test_parameter_count():
    block = SpectralConvBlock("fno", d=1, m=12, c=4)
    assert block.param_count() == 12 * 4 * 4 * 2 + (2 * 4 * 4 + 2 * 4)
    assert block.param_count() == SpectralConvBlock("fno", d=1, m=12, c=4).param_count()


def test_grid_below_m_rejected(rng):
    block = SpectralConvBlock("fno", d=1, m=12, c=1)
    with pytest.raises(ValueError, match="smaller than m=12"):
        _run(block, block.init_params(rng), np.zeros((1, 1, 10, 2)))


def test_odd_m_rejected():
    with pytest.raises(ValueError, match="even"):
        SpectralConvBlock("fno", d=1, m=7, c=1)


def test_block_gradients():
    rng = np.random.default_rng(21)
    block = SpectralConvBlock("fno", d=1, m=4, c=2)
    params = block.init_params(rng)
    field = rng.normal(size=(1, 2, 8, 2))

    def f(tape):
        out = block.forward(tape, tape.constant(field))
        return tape.sum(tape.mul(out, out))

    assert grad_check(f, params, n_samples=80, rng=np.random.default_rng(22), zero_tol=1e-6) < 1e-4
