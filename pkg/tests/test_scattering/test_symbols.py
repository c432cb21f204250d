"""
Tests for the 1-D symbol tasks.
"""

import numpy as np
import pytest

from scattering.symbols import SymbolKind, apply_symbol, draw_coefficients, gen_symbol_task_1d


def test_derivative_of_plane_wave():
    x = np.arange(32) / 32
    wave = np.exp(2j * np.pi * x)
    np.testing.assert_allclose(apply_symbol(wave, SymbolKind.DERIVATIVE), 2j * np.pi * wave, atol=1e-12)


def test_derivative_of_constant_vanishes():
    np.testing.assert_allclose(apply_symbol(np.full(16, 3.0), "derivative"), 0.0, atol=1e-12)


def test_abs_symbol_on_cosine():
    x = np.arange(16) / 16
    np.testing.assert_allclose(apply_symbol(np.cos(2 * np.pi * 3 * x), "abs_xi"),
                               6 * np.pi * np.cos(2 * np.pi * 3 * x), atol=1e-12)


def test_band_symbol_keeps_the_mean():
    np.testing.assert_allclose(apply_symbol(np.full(8, 2.0), "band"), 2.0, rtol=1e-14)


def test_derivative_matches_finite_differences(rng):
    task = gen_symbol_task_1d(SymbolKind.DERIVATIVE, 8, rng, n=3)
    s = 256
    f, target = task.inputs(s), task.targets(s)
    fd = (np.roll(f, -1, axis=-1) - np.roll(f, 1, axis=-1)) * s / 2
    assert np.linalg.norm(fd - target) < 1e-3 * np.linalg.norm(target)


def test_targets_are_consistent_across_grids(rng):
    task = gen_symbol_task_1d("abs_xi", 12, rng, n=4)
    np.testing.assert_allclose(task.targets(64)[:, ::2], task.targets(32), atol=1e-12)
    np.testing.assert_allclose(task.inputs(48)[:, ::3], task.inputs(16), atol=1e-12)


def test_band_targets_match_closed_form(rng):
    task = gen_symbol_task_1d("band", 16, rng, n=2, k0=3.0)
    k = np.arange(16) - 8
    x = np.arange(40) / 40
    expected = (task.coeffs * np.exp(-(k / 3.0) ** 2)) @ np.exp(2j * np.pi * np.outer(k, x))
    np.testing.assert_allclose(task.targets(40), expected.real, atol=1e-12)
    np.testing.assert_allclose(expected.imag, 0.0, atol=1e-12)


def test_coefficients_are_hermitian_and_band_limited(rng):
    c = draw_coefficients(rng, 10, 5)
    k = np.arange(10) - 5
    for j in range(1, 5):
        np.testing.assert_array_equal(c[:, 5 + j], np.conj(c[:, 5 - j]))
    assert not np.any(c[:, k == -5])
    assert not np.any(c.imag[:, 5])


def test_grid_must_exceed_m_gen(rng):
    task = gen_symbol_task_1d("derivative", 8, rng)
    with pytest.raises(ValueError, match="exceed m_gen=8"):
        task.inputs(8)


def test_odd_m_gen_rejected(rng):
    with pytest.raises(ValueError, match="even"):
        draw_coefficients(rng, 7, 1)


def test_unknown_symbol_rejected(rng):
    with pytest.raises(ValueError, match="Unknown symbol: 'laplace'"):
        gen_symbol_task_1d("laplace", 8, rng)
