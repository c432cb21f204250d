"""
Tests for truncate / pad on centered spectra.

Truncation keeps k ∈ [-⌊m/2⌋, ⌈m/2⌉-1]; padding inserts zeros outside the
band. The two are exact adjoints and pad-then-truncate is the identity.
"""

import numpy as np
import pytest

from spectral.grid import ComplexGrid, Spectrum, fft_forward, pad, truncate


def _random_spectrum(rng, shape) -> Spectrum:
    return Spectrum(rng.normal(size=shape) + 1j * rng.normal(size=shape))


def test_truncate_to_own_size_is_identity():
    sp = _random_spectrum(np.random.default_rng(0), 10)
    np.testing.assert_array_equal(truncate(sp, 10).coeffs, sp.coeffs)


def test_truncate_keeps_plus_minus_one():
    coeffs = np.zeros(8, dtype=complex)
    coeffs[4 - 1] = 2.0          # k = -1
    coeffs[4 + 1] = 3.0          # k = +1
    out = truncate(Spectrum(coeffs), 4)
    assert out.coeff(-1) == 2.0
    assert out.coeff(1) == 3.0
    assert np.count_nonzero(out.coeffs) == 2


def test_truncate_energy_matches_central_modes():
    rng = np.random.default_rng(1)
    sp = fft_forward(ComplexGrid(rng.normal(size=64) + 1j * rng.normal(size=64)))
    kept = truncate(sp, 12).coeffs
    central = sp.coeffs[32 - 6: 32 + 6]
    assert np.isclose(np.sum(np.abs(kept) ** 2), np.sum(np.abs(central) ** 2), rtol=1e-14)


def test_truncate_above_modes_rejected():
    with pytest.raises(ValueError, match="pad instead"):
        truncate(Spectrum(np.ones(4)), 6)


def test_pad_to_own_size_is_identity():
    sp = _random_spectrum(np.random.default_rng(2), 6)
    np.testing.assert_array_equal(pad(sp, 6).coeffs, sp.coeffs)


def test_pad_inserts_exact_zeros():
    sp = Spectrum(np.array([1.0, 2.0, 3.0, 4.0]))
    out = pad(sp, 8).coeffs
    np.testing.assert_array_equal(out[2:6], [1, 2, 3, 4])
    assert np.all(out[[0, 1, 6, 7]] == 0)


def test_pad_below_modes_rejected():
    with pytest.raises(ValueError, match="truncate first"):
        pad(Spectrum(np.ones(8)), 4)


def test_truncate_of_pad_is_bit_exact():
    rng = np.random.default_rng(3)
    sp = _random_spectrum(rng, 12)
    np.testing.assert_array_equal(truncate(pad(sp, 64), 12).coeffs, sp.coeffs)
    sp2 = _random_spectrum(rng, (12, 12))
    np.testing.assert_array_equal(truncate(pad(sp2, (64, 20)), 12).coeffs, sp2.coeffs)


def test_pad_truncate_adjointness():
    """⟨pad(u), v⟩ = ⟨u, truncate(v)⟩."""
    rng = np.random.default_rng(4)
    for small, big in [(12, 64), (7, 20), ((6, 8), (16, 16))]:
        u = _random_spectrum(rng, small)
        v = _random_spectrum(rng, big)
        lhs = np.vdot(v.coeffs, pad(u, big).coeffs)
        rhs = np.vdot(truncate(v, small).coeffs, u.coeffs)
        assert abs(lhs - rhs) < 1e-12


def test_odd_band_inside_even_grid():
    coeffs = np.arange(8, dtype=complex)        # k = -4..3
    out = truncate(Spectrum(coeffs), 3)          # keep k = -1..1
    np.testing.assert_array_equal(out.coeffs, [3, 4, 5])
