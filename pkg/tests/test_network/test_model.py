"""
Tests for the assembled network: lift, dense skips, projection, output grid,
determinism, grid consistency and full-model gradients.
"""

import numpy as np
import pytest

from autodiff.gradcheck import grad_check
from autodiff.pairs import to_pairs
from autodiff.tape import Tape
from network.config import BlockKind, PdIaeConfig
from network.model import PdIaeModel, coordinate_channels, lift, model_forward
from spectral.grid import ComplexGrid


def _band_limited(seed: int, s: int, degree: int = 4) -> np.ndarray:
    """Real trigonometric polynomial of the given degree sampled on s points, shape (1, 1, s)."""
    rng = np.random.default_rng(seed)
    k = np.arange(1, degree + 1)
    a, b = rng.normal(size=degree), rng.normal(size=degree)
    x = np.arange(s) / s
    values = rng.normal() + a @ np.cos(2 * np.pi * np.outer(k, x)) + b @ np.sin(2 * np.pi * np.outer(k, x))
    return values[None, None]


def _zeroed(model: PdIaeModel) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(value) for name, value in model.params.items()}


def _constant_basis(model: PdIaeModel) -> PdIaeModel:
    params = dict(model.params)
    for name in params:
        if ".pnet.W" in name:
            params[name] = np.zeros_like(params[name])
    return model.with_params(params)


def test_lift_zero_weights_gives_bias_field():
    config = PdIaeConfig(d=1, L=1, K=1, m=4, c=3)
    model = PdIaeModel(config)
    params = _zeroed(model)
    params["lift.b"] = np.array([[1.0, 2.0], [-0.5, 0.0], [0.0, 0.25]])
    model = model.with_params(params)
    beta = params["lift.b"][:, 0] + 1j * params["lift.b"][:, 1]
    for s in (4, 9, 32):
        out = lift(ComplexGrid(np.linspace(-1, 1, s)), model)
        np.testing.assert_array_equal(out, beta[:, None] * np.ones(s))


def test_lift_commutes_with_translation_without_coordinates(rng):
    config = PdIaeConfig(d=1, L=1, K=1, m=4, c=2, coord_channels=False)
    model = PdIaeModel(config)
    values = rng.normal(size=16) + 1j * rng.normal(size=16)
    shifted = lift(ComplexGrid(np.roll(values, 5)), model)
    np.testing.assert_allclose(shifted, np.roll(lift(ComplexGrid(values), model), 5, axis=-1), atol=1e-15)


def test_lift_gradient_wrt_weights(rng):
    config = PdIaeConfig(d=2, L=1, K=1, m=4, c=2)
    model = PdIaeModel(config)
    f = to_pairs(rng.normal(size=(6, 5)) + 1j * rng.normal(size=(6, 5)))[None, None]
    theta = {"lift.W": model.params["lift.W"], "lift.b": model.params["lift.b"]}

    def squared_norm(tape):
        out = model.lift(tape, tape.constant(f))
        return tape.sum(tape.mul(out, out))

    assert grad_check(squared_norm, theta, n_samples=50, rng=rng) < 1e-4


def test_coordinate_channels_are_unit_modulus():
    coords = coordinate_channels((4, 6))
    assert coords.shape == (2, 4, 6, 2)
    np.testing.assert_allclose(np.hypot(coords[..., 0], coords[..., 1]), 1.0)
    np.testing.assert_allclose(coords[0, 1, 0], [0.0, 1.0], atol=1e-15)   # e^{2πi/4} = i


def test_skip_structure_has_one_map_per_earlier_state():
    model = PdIaeModel(PdIaeConfig(d=1, L=4, K=1, m=4, c=2))
    assert len(model.skips) == 4 * 5 // 2
    assert sorted(model.skips) == [(j, i) for i in range(1, 5) for j in range(i)]


def test_zero_block_passes_lift_bias_through_identity_skip():
    config = PdIaeConfig(d=1, L=1, K=1, m=4, c=2, coord_channels=False, real_output=False)
    model = PdIaeModel(config)
    params = _zeroed(model)
    params["lift.b"] = np.array([[0.5, -1.0], [2.0, 0.0]])
    params["skip0_1.W"][[0, 1], [0, 1], 0] = 1.0
    params["proj.W"][0, 0, 0] = 1.0
    out = model_forward(np.ones((1, 1, 10)), model.with_params(params))
    np.testing.assert_array_equal(out, np.full((1, 1, 10), 0.5 - 1.0j))


def test_output_lands_on_requested_grid():
    model = PdIaeModel(PdIaeConfig(d=1, L=2, K=2, m=8, c=2))
    f = _band_limited(0, 16)
    for s_out in (8, 12, 16, 40):
        assert model.predict(f, s_out).shape == (1, 1, s_out)
    with pytest.raises(ValueError, match="Grid too small"):
        model.predict(f, 6)


def test_two_dimensional_output_grid():
    model = PdIaeModel(PdIaeConfig(d=2, L=1, K=1, m=4, c=2))
    out = model.predict(np.ones((2, 1, 8, 6)), (10, 12))
    assert out.shape == (2, 1, 10, 12)


def test_forward_is_deterministic():
    model = PdIaeModel(PdIaeConfig(d=1, L=2, K=2, m=8, c=3))
    f = _band_limited(1, 24)
    np.testing.assert_array_equal(model.predict(f), model.predict(f))


def test_same_seed_builds_same_parameters():
    config = PdIaeConfig(d=1, L=2, K=2, m=8, c=2, seed=11)
    a, b = PdIaeModel(config), PdIaeModel(config)
    assert all(np.array_equal(a.params[n], b.params[n]) for n in a.params)


def test_single_block_agrees_on_shared_points():
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=3, m=12, c=4))
    coarse = model.predict(_band_limited(2, 32))
    fine = model.predict(_band_limited(2, 64))
    assert np.max(np.abs(fine[..., ::2] - coarse)) < 1e-7


def test_band_limited_input_gives_same_output_on_common_grid():
    """With a constant spatial basis every hidden state stays in the m-band."""
    model = _constant_basis(PdIaeModel(PdIaeConfig(d=1, L=3, K=3, m=12, c=4)))
    coarse = model.predict(_band_limited(3, 32))
    fine_on_coarse = model.predict(_band_limited(3, 64), s_out=32)
    assert np.max(np.abs(fine_on_coarse - coarse)) < 1e-7


def test_params_are_read_only():
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=4, c=1))
    with pytest.raises(ValueError):
        model.params["lift.W"][0, 0, 0] = 1.0


def test_wrong_parameter_shape_rejected():
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=4, c=1))
    params = dict(model.params)
    params["proj.b"] = np.zeros((2, 2))
    with pytest.raises(ValueError, match="proj.b"):
        model.with_params(params)


def test_wrong_input_channels_rejected():
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=4, c=1, in_channels=2))
    with pytest.raises(ValueError, match="2 input channels"):
        model.predict(np.ones((1, 1, 8)))


def test_full_model_gradient(tiny_config, rng):
    model = PdIaeModel(tiny_config)
    f = to_pairs(rng.normal(size=(2, 1, 8)).astype(np.complex128))
    target = rng.normal(size=(2, 1, 8))

    def loss(tape):
        return tape.mse(model.forward(tape, tape.constant(f)), tape.constant(target))

    tape = Tape(model.params)
    grads = tape.backprop(loss(tape))
    assert set(grads) == set(model.params)
    assert all(np.all(np.isfinite(g)) for g in grads.values())
    assert grad_check(loss, model.params, n_samples=300, rng=rng, zero_tol=1e-6) < 1e-3


def test_dense_iae_variant_runs():
    config = PdIaeConfig(d=1, L=2, K=1, m=4, c=2, block=BlockKind.DENSE_IAE, hidden_widths=(8,))
    model = PdIaeModel(config)
    out = model.predict(_band_limited(4, 12))
    assert out.shape == (1, 1, 12) and np.all(np.isfinite(out))


def test_complex_output_model_returns_complex(rng):
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=4, c=2, real_output=False))
    out = model.predict(rng.normal(size=(1, 1, 8)) + 0j)
    assert np.iscomplexobj(out) and out.shape == (1, 1, 8)
