"""
Tests for Tape recording, backprop and replay.

The tape is a Wengert list: nodes reference strictly earlier nodes, and
replaying from the leaves must reproduce every saved value.
"""

import numpy as np
import pytest

from autodiff.errors import NonFiniteError, ShapeError
from autodiff.gradcheck import grad_check
from autodiff.tape import Tape


def test_linear_loss_gradient_is_input():
    """loss = sum(w ∘ x) with x fixed → dL/dw = x."""
    x = np.array([1.5, -2.0, 0.25])
    tape = Tape({"w": np.array([0.1, 0.2, 0.3])})
    loss = tape.sum(tape.mul(tape.param("w"), tape.constant(x)))
    np.testing.assert_array_equal(tape.backprop(loss)["w"], x)


def test_squared_norm_gradient_is_twice_w():
    w = np.array([[1.0, -3.0], [0.5, 2.0]])
    tape = Tape({"w": w})
    node = tape.param("w")
    loss = tape.sum(tape.mul(node, node))
    np.testing.assert_allclose(tape.backprop(loss)["w"], 2 * w)


def test_unused_parameter_gets_zero_gradient():
    tape = Tape({"used": np.ones(2), "unused": np.ones((3, 4))})
    loss = tape.sum(tape.param("used"))
    grads = tape.backprop(loss)
    assert grads["unused"].shape == (3, 4)
    assert not grads["unused"].any()


def test_non_scalar_loss_rejected():
    tape = Tape({"w": np.ones(3)})
    with pytest.raises(ShapeError, match="scalar"):
        tape.backprop(tape.tanh(tape.param("w")))


def test_param_leaf_created_once():
    tape = Tape({"w": np.ones(2)})
    assert tape.param("w") is tape.param("w")


def test_unknown_param_slot():
    with pytest.raises(ValueError, match="Unknown parameter slot"):
        Tape().param("missing")


def test_node_inputs_reference_earlier_nodes():
    tape = Tape({"w": np.ones((2, 2))})
    y = tape.tanh(tape.matmul(tape.param("w"), tape.constant(np.eye(2))))
    tape.sum(y)
    for node in tape.nodes:
        assert all(i < node.id for i in node.inputs)


def test_replay_is_bit_identical():
    rng = np.random.default_rng(0)
    tape = Tape({"w": rng.normal(size=(4, 2))})
    x = tape.constant(rng.normal(size=(3, 4)))
    h = tape.tanh(tape.matmul(x, tape.param("w")))
    tape.sum(tape.mul(h, h))
    assert tape.verify_replay()


def test_values_are_read_only():
    tape = Tape({"w": np.ones(2)})
    with pytest.raises(ValueError):
        tape.param("w").value[0] = 5.0


def test_non_finite_forward_rejected():
    tape = Tape()
    big = tape.constant(np.array([1e308]))
    with pytest.raises(NonFiniteError):
        tape.scale(big, 10.0)


def test_foreign_node_rejected():
    other = Tape()
    node = other.constant(np.ones(2))
    with pytest.raises(ValueError, match="does not belong"):
        Tape().tanh(node)


def test_fft_matmul_tanh_graph_matches_finite_differences():
    """Composed graph: real lift → complex FFT → truncate → synth → tanh → matmul."""
    rng = np.random.default_rng(42)
    theta = {
        "W": rng.uniform(-1, 1, (16, 16)),
        "V": rng.uniform(-1, 1, (16, 3)),
    }
    x = rng.uniform(-1, 1, (2, 16))

    def f(tape):
        h = tape.matmul(tape.constant(x), tape.param("W"))
        z = tape.fft(tape.complex(h), 1)
        z = tape.synth(tape.truncate(z, 6, 1), 16, 1)
        r = tape.tanh(tape.real(z))
        out = tape.matmul(r, tape.param("V"))
        return tape.sum(tape.mul(out, out))

    assert grad_check(f, theta, h=1e-5, n_samples=100, rng=np.random.default_rng(1)) < 1e-4
