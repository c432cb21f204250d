"""
Tests for the relative-error metric.
"""

import numpy as np
import pytest

from network.config import PdIaeConfig
from network.model import PdIaeModel
from training.metrics import avg_relative_error, relative_errors


def _make_pairs(rng, n: int = 4, s: int = 16):
    x = np.arange(s) / s
    f = np.stack([np.sin(2 * np.pi * (k + 1) * x) for k in range(n)])[:, None]
    g = np.stack([np.cos(2 * np.pi * (k + 1) * x) + 0.5 for k in range(n)])[:, None]
    return f, g


def test_perfect_predictor_scores_zero(rng):
    f, g = _make_pairs(rng)
    def oracle(inputs, out_sizes):
        assert out_sizes == (16,)
        return g

    assert avg_relative_error(oracle, f, g).mean == 0.0


def test_zero_output_scores_exactly_one(rng):
    f, g = _make_pairs(rng)
    report = avg_relative_error(lambda x, sizes: np.zeros((len(x), 1, *sizes)), f, g, grids=(16, 24, 32), m=4)
    assert report.mean == 1.0
    assert set(report.per_grid) == {16, 24, 32}


def test_hand_computed_two_samples():
    g = np.array([[[3.0, 4.0]], [[1.0, 0.0]]])
    p = np.array([[[3.0, 0.0]], [[0.0, 0.0]]])
    report = avg_relative_error(lambda x, sizes: p, np.zeros_like(g), g, m=2)
    assert report.mean == pytest.approx((4 / 5 + 1.0) / 2, rel=1e-15)
    assert report.evaluated == 2 and report.skipped == 0


def test_zero_norm_targets_are_skipped_and_counted():
    g = np.array([[[0.0, 0.0]], [[1.0, 1.0]]])
    report = avg_relative_error(lambda x, sizes: np.zeros_like(g), np.ones_like(g), g, m=2)
    assert report.skipped == 1 and report.evaluated == 1
    assert report.mean == 1.0


def test_all_zero_targets_rejected():
    g = np.zeros((2, 1, 4))
    with pytest.raises(ValueError, match="zero norm"):
        avg_relative_error(lambda x, sizes: g, g, g, m=2)


def test_scale_invariance(rng):
    g = rng.normal(size=(3, 1, 8))
    p = g + 0.1 * rng.normal(size=g.shape)
    base = relative_errors(g, p)
    for gamma in (1e-3, -7.0, 250.0):
        np.testing.assert_allclose(relative_errors(gamma * g, gamma * p), base, rtol=1e-14)


def test_grid_below_m_rejected(rng):
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=8, c=1))
    f, g = _make_pairs(rng)
    with pytest.raises(ValueError, match="below m=8"):
        avg_relative_error(model, f, g, grids=(6, 16))


def test_model_sweep_in_parallel_matches_serial(rng):
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=2, m=8, c=2))
    f, g = _make_pairs(rng)
    serial = avg_relative_error(model, f, g, grids=(16, 24, 32), max_workers=1)
    threaded = avg_relative_error(model, f, g, grids=(16, 24, 32), max_workers=3)
    assert serial == threaded
