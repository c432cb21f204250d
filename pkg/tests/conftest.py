"""
Shared test fixtures.

Everything here is small enough for the default (not slow) suite:
- rng: a fresh seeded generator per test
- tiny_config: the smallest network that still has every part (L=1, c=1, m=4, K=1)
- desk_config: the desk-scale 1-D network used by the learning runs
- small_geometry: a scattering geometry at the Nyquist-safe desk defaults
"""

import numpy as np
import pytest

from network.config import PdIaeConfig
from scattering.geometry import ScatterGeometry


@pytest.fixture
def rng():
    return np.random.default_rng(1729)


@pytest.fixture
def tiny_config():
    return PdIaeConfig(d=1, L=1, K=1, m=4, c=1, hidden_widths=(4,), seed=3)


@pytest.fixture
def desk_config():
    return PdIaeConfig(d=1, L=4, K=3, m=12, c=8, seed=1729)


@pytest.fixture
def small_geometry():
    return ScatterGeometry(n_y=24, n_dir=16, omega=4 * np.pi)
