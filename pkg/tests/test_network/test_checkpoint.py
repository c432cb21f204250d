"""
Tests for checkpoint persistence: bit-exact roundtrips and rejection of damaged files.
"""

import re

import numpy as np
import pytest

from network.checkpoint import CheckpointError, load_checkpoint, read_checkpoint, save_checkpoint
from network.config import BlockKind, PdIaeConfig
from network.model import PdIaeModel
from training.normalize import NormStats, RoleStats


def _make_model(**overrides) -> PdIaeModel:
    return PdIaeModel(PdIaeConfig(d=1, L=2, K=2, m=8, c=3, seed=5, **overrides))


def test_roundtrip_is_bit_exact(tmp_path):
    model = _make_model()
    loaded = load_checkpoint(save_checkpoint(model, tmp_path / "m.pd"))
    assert loaded.config == model.config
    assert loaded.params.keys() == model.params.keys()
    for name in model.params:
        assert np.array_equal(loaded.params[name], model.params[name]), name


def test_roundtrip_preserves_every_config_field(tmp_path):
    model = _make_model(block=BlockKind.DENSE_IAE, hidden_widths=(6, 5), mid_hidden=9,
                        real_output=False, out_channels=2)
    assert load_checkpoint(save_checkpoint(model, tmp_path / "m.pd")).config == model.config


def test_normalization_statistics_roundtrip_bit_exact(tmp_path):
    norm = NormStats(RoleStats(1 / 3, np.pi), RoleStats(-0.1, 7e-300))
    loaded = read_checkpoint(save_checkpoint(_make_model(), tmp_path / "m.pd", norm))
    assert loaded.norm == norm


def test_checkpoint_without_statistics(tmp_path):
    assert read_checkpoint(save_checkpoint(_make_model(), tmp_path / "m.pd")).norm is None


def test_loaded_model_predicts_identically(tmp_path):
    model = _make_model()
    f = np.cos(2 * np.pi * np.arange(20) / 20)[None, None]
    loaded = load_checkpoint(save_checkpoint(model, tmp_path / "m.pd"))
    np.testing.assert_array_equal(loaded.predict(f), model.predict(f))


def test_complex_slots_are_written_re_block_then_im_block(tmp_path):
    model = PdIaeModel(PdIaeConfig(d=1, L=1, K=1, m=2, c=1, hidden_widths=(1,), mid_hidden=1))
    path = save_checkpoint(model, tmp_path / "m.pd")
    data = path.read_bytes()
    length = int.from_bytes(data[8:16], "little")
    first = np.frombuffer(data, dtype="<f8", count=4, offset=16 + length)
    w = model.params["lift.W"]   # (1, 2, 2): the first slot
    np.testing.assert_array_equal(first, [w[0, 0, 0], w[0, 1, 0], w[0, 0, 1], w[0, 1, 1]])


def test_corrupted_magic_rejected(tmp_path):
    path = save_checkpoint(_make_model(), tmp_path / "m.pd")
    data = bytearray(path.read_bytes())
    data[0] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(CheckpointError, match="bad header"):
        load_checkpoint(path)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.pd"
    path.write_bytes(b"")
    with pytest.raises(CheckpointError, match="bad header"):
        load_checkpoint(path)


def test_truncated_payload_rejected(tmp_path):
    path = save_checkpoint(_make_model(), tmp_path / "m.pd")
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)


def test_trailing_bytes_rejected(tmp_path):
    path = save_checkpoint(_make_model(), tmp_path / "m.pd")
    path.write_bytes(path.read_bytes() + b"\0" * 8)
    with pytest.raises(CheckpointError, match="unexpected bytes"):
        load_checkpoint(path)


def test_config_that_disagrees_with_params_rejected(tmp_path):
    path = save_checkpoint(_make_model(), tmp_path / "m.pd")
    data = path.read_bytes()
    assert b"\nc=3\n" in data
    path.write_bytes(data.replace(b"\nc=3\n", b"\nc=4\n", 1))
    with pytest.raises(CheckpointError, match="shape mismatch"):
        load_checkpoint(path)


def test_checkpoint_errors_are_value_errors():
    assert issubclass(CheckpointError, ValueError)


@pytest.mark.parametrize("bad", [b"?", b"0"])
def test_unreadable_param_shape_rejected(tmp_path, bad):
    path = save_checkpoint(_make_model(), tmp_path / "m.pd")
    data, n = re.subn(rb"(\nparam \S+ f64 )\d", rb"\g<1>" + bad, path.read_bytes(), count=1)
    assert n == 1
    path.write_bytes(data)
    with pytest.raises(CheckpointError, match="Bad shape"):
        load_checkpoint(path)


def test_loading_does_not_draw_initial_weights(tmp_path, monkeypatch):
    model = _make_model()
    path = save_checkpoint(model, tmp_path / "m.pd")

    def no_init(self, rng):
        raise AssertionError("initial weights drawn while loading")

    monkeypatch.setattr(PdIaeModel, "init_params", no_init)
    loaded = load_checkpoint(path)
    assert all(np.array_equal(loaded.params[k], model.params[k]) for k in model.params)


def test_slot_layout_matches_built_model():
    model = PdIaeModel(PdIaeConfig(d=1, L=3, K=2, m=8, c=3, seed=5))
    layout = PdIaeModel.slot_layout(model.config)
    assert [(s.name, s.shape, s.is_complex) for s in layout] == \
           [(s.name, s.shape, s.is_complex) for s in model.slots()]
