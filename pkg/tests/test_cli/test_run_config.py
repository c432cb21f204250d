"""
Tests for run configuration parsing.
"""

import pytest

from cli.run_config import ConfigError, RunConfig, parse_config


def _write(tmp_path, text: str):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def test_empty_file_gives_defaults(tmp_path):
    assert parse_config(_write(tmp_path, "")) == RunConfig()


def test_no_file_gives_defaults():
    assert parse_config() == RunConfig()


def test_flags_beat_file(tmp_path):
    config = parse_config(_write(tmp_path, "lr=0.01\nbatch_size=7\n"), {"lr": "0.001"})
    assert config.lr == 0.001
    assert config.batch_size == 7


def test_comments_blanks_and_lists(tmp_path):
    text = "# desk run\n\naugment_grids = 32, 48 ,64  # three grids\nmax_steps=none\ncoord_channels=false\n"
    config = parse_config(_write(tmp_path, text))
    assert config.augment_grids == (32, 48, 64)
    assert config.max_steps is None
    assert config.coord_channels is False


def test_odd_m_cites_even_rule_and_line(tmp_path):
    with pytest.raises(ConfigError, match="even") as info:
        parse_config(_write(tmp_path, "lr=0.01\nm=13\n"))
    assert info.value.line == 2


def test_unknown_key_names_line(tmp_path):
    with pytest.raises(ConfigError, match="unknown key 'learning_rate'") as info:
        parse_config(_write(tmp_path, "seed=3\nlearning_rate=0.1\n"))
    assert info.value.line == 2


def test_malformed_line_rejected(tmp_path):
    with pytest.raises(ConfigError, match="line 1: expected key=value"):
        parse_config(_write(tmp_path, "just words\n"))


def test_bad_value_names_key(tmp_path):
    with pytest.raises(ConfigError, match="'batch_size'") as info:
        parse_config(_write(tmp_path, "\n\nbatch_size=many\n"))
    assert info.value.line == 3


def test_duplicate_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="duplicate key 'lr'"):
        parse_config(_write(tmp_path, "lr=0.1\nlr=0.2\n"))


def test_unknown_override_rejected():
    with pytest.raises(ConfigError, match="unknown key 'depth'"):
        parse_config(overrides={"depth": "3"})


def test_plateau_order_enforced():
    with pytest.raises(ConfigError, match="plateau_halve"):
        parse_config(overrides={"plateau_halve": "100", "plateau_stop": "40"})


def test_echo_parses_back(tmp_path):
    original = parse_config(overrides={"task": "scatter", "eval_grids": "32,64", "mid_hidden": "16", "omega": "9.5"})
    assert parse_config(_write(tmp_path, "\n".join(original.echo()))) == original


def test_derived_configs():
    config = parse_config(overrides={"task": "scatter", "direction": "forward", "m": "6", "L": "2"})
    model = config.model_config_for()
    assert (model.d, model.m, model.L, model.real_output) == (2, 6, 2, False)
    assert config.geometry().n_y == 24
    assert config.train_config().lr == config.lr
    assert config.train_size(50) == 40
