"""
End-to-end tests of the pdiae subcommands on tiny problems.
"""

import csv
import os

import pytest

from baselines.threads import BLAS_THREAD_VARS
from cli.main import dispatch, file_sha256
from cli.manifest import MANIFEST_NAME, config_from_manifest
from scattering.dataset import SCATTER_TASK, read_dataset

TINY_MODEL = ["--set", "L=1", "--set", "K=1", "--set", "m=4", "--set", "c=2", "--set", "hidden_widths=4",
              "--set", "max_epochs=2", "--set", "batch_size=4", "--set", "augment_grids=16",
              "--set", "plateau_halve=1", "--set", "plateau_stop=2"]
SMALL_SCATTER = ["--set", "n_y=16", "--set", "n_dir=8"]


@pytest.fixture
def symbol_file(tmp_path):
    path = tmp_path / "data" / "deriv.pds"
    code = dispatch(["gen-data", "--task", "derivative", "--n", "10", "--seed", "7",
                     "--set", "s=16", "--set", "m_gen=4", "--out", str(path)])
    assert code == 0
    return path


@pytest.fixture
def scatter_file(tmp_path):
    path = tmp_path / "scatter" / "born.pds"
    assert dispatch(["gen-data", "--task", "scatter", "--n", "2", "--seed", "3", *SMALL_SCATTER,
                     "--out", str(path)]) == 0
    return path


def test_usage_errors_exit_2():
    assert dispatch(["bogus"]) == 2
    assert dispatch([]) == 2
    assert dispatch(["gen-data"]) == 2


def test_gen_data_writes_dataset_and_manifest(symbol_file):
    data = read_dataset(symbol_file)
    assert data.task == "derivative"
    assert len(data) == 10
    inputs, targets = data.pairs()
    assert inputs.shape == targets.shape == (10, 1, 16)

    manifest = (symbol_file.parent / MANIFEST_NAME).read_text()
    assert "command=gen-data" in manifest
    assert "seed=7" in manifest
    assert "formats=PDIAE1,PDSC1" in manifest
    assert config_from_manifest(symbol_file.parent / MANIFEST_NAME)["s"] == "16"


def test_gen_data_is_seeded(tmp_path, symbol_file):
    again = tmp_path / "again.pds"
    dispatch(["gen-data", "--task", "derivative", "--n", "10", "--seed", "7",
              "--set", "s=16", "--set", "m_gen=4", "--out", str(again)])
    assert again.read_bytes() == symbol_file.read_bytes()


def test_scatter_gen_data(scatter_file):
    data = read_dataset(scatter_file)
    assert data.task == SCATTER_TASK
    assert data.geometry.n_y == 16
    assert data.fields["measurement"].shape == (2, 8, 8)


def test_invalid_config_exits_1(tmp_path, capsys):
    code = dispatch(["gen-data", "--set", "m=13", "--out", str(tmp_path / "x.pds")])
    assert code == 1
    err = capsys.readouterr().err
    assert "error:" in err
    assert "even" in err


def test_bad_config_file_exits_1(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("lr=0.1\nwarp=9\n")
    assert dispatch(["inspect", "--config", str(cfg), "--out", str(tmp_path / "i")]) == 1
    assert "line 2" in capsys.readouterr().err


def test_missing_data_exits_1(tmp_path):
    assert dispatch(["train", "--data", str(tmp_path / "nope.pds"), "--out", str(tmp_path / "t")]) == 1


def test_train_then_eval(tmp_path, symbol_file, capsys):
    run = tmp_path / "train"
    assert dispatch(["train", "--data", str(symbol_file), "--out", str(run), *TINY_MODEL]) == 0
    for name in ("model.pd", "train_log.csv", "train_log.svg", "prediction.csv", MANIFEST_NAME):
        assert (run / name).exists(), name
    assert "best_epoch=" in (run / MANIFEST_NAME).read_text()

    ckpt = run / "model.pd"
    digest = file_sha256(ckpt)
    out = tmp_path / "eval"
    assert dispatch(["eval", "--ckpt", str(ckpt), "--data", str(symbol_file),
                     "--grids", "16,24", "--out", str(out)]) == 0
    assert file_sha256(ckpt) == digest

    with (out / "eval.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["grid", "rel_err"]
    assert [r[0] for r in rows[1:]] == ["16", "24", "average"]
    errs = [float(r[1]) for r in rows[1:]]
    assert errs[2] == pytest.approx((errs[0] + errs[1]) / 2)
    assert f"checkpoint_sha256={digest}" in (out / MANIFEST_NAME).read_text()
    assert "average" in capsys.readouterr().out


def test_eval_grid_below_modes_exits_1(tmp_path, symbol_file):
    run = tmp_path / "train"
    dispatch(["train", "--data", str(symbol_file), "--out", str(run), *TINY_MODEL])
    assert dispatch(["eval", "--ckpt", str(run / "model.pd"), "--data", str(symbol_file),
                     "--grids", "2", "--out", str(tmp_path / "eval")]) == 1


def test_inspect_checkpoint(tmp_path, symbol_file, capsys):
    run = tmp_path / "train"
    dispatch(["train", "--data", str(symbol_file), "--out", str(run), *TINY_MODEL])
    capsys.readouterr()
    assert dispatch(["inspect", "--ckpt", str(run / "model.pd"), "--out", str(tmp_path / "i")]) == 0
    out = capsys.readouterr().out
    assert "total" in out
    assert "dense_iae blocks" in out


def test_inspect_configured_model(tmp_path, capsys):
    assert dispatch(["inspect", "--set", "block=dense_iae", "--out", str(tmp_path / "i")]) == 0
    assert "pd blocks" in capsys.readouterr().out
    assert "param_count=" in (tmp_path / "i" / MANIFEST_NAME).read_text()


def test_oracle_on_scatter_data(tmp_path, scatter_file):
    out = tmp_path / "oracle"
    assert dispatch(["oracle", "--data", str(scatter_file), "--epsilon", "1e-3",
                     "--count", "1", "--out", str(out)]) == 0
    with (out / "oracle.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert rows[0]["converged"] == "true"
    for name in ("reconstruction.csv", "truth.png", "reconstruction.png", "reconstruction.svg"):
        assert (out / name).exists(), name


def test_oracle_rejects_symbol_data(tmp_path, symbol_file, capsys):
    assert dispatch(["oracle", "--data", str(symbol_file), "--out", str(tmp_path / "o")]) == 1
    assert "scattering dataset" in capsys.readouterr().err


def test_bench_writes_csv(tmp_path):
    out = tmp_path / "bench"
    assert dispatch(["bench", "--kind", "fno", "--sizes", "16,32", "--repeats", "1",
                     "--set", "m=4", "--out", str(out)]) == 0
    with (out / "bench.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["s"]) for r in rows] == [16, 32]


def test_bench_pins_blas_threads(tmp_path, monkeypatch):
    for var in BLAS_THREAD_VARS:
        monkeypatch.delenv(var, raising=False)
    assert dispatch(["bench", "--kind", "pd", "--sizes", "16", "--repeats", "1",
                     "--set", "m=4", "--out", str(tmp_path / "bench")]) == 0
    assert all(os.environ[var] == "1" for var in BLAS_THREAD_VARS)
