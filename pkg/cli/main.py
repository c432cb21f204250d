"""
Command-line entry point.

    pdiae gen-data --task scatter --n 64 --seed 7 --out d.pds
    pdiae train    --data d.pds --out runs/train [--config run.cfg] [--set lr=1e-4]
    pdiae eval     --ckpt runs/train/model.pd --data test.pds --grids 32,48,64
    pdiae oracle   --data d.pds --epsilon 1e-3
    pdiae bench    --kind pd --sizes 4096,32768
    pdiae inspect  --ckpt runs/train/model.pd

Every subcommand takes --config FILE and repeated --set KEY=VALUE; dedicated
flags (--seed, --n, ...) win over --set, which wins over the file. Each run
writes manifest.txt into its output directory.

Exit codes:
    0   success
    1   bad configuration, bad input file or a failed run
    2   usage error (unknown subcommand, missing flag)
"""

import argparse
import hashlib
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from baselines.bench import BenchKind, bench_block, write_bench_csv
from baselines.threads import pin_blas_threads
from cli.manifest import write_manifest
from cli.plots import plot_epoch_log, write_grid_csv, write_png_heatmap, write_svg_heatmap
from cli.run_config import ConfigError, RunConfig, TaskKind, parse_config
from config.settings import settings
from network.checkpoint import read_checkpoint, save_checkpoint
from network.config import BlockKind
from network.model import PdIaeModel
from network.params import param_count, slot_walk_count
from scattering.born import BornOperator
from scattering.dataset import SCATTER_TASK, generate_scatter_samples, generate_symbol_dataset, read_dataset, write_dataset
from scattering.tikhonov import tikhonov_reconstruct
from training.loop import split_pairs, train_loop, write_epoch_log
from training.metrics import avg_relative_error, model_predictor, relative_errors
from training.normalize import NormStats, normalize
from worker.pool import run_parallel

logger = logging.getLogger(__name__)

RESIDUE_WARN = 0.05


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value run configuration file")
    common.add_argument("--set", type=_key_value, action="append", default=[], metavar="KEY=VALUE",
                        help="Override one config key (repeatable)")
    common.add_argument("--seed", type=int, help="Random seed")

    parser = argparse.ArgumentParser(prog="pdiae", description="pd-IAE operator learning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", parents=[common], help="Generate a dataset file")
    gen.add_argument("--task", choices=[t.value for t in TaskKind])
    gen.add_argument("--n", type=int, help="Number of samples")
    gen.add_argument("--noise", type=float, help="Additive noise in percent")
    gen.add_argument("--out", type=Path, required=True, help="Dataset file to write")

    train = sub.add_parser("train", parents=[common], help="Train a model on a dataset")
    train.add_argument("--data", type=Path, required=True)
    train.add_argument("--direction", choices=["inverse", "forward"])
    train.add_argument("--out", type=Path, default=Path(settings.OUTPUT_DIR) / "train")

    ev = sub.add_parser("eval", parents=[common], help="Relative error of a checkpoint across grids")
    ev.add_argument("--ckpt", type=Path, required=True)
    ev.add_argument("--data", type=Path, required=True)
    ev.add_argument("--grids", type=_int_list, default=(), help="Comma-separated grid sizes")
    ev.add_argument("--direction", choices=["inverse", "forward"])
    ev.add_argument("--out", type=Path, default=Path(settings.OUTPUT_DIR) / "eval")

    oracle = sub.add_parser("oracle", parents=[common], help="Tikhonov reconstructions of a scattering dataset")
    oracle.add_argument("--data", type=Path, required=True)
    oracle.add_argument("--epsilon", type=float)
    oracle.add_argument("--count", type=int, default=None, help="Reconstruct only the first COUNT samples")
    oracle.add_argument("--out", type=Path, default=Path(settings.OUTPUT_DIR) / "oracle")

    bench = sub.add_parser("bench", parents=[common], help="Time block forwards across grid sizes")
    bench.add_argument("--kind", choices=[k.value for k in BenchKind] + ["all"], default="all")
    bench.add_argument("--sizes", type=_int_list, default=(4096, 8192, 16384, 32768))
    bench.add_argument("--repeats", type=int, default=settings.BENCH_REPEATS)
    bench.add_argument("--out", type=Path, default=Path(settings.OUTPUT_DIR) / "bench")

    inspect = sub.add_parser("inspect", parents=[common], help="Parameter counts and checkpoint manifest")
    inspect.add_argument("--ckpt", type=Path, help="Checkpoint to describe; omit to count the configured model")
    inspect.add_argument("--out", type=Path, default=Path(settings.OUTPUT_DIR) / "inspect")
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    overrides: dict[str, object] = dict(args.set)
    for key in ("seed", "task", "n", "noise", "direction", "epsilon"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return parse_config(args.config, overrides)


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ── Subcommands ─────────────────────────────────────────────────


def cmd_gen_data(args, config: RunConfig, argv: Sequence[str]) -> None:
    if config.task == TaskKind.SCATTER:
        samples = generate_scatter_samples(config.n, config.geometry(), config.seed, config.noise)
        path = write_dataset(samples, args.out)
    else:
        data = generate_symbol_dataset(config.task.value, config.n, config.s, config.m_gen,
                                       config.seed, config.noise, config.k0)
        path = write_dataset(data, args.out)
    write_manifest(path.parent, "gen-data", argv, config, {"dataset": str(path)})
    print(f"wrote {config.n} '{config.task.value}' samples to {path}")


def _matching_task(config: RunConfig, task: str) -> RunConfig:
    if config.task.value != task:
        logger.info(f"Dataset task is '{task}'; using it instead of the configured '{config.task.value}'")
        return config.model_copy(update={"task": TaskKind(task)})
    return config


def cmd_train(args, config: RunConfig, argv: Sequence[str]) -> None:
    data = read_dataset(args.data)
    config = _matching_task(config, data.task)
    inputs, targets = data.pairs(config.direction.value)
    split = split_pairs(inputs, targets, config.train_size(len(inputs)))
    norm = NormStats.fit(split.train.inputs, split.train.targets)
    model = PdIaeModel(config.model_config_for())
    logger.info(f"Training {model.param_count()} parameters on {len(split.train)} pairs, "
                f"testing on {len(split.test)}")

    result = train_loop(model, split, config.train_config(), norm)
    out = Path(args.out)
    save_checkpoint(result.model, out / "model.pd", norm)
    write_epoch_log(result.log, out / "train_log.csv")
    plot_epoch_log(result.log, out / "train_log.svg")

    if result.model.config.real_output:
        residue = result.model.imaginary_residue(normalize(split.test.inputs, norm.inputs))
        log = logger.warning if residue > RESIDUE_WARN else logger.info
        log(f"Imaginary residue of the projection on test inputs: {residue:.3e}")

    target = split.test.targets[:1]
    prediction = model_predictor(result.model, norm)(split.test.inputs[:1], target.shape[2:])
    write_grid_csv(prediction[0, 0], out / "prediction.csv")
    if prediction.ndim == 4:
        write_png_heatmap(np.real(prediction[0, 0]), out / "prediction.png")
        write_png_heatmap(np.real(target[0, 0]), out / "target.png")

    write_manifest(out, "train", argv, config, {
        "data": str(args.data), "best_epoch": str(result.best_epoch),
        "best_test_rel_err": repr(result.best_error), "steps": str(result.steps),
    })
    print(f"best test relative error {result.best_error:.4e} at epoch {result.best_epoch} "
          f"({result.steps} steps); checkpoint {out / 'model.pd'}")


def cmd_eval(args, config: RunConfig, argv: Sequence[str]) -> None:
    before = file_sha256(args.ckpt)
    loaded = read_checkpoint(args.ckpt)
    data = read_dataset(args.data)
    inputs, targets = data.pairs(config.direction.value)
    cfg = loaded.model.config
    report = avg_relative_error(model_predictor(loaded.model, loaded.norm), inputs, targets, args.grids,
                                cfg.d, cfg.m, max_workers=settings.WORKER_POOL_SIZE)
    after = file_sha256(args.ckpt)
    if after != before:
        raise ValueError(f"Checkpoint {args.ckpt} changed during evaluation ({before[:12]} → {after[:12]})")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [("native" if s is None else str(s), err) for s, err in report.per_grid.items()]
    rows.append(("average", report.mean))
    with (out / "eval.csv").open("w", encoding="utf-8") as fh:
        fh.write("grid,rel_err\n")
        fh.writelines(f"{grid},{err!r}\n" for grid, err in rows)
    write_manifest(out, "eval", argv, config, {
        "checkpoint": str(args.ckpt), "checkpoint_sha256": before, "data": str(args.data),
        "skipped": str(report.skipped),
    })

    print("{:<10} {:>12}".format("Grid", "Rel. error"))
    print("-" * 23)
    for grid, err in rows:
        print("{:<10} {:>12.4e}".format(grid, err))


def cmd_oracle(args, config: RunConfig, argv: Sequence[str]) -> None:
    data = read_dataset(args.data)
    if data.task != SCATTER_TASK:
        raise ValueError(f"The oracle needs a scattering dataset, {args.data} holds '{data.task}'")
    samples = data.samples()[:args.count]
    op = BornOperator(data.geometry)
    results = run_parallel(lambda s: tikhonov_reconstruct(s.measurement, op, config.epsilon), samples)

    truth = np.stack([s.eta for s in samples])
    recon = np.stack([r.eta for r in results])
    errors = relative_errors(truth, recon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "oracle.csv").open("w", encoding="utf-8") as fh:
        fh.write("index,rel_err,iterations,residual,converged\n")
        for i, (err, r) in enumerate(zip(errors, results)):
            fh.write(f"{i},{err!r},{r.iterations},{r.residual!r},{str(r.converged).lower()}\n")
    write_grid_csv(recon[0], out / "reconstruction.csv")
    write_png_heatmap(truth[0], out / "truth.png")
    write_png_heatmap(recon[0], out / "reconstruction.png")
    write_svg_heatmap(recon[0], out / "reconstruction.svg", title=f"Tikhonov ε={config.epsilon:g}")
    write_manifest(out, "oracle", argv, config, {"data": str(args.data)})

    n_bad = sum(not r.converged for r in results)
    print(f"{len(samples)} reconstructions, mean relative error {np.nanmean(errors):.4e}"
          + (f", {n_bad} without CG convergence" if n_bad else ""))


def cmd_bench(args, config: RunConfig, argv: Sequence[str]) -> None:
    pin_blas_threads()
    kinds = list(BenchKind) if args.kind == "all" else [BenchKind(args.kind)]
    rows = []
    for kind in kinds:
        rows.extend(bench_block(kind, args.sizes, args.repeats, m=config.m, K=config.K,
                                hidden=config.hidden_widths, seed=config.seed))
    out = Path(args.out)
    write_bench_csv(rows, out / "bench.csv")
    write_manifest(out, "bench", argv, config)
    print("{:<12} {:>8} {:>14}".format("Kind", "s", "Median (ms)"))
    print("-" * 36)
    for r in rows:
        print("{:<12} {:>8} {:>14.3f}".format(r.kind, r.s, r.median_ns / 1e6))


def cmd_inspect(args, config: RunConfig, argv: Sequence[str]) -> None:
    if args.ckpt is not None:
        loaded = read_checkpoint(args.ckpt)
        model, header = loaded.model, loaded.manifest
    else:
        model, header = PdIaeModel(config.model_config_for()), None
    counts = param_count(model.config)
    walked = slot_walk_count(model)
    if walked != counts:
        raise ValueError(f"Closed-form count {counts.total} disagrees with the slot walk {walked.total}")
    other_kind = BlockKind.DENSE_IAE if model.config.block == BlockKind.PD else BlockKind.PD
    other = param_count(model.config.model_copy(update={"block": other_kind}))

    if header is not None:
        print(header.rstrip())
        print()
    print("{:<12} {:>12}".format("Part", "Parameters"))
    print("-" * 25)
    for part, n in counts.breakdown.items():
        print("{:<12} {:>12,}".format(part, n))
    print("{:<12} {:>12,}".format("total", counts.total))
    print(f"\nsame network with {other_kind.value} blocks: {other.total:,} parameters")
    write_manifest(args.out, "inspect", argv, config, {
        "checkpoint": str(args.ckpt) if args.ckpt else "none", "param_count": str(counts.total),
    })


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
    "inspect": cmd_inspect,
}


def dispatch(argv: Sequence[str]) -> int:
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_run_config(args)
        COMMANDS[args.command](args, config, ["pdiae", *argv])
    except (ValueError, OSError) as exc:
        logger.error(f"{args.command} failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
