"""
CLI entry point for block timing benchmarks.

Usage:
    python -m benchmarks.run_benchmark                              # all kinds, s = 2^12 … 2^15
    python -m benchmarks.run_benchmark --kind pd                    # single kind
    python -m benchmarks.run_benchmark --sizes 256,2048 --repeats 5
    python -m benchmarks.run_benchmark --csv runs/bench.csv

Threads are pinned to one before numpy loads so timings reflect the
algorithm, not the BLAS pool.
"""

from baselines.threads import pin_blas_threads

pin_blas_threads()

import argparse
import logging

from baselines.bench import BenchKind, bench_block, scaling_ratios, write_bench_csv
from config.settings import settings


def main():
    parser = argparse.ArgumentParser(description="pd-IAE block timing benchmark")
    parser.add_argument(
        "--kind", type=str, default="all",
        choices=[k.value for k in BenchKind] + ["all"],
        help="Which block to time (default: all)",
    )
    parser.add_argument(
        "--sizes", type=str, default="4096,8192,16384,32768",
        help="Comma-separated ascending grid sizes (default: 2^12 … 2^15)",
    )
    parser.add_argument(
        "--repeats", type=int, default=settings.BENCH_REPEATS,
        help=f"Timed forwards per size (default: {settings.BENCH_REPEATS})",
    )
    parser.add_argument("--m", type=int, default=12, help="Retained modes / latent size (default: 12)")
    parser.add_argument("--csv", type=str, default=None, help="Also write rows to this CSV file")
    args = parser.parse_args()

    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )

    sizes = [int(s) for s in args.sizes.split(",")]
    kinds = list(BenchKind) if args.kind == "all" else [BenchKind(args.kind)]

    print("=== pd-IAE Block Benchmark ===")
    print(f"Kinds: {', '.join(k.value for k in kinds)} | Sizes: {sizes} | Repeats: {args.repeats}\n")

    rows = []
    for kind in kinds:
        rows.extend(bench_block(kind, sizes, args.repeats, m=args.m))

    # Summary table
    print("\n{:<12} {:>8} {:>14}".format("Kind", "s", "Median (ms)"))
    print("-" * 36)
    for r in rows:
        print("{:<12} {:>8} {:>14.3f}".format(r.kind, r.s, r.median_ns / 1e6))

    ratios = scaling_ratios(rows)
    if ratios:
        print("\n{:<12} {:>8} {:>16}".format("Kind", "s", "time(8s)/time(s)"))
        print("-" * 38)
        for (kind, s), ratio in ratios.items():
            print("{:<12} {:>8} {:>16.2f}".format(kind, s, ratio))

    if args.csv:
        write_bench_csv(rows, args.csv)


if __name__ == "__main__":
    main()
