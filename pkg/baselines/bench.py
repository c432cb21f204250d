"""
Block timing — median forward wall time per grid size for each block kind.

How it works:
1. Build one block of the requested kind with seeded parameters
2. For each grid size s: one warm-up forward, then `repeats` timed forwards
3. Report the median in nanoseconds

The pd block should scale like s log s (FFTs plus pointwise basis
evaluation), the dense-IAE block like s·m (one kernel evaluation per
grid/latent pair), the FNO block like s log s.

Timings are meant to be single-threaded: both entry points call
baselines.threads.pin_blas_threads() before numpy is imported.
"""

import csv
import enum
import logging
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from autodiff.tape import Tape
from baselines.spectral_conv import SpectralConvBlock
from config.settings import settings
from network.config import BlockKind
from network.registry import get_codec
from pdcore.base import ParamModule
from pdcore.block import MultiChannelBlock

logger = logging.getLogger(__name__)


class BenchKind(str, enum.Enum):
    PD = "pd"
    DENSE_IAE = "dense_iae"
    FNO = "fno"


BlockBuilder = Callable[[int, int, int, int, Sequence[int]], ParamModule]


def _pd_block(d, m, K, c, hidden):
    return MultiChannelBlock("bench", d, m, K, c, codec=get_codec(BlockKind.PD, hidden))


def _dense_block(d, m, K, c, hidden):
    return MultiChannelBlock("bench", d, m, K, c, codec=get_codec(BlockKind.DENSE_IAE, hidden))


def _fno_block(d, m, K, c, hidden):
    return SpectralConvBlock("bench", d, m, c)


_REGISTRY: dict[BenchKind, BlockBuilder] = {
    BenchKind.PD: _pd_block,
    BenchKind.DENSE_IAE: _dense_block,
    BenchKind.FNO: _fno_block,
}


def bench_kind(kind: BenchKind | str) -> BenchKind:
    try:
        return BenchKind(kind)
    except ValueError:
        raise ValueError(f"Unknown block kind: '{kind}'. Available: {[k.value for k in BenchKind]}") from None


@dataclass(frozen=True)
class BenchRow:
    kind: str
    s: int
    median_ns: int


class BlockBenchmark:

    def __init__(self, kind: BenchKind | str, d: int = 1, m: int = 12, K: int = 3, c: int = 1,
                 hidden: Sequence[int] = (32, 32), seed: int = settings.DEFAULT_SEED):
        self.kind = bench_kind(kind)
        self.d, self.c = d, c
        self.block = _REGISTRY[self.kind](d, m, K, c, tuple(hidden))
        self.params = self.block.init_params(np.random.default_rng(seed))
        self._rng = np.random.default_rng(seed + 1)

    def _field(self, s: int) -> np.ndarray:
        return self._rng.normal(size=(1, self.c, *(s,) * self.d, 2))

    def forward_once(self, field: np.ndarray) -> int:
        """Wall time of one forward, in nanoseconds."""
        start = time.perf_counter_ns()
        tape = Tape(self.params)
        self.block.forward(tape, tape.constant(field))
        return time.perf_counter_ns() - start

    def time_size(self, s: int, repeats: int) -> int:
        field = self._field(s)
        self.forward_once(field)
        return int(np.median([self.forward_once(field) for _ in range(repeats)]))

    def run(self, sizes: Sequence[int], repeats: int) -> list[BenchRow]:
        if list(sizes) != sorted(sizes):
            raise ValueError(f"Grid sizes must be ascending, got {list(sizes)}")
        if repeats < 1:
            raise ValueError(f"repeats must be ≥ 1, got {repeats}")
        rows = []
        for s in sizes:
            row = BenchRow(self.kind.value, int(s), self.time_size(int(s), repeats))
            logger.info(f"{row.kind} s={row.s}: median {row.median_ns / 1e6:.3f} ms over {repeats} runs")
            rows.append(row)
        return rows


def bench_block(kind: BenchKind | str, sizes: Sequence[int], repeats: int | None = None,
                **block_options) -> list[BenchRow]:
    repeats = settings.BENCH_REPEATS if repeats is None else repeats
    return BlockBenchmark(kind, **block_options).run(sizes, repeats)


def scaling_ratios(rows: Sequence[BenchRow], factor: int = 8) -> dict[tuple[str, int], float]:
    """time(factor·s) / time(s) for every measured pair, keyed by (kind, s)."""
    times = {(r.kind, r.s): r.median_ns for r in rows}
    return {(kind, s): times[(kind, s * factor)] / t
            for (kind, s), t in times.items() if (kind, s * factor) in times and t > 0}


def write_bench_csv(rows: Sequence[BenchRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["kind", "s", "median_ns"])
        writer.writeheader()
        writer.writerows(asdict(r) for r in rows)
    logger.info(f"Wrote {len(rows)} timing rows to {path}")
    return path
