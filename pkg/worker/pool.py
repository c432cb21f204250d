"""
Worker pool — fans independent tasks out over a thread pool.

    ┌───────────────────────────────────────────────┐
    │                  WorkerPool                    │
    │                                               │
    │  map(fn, items)                               │
    │     │ submit() one future per item            │
    │     ▼                                         │
    │  ┌─────────────────────────────────────────┐  │
    │  │ ThreadPoolExecutor (WORKER_POOL_SIZE)    │  │
    │  │  ┌────────┐ ┌────────┐ ┌────────┐       │  │
    │  │  │Thread 1│ │Thread 2│ │Thread 3│  …    │  │
    │  │  └────────┘ └────────┘ └────────┘       │  │
    │  └─────────────────────────────────────────┘  │
    │     │ results collected in submission order   │
    └─────┴─────────────────────────────────────────┘

Used for sample generation (each index draws from its own seeded stream, so
output is identical for any pool size) and for evaluation sweeps across
grids. numpy releases the GIL inside FFTs and matrix products, which is
where these tasks spend their time.

A task that raises is logged with its index, the remaining futures are
cancelled and the exception propagates to the caller.
"""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import Future, ThreadPoolExecutor
from typing import TypeVar

from config.settings import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:

    def __init__(self, max_workers: int | None = None, name: str = "pdiae-worker"):
        self.max_workers = max_workers or settings.WORKER_POOL_SIZE
        self._executor = ThreadPoolExecutor(
            max_workers=self.max_workers,
            thread_name_prefix=name,
        )

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """fn over items, results in input order."""
        futures: list[Future] = [self._executor.submit(fn, item) for item in items]
        results: list[R] = []
        for index, future in enumerate(futures):
            try:
                results.append(future.result())
            except Exception as e:
                logger.error(f"Worker task {index} failed: {e}")
                for pending in futures[index + 1:]:
                    pending.cancel()
                raise
        logger.debug(f"Worker pool finished {len(results)} tasks on {self.max_workers} threads")
        return results


def run_parallel(fn: Callable[[T], R], items: Iterable[T], max_workers: int | None = None) -> list[R]:
    """One-shot pool: map fn over items and shut down. max_workers=1 runs inline."""
    items = list(items)
    if max_workers == 1:
        return [fn(item) for item in items]
    with WorkerPool(max_workers) as pool:
        return pool.map(fn, items)
