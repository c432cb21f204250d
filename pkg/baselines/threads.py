"""
BLAS thread pinning for timing runs.

The BLAS/OpenMP pools read these variables once, when numpy is first
imported. Entry points that time code call pin_blas_threads() before that
import; this module must stay free of numpy for that to work.
"""

import logging
import os
import sys

logger = logging.getLogger(__name__)

BLAS_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def pin_blas_threads() -> list[str]:
    """Set each unset thread variable to 1. Returns the ones it set."""
    pinned = [var for var in BLAS_THREAD_VARS if var not in os.environ]
    for var in pinned:
        os.environ[var] = "1"
    if pinned and "numpy" in sys.modules:
        logger.warning(f"numpy was imported before {', '.join(pinned)} were pinned; "
                       f"timings may use more than one BLAS thread")
    return pinned
