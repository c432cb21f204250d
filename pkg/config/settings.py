"""
Centralized configuration using pydantic-settings.

How it works:
- Reads environment variables automatically (e.g., PDIAE_LOG_LEVEL env var → Settings.LOG_LEVEL)
- Falls back to defaults defined here if env vars are not set
- Can also read from a .env file in the project root

These are environment-level knobs (logging, threads, output location).
Everything that shapes a particular run (architecture, training schedule,
scattering geometry) lives in cli.run_config.RunConfig instead, so that a
run is reproducible from its manifest alone.
"""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # ── Logging ─────────────────────────────────────────────────
    LOG_LEVEL: str = "INFO"

    # ── Worker ──────────────────────────────────────────────────
    WORKER_POOL_SIZE: int = 4          # threads used by gen-data and eval sweeps

    # ── Reproducibility ─────────────────────────────────────────
    DEFAULT_SEED: int = 1729

    # ── Output ──────────────────────────────────────────────────
    OUTPUT_DIR: str = "runs"

    # ── Benchmark ───────────────────────────────────────────────
    BENCH_REPEATS: int = 20            # timed forwards per grid size

    # ── Tikhonov oracle ─────────────────────────────────────────
    CG_MAX_ITER: int = 500
    CG_TOL: float = 1e-8               # relative residual

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "PDIAE_",
        "extra": "ignore",
    }


# Singleton, import this everywhere
settings = Settings()
