"""
Run manifest: what a subcommand needs to be rerun exactly.

Written as manifest.txt into the run's output directory:
    command=<subcommand>
    argv=<shell-quoted argv>
    seed=<seed>
    formats=PDIAE1,PDSC1
    numpy=<version>
    config.<key>=<value>   (the full validated RunConfig echo)
"""

import logging
import shlex
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from cli.run_config import RunConfig

logger = logging.getLogger(__name__)

FILE_FORMATS = ("PDIAE1", "PDSC1")
MANIFEST_NAME = "manifest.txt"


def manifest_lines(command: str, argv: Sequence[str], config: RunConfig,
                   extra: dict[str, str] | None = None) -> list[str]:
    lines = [
        f"command={command}",
        f"argv={shlex.join(argv)}",
        f"seed={config.seed}",
        f"formats={','.join(FILE_FORMATS)}",
        f"numpy={np.__version__}",
    ]
    lines += [f"{key}={value}" for key, value in (extra or {}).items()]
    lines += [f"config.{line}" for line in config.echo()]
    return lines


def write_manifest(out_dir: str | Path, command: str, argv: Sequence[str], config: RunConfig,
                   extra: dict[str, str] | None = None) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(manifest_lines(command, argv, config, extra)) + "\n", encoding="utf-8")
    logger.info(f"Wrote run manifest {path}")
    return path


def config_from_manifest(path: str | Path) -> dict[str, str]:
    """The config.* entries of a manifest, as raw key → value strings."""
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("config."):
            key, _, value = line[len("config."):].partition("=")
            out[key] = value
    return out
