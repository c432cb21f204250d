"""
Run configuration: one flat, closed schema for every subcommand.

Sources, lowest to highest precedence:
    1. field defaults below
    2. a plain-text file, one key=value per line, `#` starts a comment
    3. command-line overrides

Every key is checked against the schema; an unknown key, a malformed line or
a value that fails validation raises ConfigError naming the line (or the
flag) it came from. The validated config echoes back as key=value lines,
which is what run manifests record.
"""

import enum
import math
import logging
from collections.abc import Mapping
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config.settings import settings
from network.config import BlockKind, PdIaeConfig
from scattering.geometry import ScatterGeometry
from spectral.grid import ResampleMethod
from training.config import TrainConfig

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Bad configuration input; `line` is the 1-based file line, or None for flags."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class TaskKind(str, enum.Enum):
    SCATTER = "scatter"
    DERIVATIVE = "derivative"
    ABS_XI = "abs_xi"
    BAND = "band"


class Direction(str, enum.Enum):
    INVERSE = "inverse"      # Λ → η
    FORWARD = "forward"      # η → Λ


class RunConfig(BaseModel):
    # ── Task ────────────────────────────────────────────────────
    task: TaskKind = TaskKind.DERIVATIVE
    direction: Direction = Direction.INVERSE
    n: int = Field(default=200, ge=1, description="Samples to generate")
    n_train: int | None = Field(default=None, ge=1, description="Training pairs; None means 80%")
    noise: float = Field(default=0.0, ge=0, description="Additive noise, percent of signal RMS")
    s: int = Field(default=64, ge=4, description="Grid size of symbol tasks")
    m_gen: int = Field(default=8, ge=2, description="Band of symbol-task inputs")
    k0: float = Field(default=4.0, gt=0, description="Width of the band symbol")

    # ── Scattering ──────────────────────────────────────────────
    n_y: int = Field(default=24, ge=8)
    n_dir: int = Field(default=16, ge=4)
    omega: float = Field(default=4 * math.pi, gt=0)
    epsilon: float = Field(default=1e-3, gt=0, description="Tikhonov regularization")

    # ── Architecture ────────────────────────────────────────────
    L: int = Field(default=4, ge=1)
    K: int = Field(default=3, ge=1)
    m: int = Field(default=12, ge=2)
    c: int = Field(default=8, ge=1)
    hidden_widths: tuple[int, ...] = (32, 32)
    mid_hidden: int | None = Field(default=None, ge=1)
    block: BlockKind = BlockKind.PD
    coord_channels: bool = True

    # ── Training ────────────────────────────────────────────────
    lr: float = Field(default=1e-3, gt=0)
    batch_size: int = Field(default=5, ge=1)
    plateau_halve: int = Field(default=40, ge=1)
    plateau_stop: int = Field(default=100, ge=1)
    aug_weight: float = Field(default=1.0, ge=0)
    augment_grids: tuple[int, ...] = (24, 32, 48, 64, 96)
    augment_method: ResampleMethod = ResampleMethod.SPECTRAL
    eval_grids: tuple[int, ...] = ()
    max_epochs: int = Field(default=500, ge=1)
    max_steps: int | None = Field(default=None, ge=1)

    # ── Run ─────────────────────────────────────────────────────
    seed: int = settings.DEFAULT_SEED

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("m")
    @classmethod
    def _even_modes(cls, m: int) -> int:
        if m % 2:
            raise ValueError(f"m must be even (centered band), got {m}")
        return m

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.plateau_halve >= self.plateau_stop:
            raise ValueError(
                f"plateau_halve ({self.plateau_halve}) must be smaller than plateau_stop ({self.plateau_stop})"
            )
        if self.task != TaskKind.SCATTER and self.s <= self.m_gen:
            raise ValueError(f"s ({self.s}) must exceed m_gen ({self.m_gen})")
        return self

    # ── Derived configs ─────────────────────────────────────────

    @property
    def d(self) -> int:
        return 2 if self.task == TaskKind.SCATTER else 1

    @property
    def complex_targets(self) -> bool:
        return self.task == TaskKind.SCATTER and self.direction == Direction.FORWARD

    def geometry(self) -> ScatterGeometry:
        return ScatterGeometry(n_y=self.n_y, n_dir=self.n_dir, omega=self.omega)

    def model_config_for(self) -> PdIaeConfig:
        return PdIaeConfig(
            d=self.d, L=self.L, K=self.K, m=self.m, c=self.c,
            hidden_widths=self.hidden_widths, mid_hidden=self.mid_hidden, block=self.block,
            coord_channels=self.coord_channels, real_output=not self.complex_targets, seed=self.seed,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            lr=self.lr, batch_size=self.batch_size, plateau_halve=self.plateau_halve,
            plateau_stop=self.plateau_stop, aug_weight=self.aug_weight, augment_grids=self.augment_grids,
            augment_method=self.augment_method, eval_grids=self.eval_grids, max_epochs=self.max_epochs,
            max_steps=self.max_steps, seed=self.seed,
        )

    def train_size(self, n_pairs: int) -> int:
        return self.n_train if self.n_train is not None else max(1, int(0.8 * n_pairs))

    def echo(self) -> list[str]:
        """key=value lines that parse back to this config."""
        return [f"{key}={_format(value)}" for key, value in self.model_dump(mode="json").items()]


_TUPLE_FIELDS = {name for name, info in RunConfig.model_fields.items()
                 if getattr(info.annotation, "__origin__", None) is tuple}
_OPTIONAL_FIELDS = {"n_train", "mid_hidden", "max_steps"}


def _format(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value).lower() if isinstance(value, bool) else str(value)


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _OPTIONAL_FIELDS and raw.lower() == "none":
        return None
    if key in _TUPLE_FIELDS:
        return tuple(part.strip() for part in raw.split(",") if part.strip())
    return raw


def read_config_file(path: str | Path) -> dict[str, tuple[str, int]]:
    """key → (raw value, line number). Unknown keys and malformed lines raise."""
    values: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {line.strip()!r}", lineno)
        if key not in RunConfig.model_fields:
            raise ConfigError(f"unknown key '{key}'", lineno)
        if key in values:
            raise ConfigError(f"duplicate key '{key}' (first set on line {values[key][1]})", lineno)
        values[key] = (value.strip(), lineno)
    return values


def parse_config(path: str | Path | None = None, overrides: Mapping[str, object] | None = None) -> RunConfig:
    """Defaults, then the file, then overrides (flags). Raises ConfigError."""
    sources: dict[str, int | None] = {}
    merged: dict[str, object] = {}
    if path is not None:
        for key, (raw, lineno) in read_config_file(path).items():
            merged[key] = _coerce(key, raw)
            sources[key] = lineno
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in RunConfig.model_fields:
            raise ConfigError(f"unknown key '{key}'")
        merged[key] = _coerce(key, value) if isinstance(value, str) else value
        sources[key] = None

    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else ""
        message = first["msg"].removeprefix("Value error, ")
        where = f"'{key}': " if key else ""
        raise ConfigError(f"{where}{message}", sources.get(key)) from None
    for line in config.echo():
        logger.info(f"config {line}")
    return config
