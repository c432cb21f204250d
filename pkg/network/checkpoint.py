"""
Checkpoint file: config, parameters and (optionally) normalization statistics.

Layout:
    magic       8 bytes   b"PDIAE1\\0\\0"
    length      u64 LE    manifest size in bytes
    manifest    UTF-8     config lines    key=<json value>
                          norm lines      norm.<role>.<lo|hi>=<float.hex>
                          param lines     param <name> f64 <d0>x<d1>… <real|complex>
    payload               little-endian float64, one block per param in manifest
                          order; complex slots write the re-block then the im-block

The slot list is rebuilt from the embedded config and must match the param
lines exactly, so a file can only be loaded into the architecture it was
written from.
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from network.config import PdIaeConfig
from network.model import PdIaeModel
from training.normalize import NormStats, RoleStats

logger = logging.getLogger(__name__)

MAGIC = b"PDIAE1\0\0"
_LENGTH = struct.Struct("<Q")


class CheckpointError(ValueError):
    """Raised when a checkpoint file cannot be read back into a model."""


@dataclass(frozen=True)
class LoadedCheckpoint:
    model: PdIaeModel
    norm: NormStats | None
    manifest: str


def _shape_text(shape: tuple[int, ...]) -> str:
    return "x".join(str(n) for n in shape) if shape else "scalar"


def _manifest(model: PdIaeModel, norm: NormStats | None) -> str:
    lines = [f"{key}={json.dumps(value)}" for key, value in model.config.model_dump(mode="json").items()]
    if norm is not None:
        for role, stats in (("inputs", norm.inputs), ("outputs", norm.outputs)):
            lines.append(f"norm.{role}.lo={float(stats.lo).hex()}")
            lines.append(f"norm.{role}.hi={float(stats.hi).hex()}")
    for slot in model.slots():
        kind = "complex" if slot.is_complex else "real"
        lines.append(f"param {slot.name} f64 {_shape_text(slot.shape)} {kind}")
    return "\n".join(lines) + "\n"


def _payload(arr: np.ndarray, is_complex: bool) -> bytes:
    arr = np.asarray(arr, dtype="<f8")
    if is_complex:
        return arr[..., 0].tobytes() + arr[..., 1].tobytes()
    return arr.tobytes()


def save_checkpoint(model: PdIaeModel, path: str | Path, norm: NormStats | None = None) -> Path:
    path = Path(path)
    manifest = _manifest(model, norm).encode("utf-8")
    body = b"".join(_payload(model.params[slot.name], slot.is_complex) for slot in model.slots())
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(MAGIC + _LENGTH.pack(len(manifest)) + manifest + body)
    logger.info(f"Wrote checkpoint {path} ({model.param_count()} parameters, {len(body)} payload bytes)")
    return path


def _parse_manifest(text: str) -> tuple[dict, dict[str, float], list[tuple[str, tuple[int, ...], bool]]]:
    config: dict = {}
    norm: dict[str, float] = {}
    params: list[tuple[str, tuple[int, ...], bool]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        if line.startswith("param "):
            fields = line.split()
            if len(fields) != 5 or fields[2] != "f64" or fields[4] not in ("real", "complex"):
                raise CheckpointError(f"Malformed param line {lineno}: {line!r}")
            try:
                shape = () if fields[3] == "scalar" else tuple(int(n) for n in fields[3].split("x"))
            except ValueError:
                raise CheckpointError(f"Bad shape {fields[3]!r} on param line {lineno}") from None
            if any(n <= 0 for n in shape):
                raise CheckpointError(f"Bad shape {fields[3]!r} on param line {lineno}")
            params.append((fields[1], shape, fields[4] == "complex"))
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CheckpointError(f"Malformed manifest line {lineno}: {line!r}")
        try:
            if key.startswith("norm."):
                norm[key] = float.fromhex(value)
            else:
                config[key] = json.loads(value)
        except ValueError as exc:
            raise CheckpointError(f"Bad value on manifest line {lineno}: {exc}") from None
    return config, norm, params


def _norm_stats(values: dict[str, float]) -> NormStats | None:
    if not values:
        return None
    try:
        return NormStats(
            RoleStats(values["norm.inputs.lo"], values["norm.inputs.hi"]),
            RoleStats(values["norm.outputs.lo"], values["norm.outputs.hi"]),
        )
    except KeyError as exc:
        raise CheckpointError(f"Incomplete normalization statistics: missing {exc}") from None


def read_checkpoint(path: str | Path) -> LoadedCheckpoint:
    data = Path(path).read_bytes()
    header = len(MAGIC) + _LENGTH.size
    if len(data) < header or data[:len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path}: bad header")
    (length,) = _LENGTH.unpack_from(data, len(MAGIC))
    if len(data) < header + length:
        raise CheckpointError(f"{path}: truncated manifest ({len(data) - header} of {length} bytes)")
    try:
        manifest = data[header:header + length].decode("utf-8")
    except UnicodeDecodeError:
        raise CheckpointError(f"{path}: manifest is not UTF-8") from None

    config_values, norm_values, entries = _parse_manifest(manifest)
    try:
        config = PdIaeConfig.model_validate(config_values)
    except ValueError as exc:
        raise CheckpointError(f"{path}: embedded config is invalid: {exc}") from None

    expected = [(slot.name, slot.shape, slot.is_complex) for slot in PdIaeModel.slot_layout(config)]
    if entries != expected:
        raise CheckpointError(f"{path}: parameter shape mismatch between manifest and embedded config")

    offset = header + length
    params = {}
    for name, shape, is_complex in entries:
        count = int(np.prod(shape))
        nbytes = 8 * count
        if len(data) < offset + nbytes:
            raise CheckpointError(f"{path}: truncated payload at parameter '{name}'")
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=offset).astype(np.float64)
        offset += nbytes
        if is_complex:
            half = count // 2
            arr = np.stack([flat[:half], flat[half:]], axis=-1).reshape(shape)
        else:
            arr = flat.reshape(shape)
        params[name] = arr
    if offset != len(data):
        raise CheckpointError(f"{path}: {len(data) - offset} unexpected bytes after the payload")

    model = PdIaeModel(config, params)
    logger.info(f"Loaded checkpoint {path} ({model.param_count()} parameters)")
    return LoadedCheckpoint(model=model, norm=_norm_stats(norm_values), manifest=manifest)


def load_checkpoint(path: str | Path) -> PdIaeModel:
    return read_checkpoint(path).model
