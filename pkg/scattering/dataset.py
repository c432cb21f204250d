"""
Dataset files and their generation.

Layout:
    magic       8 bytes   b"PDSC1\\0\\0\\0"
    length      u64 LE    manifest size in bytes
    manifest    UTF-8     meta lines     key=value   (task, count, noise, geometry or grid)
                          field lines    field <name> f64 <d0>x<d1>… <real|complex>
    payload               little-endian float64, sample by sample; within a sample
                          one block per field in manifest order, complex fields
                          writing the re-block then the im-block

A scattering file carries the fields eta (real medium) and measurement
(complex Λ). A symbol-task file carries input and target.

Generation draws every sample from its own stream default_rng([seed, index]),
so a file is identical whatever the worker pool size.
"""

import logging
import struct
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from scattering.born import BornOperator
from scattering.geometry import ScatterGeometry
from scattering.media import MediaRanges, gen_point_media
from scattering.noise import add_noise
from scattering.symbols import SymbolKind, gen_symbol_task_1d, symbol_kind
from worker.pool import run_parallel

logger = logging.getLogger(__name__)

MAGIC = b"PDSC1\0\0\0"
_LENGTH = struct.Struct("<Q")
SCATTER_TASK = "scatter"


class DatasetError(ValueError):
    """Raised when a dataset file cannot be read back."""


@dataclass(frozen=True)
class ScatterSample:
    eta: np.ndarray              # (n_y, n_y) real
    measurement: np.ndarray      # (n_dir, n_dir) complex
    geometry: ScatterGeometry
    noise: float = 0.0


@dataclass(frozen=True)
class Dataset:
    task: str
    fields: dict[str, np.ndarray]            # name → (count, *shape)
    meta: dict[str, str] = field(default_factory=dict)
    noise: float = 0.0

    def __post_init__(self):
        counts = {name: len(arr) for name, arr in self.fields.items()}
        if len(set(counts.values())) > 1:
            raise ValueError(f"Fields disagree on the sample count: {counts}")

    def __len__(self) -> int:
        return len(next(iter(self.fields.values()))) if self.fields else 0

    @property
    def geometry(self) -> ScatterGeometry | None:
        return ScatterGeometry.from_manifest(self.meta) if self.task == SCATTER_TASK else None

    def samples(self) -> list[ScatterSample]:
        if self.task != SCATTER_TASK:
            raise ValueError(f"A '{self.task}' dataset has no scattering samples")
        geometry = self.geometry
        return [ScatterSample(eta, lam, geometry, self.noise)
                for eta, lam in zip(self.fields["eta"], self.fields["measurement"])]

    def pairs(self, direction: str = "inverse") -> tuple[np.ndarray, np.ndarray]:
        """
        Channel-first (inputs, targets) for training. Scattering data maps
        Λ → η for direction="inverse" and η → Λ for "forward".
        """
        if self.task == SCATTER_TASK:
            eta, lam = self.fields["eta"][:, None], self.fields["measurement"][:, None]
            if direction == "inverse":
                return lam, eta
            if direction == "forward":
                return eta, lam
            raise ValueError(f"Unknown direction: '{direction}'. Available: ['inverse', 'forward']")
        return self.fields["input"][:, None], self.fields["target"][:, None]


def scatter_dataset(samples: Sequence[ScatterSample]) -> Dataset:
    if not samples:
        raise ValueError("Cannot build a dataset from zero samples")
    geometry, noise = samples[0].geometry, samples[0].noise
    for i, sample in enumerate(samples):
        if sample.geometry != geometry:
            raise ValueError(f"Sample {i} has geometry {sample.geometry}, the file uses {geometry}")
        if sample.noise != noise:
            raise ValueError(f"Sample {i} has noise {sample.noise}%, the file uses {noise}%")
    return Dataset(
        task=SCATTER_TASK,
        fields={"eta": np.stack([s.eta for s in samples]).astype(np.float64),
                "measurement": np.stack([s.measurement for s in samples]).astype(np.complex128)},
        meta=geometry.manifest(),
        noise=noise,
    )


# ── Files ───────────────────────────────────────────────────────


def _shape_text(shape: tuple[int, ...]) -> str:
    return "x".join(str(n) for n in shape) if shape else "scalar"


def _manifest(data: Dataset) -> str:
    lines = [f"task={data.task}", f"count={len(data)}", f"noise={float(data.noise).hex()}"]
    lines += [f"{key}={value}" for key, value in data.meta.items()]
    for name, arr in data.fields.items():
        kind = "complex" if np.iscomplexobj(arr) else "real"
        lines.append(f"field {name} f64 {_shape_text(arr.shape[1:])} {kind}")
    return "\n".join(lines) + "\n"


def _sample_bytes(data: Dataset, index: int) -> bytes:
    chunks = []
    for arr in data.fields.values():
        x = arr[index]
        if np.iscomplexobj(x):
            chunks += [np.asarray(x.real, dtype="<f8").tobytes(), np.asarray(x.imag, dtype="<f8").tobytes()]
        else:
            chunks.append(np.asarray(x, dtype="<f8").tobytes())
    return b"".join(chunks)


def write_dataset(data: Dataset | Sequence[ScatterSample], path: str | Path) -> Path:
    if not isinstance(data, Dataset):
        data = scatter_dataset(data)
    path = Path(path)
    manifest = _manifest(data).encode("utf-8")
    body = b"".join(_sample_bytes(data, i) for i in range(len(data)))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(MAGIC + _LENGTH.pack(len(manifest)) + manifest + body)
    logger.info(f"Wrote {len(data)} '{data.task}' samples to {path}")
    return path


def _parse_manifest(text: str, path) -> tuple[dict[str, str], list[tuple[str, tuple[int, ...], bool]]]:
    meta: dict[str, str] = {}
    fields: list[tuple[str, tuple[int, ...], bool]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        if line.startswith("field "):
            parts = line.split()
            if len(parts) != 5 or parts[2] != "f64" or parts[4] not in ("real", "complex"):
                raise DatasetError(f"{path}: malformed field line {lineno}: {line!r}")
            try:
                shape = () if parts[3] == "scalar" else tuple(int(n) for n in parts[3].split("x"))
            except ValueError:
                raise DatasetError(f"{path}: bad shape on line {lineno}: {parts[3]!r}") from None
            fields.append((parts[1], shape, parts[4] == "complex"))
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DatasetError(f"{path}: malformed manifest line {lineno}: {line!r}")
        meta[key] = value
    for key in ("task", "count", "noise"):
        if key not in meta:
            raise DatasetError(f"{path}: manifest is missing '{key}'")
    if not fields:
        raise DatasetError(f"{path}: manifest declares no fields")
    return meta, fields


def read_dataset(path: str | Path) -> Dataset:
    data = Path(path).read_bytes()
    header = len(MAGIC) + _LENGTH.size
    if len(data) < header or data[:len(MAGIC)] != MAGIC:
        raise DatasetError(f"{path}: bad header")
    (length,) = _LENGTH.unpack_from(data, len(MAGIC))
    if len(data) < header + length:
        raise DatasetError(f"{path}: truncated manifest ({len(data) - header} of {length} bytes)")
    try:
        text = data[header:header + length].decode("utf-8")
    except UnicodeDecodeError:
        raise DatasetError(f"{path}: manifest is not UTF-8") from None
    meta, fields = _parse_manifest(text, path)
    try:
        count, noise = int(meta.pop("count")), float.fromhex(meta.pop("noise"))
    except ValueError as exc:
        raise DatasetError(f"{path}: bad count or noise in manifest: {exc}") from None
    task = meta.pop("task")

    per_sample = sum(int(np.prod(shape)) * (2 if is_complex else 1) for _, shape, is_complex in fields)
    payload = len(data) - header - length
    expected = 8 * per_sample * count
    if payload != expected:
        if payload % (8 * per_sample) == 0:
            raise DatasetError(f"{path}: count mismatch: header says {count} samples, "
                               f"payload holds {payload // (8 * per_sample)}")
        raise DatasetError(f"{path}: truncated payload ({payload} of {expected} bytes)")

    if count:
        flat = np.frombuffer(data, dtype="<f8", count=per_sample * count, offset=header + length)
        flat = flat.astype(np.float64).reshape(count, per_sample)
    else:
        flat = np.zeros((0, per_sample))
    arrays: dict[str, np.ndarray] = {}
    offset = 0
    for name, shape, is_complex in fields:
        size = int(np.prod(shape))
        if is_complex:
            values = np.empty((count, size), dtype=np.complex128)
            values.real = flat[:, offset:offset + size]
            values.imag = flat[:, offset + size:offset + 2 * size]
            arrays[name] = values.reshape(count, *shape)
            offset += 2 * size
        else:
            arrays[name] = flat[:, offset:offset + size].reshape(count, *shape).copy()
            offset += size
    dataset = Dataset(task=task, fields=arrays, meta=meta, noise=noise)
    if task == SCATTER_TASK:
        try:
            dataset.geometry
        except (KeyError, ValueError) as exc:
            raise DatasetError(f"{path}: bad scattering geometry: {exc}") from None
    logger.info(f"Read {count} '{task}' samples from {path}")
    return dataset


# ── Generation ──────────────────────────────────────────────────


def generate_scatter_samples(n: int, geometry: ScatterGeometry, seed: int, noise: float = 0.0,
                             ranges: MediaRanges | None = None,
                             max_workers: int | None = None) -> list[ScatterSample]:
    op = BornOperator(geometry)

    def one(index: int) -> ScatterSample:
        rng = np.random.default_rng([seed, index])
        eta = gen_point_media(rng, geometry, ranges)
        return ScatterSample(eta, add_noise(op.forward(eta), noise, rng), geometry, noise)

    samples = run_parallel(one, range(n), max_workers)
    logger.info(f"Generated {n} scattering samples (n_y={geometry.n_y}, n_dir={geometry.n_dir}, noise {noise}%)")
    return samples


def generate_symbol_dataset(kind: SymbolKind | str, n: int, s: int, m_gen: int, seed: int,
                            noise: float = 0.0, k0: float = 4.0,
                            max_workers: int | None = None) -> Dataset:
    """Noise, when asked for, goes on the inputs (the measured side)."""
    kind = symbol_kind(kind)

    def one(index: int) -> tuple[np.ndarray, np.ndarray]:
        rng = np.random.default_rng([seed, index])
        task = gen_symbol_task_1d(kind, m_gen, rng, n=1, k0=k0)
        return add_noise(task.inputs(s)[0], noise, rng), task.targets(s)[0]

    pairs = run_parallel(one, range(n), max_workers)
    logger.info(f"Generated {n} '{kind.value}' pairs on s={s} (m_gen={m_gen}, noise {noise}%)")
    return Dataset(
        task=kind.value,
        fields={"input": np.stack([p[0] for p in pairs]), "target": np.stack([p[1] for p in pairs])},
        meta={"s": str(s), "m_gen": str(m_gen), "k0": float(k0).hex()},
        noise=noise,
    )
