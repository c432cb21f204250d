"""
Plot artifacts: grid CSV, SVG line plots and heatmaps, Pillow PNG heatmaps.

CSV is the canonical output; the SVG and PNG files are for looking at.
Heatmaps map the value range linearly onto a dark-blue → white → dark-red
ramp, so signed fields read naturally.
"""

import csv
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np
from PIL import Image

logger = logging.getLogger(__name__)

_RAMP = np.array([[33, 64, 154], [247, 247, 247], [178, 24, 43]], dtype=np.float64)
_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def colorize(values: np.ndarray) -> np.ndarray:
    """(h, w) real → (h, w, 3) uint8 on the diverging ramp."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError(f"Heatmaps need a 2-D array, got shape {values.shape}")
    lo, hi = float(values.min()), float(values.max())
    t = np.zeros_like(values) if hi == lo else (values - lo) / (hi - lo)
    rgb = np.stack([np.interp(t, [0.0, 0.5, 1.0], _RAMP[:, ch]) for ch in range(3)], axis=-1)
    return np.round(rgb).astype(np.uint8)


def write_grid_csv(values: np.ndarray, path: str | Path) -> Path:
    """1-D grids as (i, value) rows, 2-D as (i, j, value) rows."""
    values = np.asarray(values)
    if values.ndim not in (1, 2):
        raise ValueError(f"Grid CSV supports 1-D and 2-D grids, got shape {values.shape}")
    path = _prepare(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        cplx = np.iscomplexobj(values)
        tail = ["re", "im"] if cplx else ["value"]
        index = ["i"] if values.ndim == 1 else ["i", "j"]
        writer.writerow(index + tail)
        for idx in np.ndindex(values.shape):
            v = values[idx]
            writer.writerow([*idx, *((repr(float(v.real)), repr(float(v.imag))) if cplx else (repr(float(v)),))])
    return path


def write_png_heatmap(values: np.ndarray, path: str | Path, scale: int = 8) -> Path:
    path = _prepare(path)
    image = Image.fromarray(colorize(values))
    if scale > 1:
        image = image.resize((image.width * scale, image.height * scale), Image.Resampling.NEAREST)
    image.save(path)
    logger.debug(f"Wrote heatmap {path} ({image.width}×{image.height})")
    return path


def write_svg_heatmap(values: np.ndarray, path: str | Path, title: str = "", cell: int = 10) -> Path:
    rgb = colorize(values)
    h, w = rgb.shape[:2]
    top = 24 if title else 0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cell}" height="{h * cell + top}">']
    if title:
        parts.append(f'<text x="4" y="16" font-family="sans-serif" font-size="13">{escape(title)}</text>')
    for i in range(h):
        for j in range(w):
            r, g, b = rgb[i, j]
            parts.append(f'<rect x="{j * cell}" y="{top + i * cell}" width="{cell}" height="{cell}" '
                         f'fill="#{r:02x}{g:02x}{b:02x}"/>')
    parts.append("</svg>")
    path = _prepare(path)
    path.write_text("\n".join(parts), encoding="utf-8")
    return path


def write_svg_lines(series: Mapping[str, tuple[Sequence[float], Sequence[float]]], path: str | Path,
                    title: str = "", log_y: bool = False, width: int = 640, height: int = 400) -> Path:
    """One polyline per named (x, y) series on shared axes."""
    margin = 48
    xs = np.concatenate([np.asarray(x, dtype=np.float64) for x, _ in series.values()]) if series else np.zeros(1)
    ys = np.concatenate([np.asarray(y, dtype=np.float64) for _, y in series.values()]) if series else np.zeros(1)
    if log_y:
        ys = np.log10(np.clip(ys, 1e-300, None))
    finite = np.isfinite(ys)
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = (float(ys[finite].min()), float(ys[finite].max())) if finite.any() else (0.0, 1.0)
    x_span, y_span = (x_hi - x_lo) or 1.0, (y_hi - y_lo) or 1.0

    def px(x, y):
        return (margin + (x - x_lo) / x_span * (width - 2 * margin),
                height - margin - (y - y_lo) / y_span * (height - 2 * margin))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
             f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>']
    if title:
        parts.append(f'<text x="{margin}" y="24" font-family="sans-serif" font-size="14">{escape(title)}</text>')
    label = "log10 " if log_y else ""
    parts.append(f'<text x="4" y="{margin - 6}" font-family="sans-serif" font-size="11">{label}{y_hi:.3g}</text>')
    parts.append(f'<text x="4" y="{height - margin}" font-family="sans-serif" font-size="11">{label}{y_lo:.3g}</text>')
    for n, (name, (x, y)) in enumerate(series.items()):
        y = np.asarray(y, dtype=np.float64)
        if log_y:
            y = np.log10(np.clip(y, 1e-300, None))
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in (px(xi, yi) for xi, yi in zip(x, y) if np.isfinite(yi)))
        color = _PALETTE[n % len(_PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        parts.append(f'<text x="{width - margin - 120}" y="{margin + 14 * (n + 1)}" font-family="sans-serif" '
                     f'font-size="11" fill="{color}">{escape(name)}</text>')
    parts.append("</svg>")
    path = _prepare(path)
    path.write_text("\n".join(parts), encoding="utf-8")
    return path


def plot_epoch_log(log, path: str | Path) -> Path:
    """Train loss and test relative error per epoch, log scale."""
    epochs = [r.epoch for r in log]
    return write_svg_lines(
        {"train loss": (epochs, [r.train_loss for r in log]),
         "test rel err": (epochs, [r.test_rel_err for r in log])},
        path, title="Training", log_y=True,
    )
