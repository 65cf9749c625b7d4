"""CSV, JSON and SVG writers. Output is byte-stable for identical inputs."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    return repr(float(x))


def write_csv(path: Path, header: list[str], columns) -> None:
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in zip(*cols)]
    Path(path).write_text("\n".join(lines) + "\n")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def write_json(path: Path, data) -> None:
    Path(path).write_text(json.dumps(_clean(data), indent=2, sort_keys=True) + "\n")


def write_svg(path: Path, x, y, xlabel: str, ylabel: str, title: str = "",
              width: int = 640, height: int = 400) -> None:
    """Single-curve line plot with a framed axis box and end-point ticks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ml, mr, mt, mb = 70, 20, 30, 50
    pw, ph = width - ml - mr, height - mt - mb
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(min(y.min(), 0.0)), float(max(y.max(), 1.0))
    if x1 == x0:
        x1 = x0 + 1
    px = ml + (x - x0) / (x1 - x0) * pw
    py = mt + (y1 - y) / (y1 - y0) * ph
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    zero = mt + y1 / (y1 - y0) * ph
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<line x1="{ml}" y1="{zero:.2f}" x2="{ml + pw}" y2="{zero:.2f}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f4e99" stroke-width="1.5"/>',
        f'<text x="{ml}" y="{mt + ph + 18}">{x0:.4g}</text>',
        f'<text x="{ml + pw}" y="{mt + ph + 18}" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{ml - 6}" y="{mt + ph}" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{ml - 6}" y="{mt + 10}" text-anchor="end">{y1:.3g}</text>',
        f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{xlabel}</text>',
        f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" transform="rotate(-90 16 {mt + ph / 2})">{ylabel}</text>',
    ]
    if title:
        parts.append(f'<text x="{ml + pw / 2}" y="20" text-anchor="middle">{title}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
