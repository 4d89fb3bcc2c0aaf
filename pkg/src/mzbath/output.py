"""Deterministic CSV and SVG emission.

CSV files are RFC-4180 (CRLF row endings, quoted only when needed) with
a block of '#'-prefixed comment lines in front of the header row that
records the fully resolved configuration and the artifact version.
Floats are written with 17 significant digits so every 64-bit value
round-trips exactly; given a fixed configuration the bytes are
bit-identical across runs (no timestamps, no environment state).

SVG plots are self-contained (no external references).  Data polylines
are placed in a group carrying the affine data-to-viewport transform, so
the coordinates inside each ``points`` attribute are exactly the numbers
written to the CSV.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FLOAT_FORMAT = ".17g"

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), FLOAT_FORMAT)


def write_csv(
    path: Path,
    comments: Sequence[str],
    header: Sequence[str],
    rows: Iterable[Sequence],
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\r\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def config_comments(version: str, command: str, resolved: dict) -> list[str]:
    """Comment block recording the artifact version and every resolved
    config key, sorted for stable output."""
    lines = [f"mzbath {version}", f"command: {command}"]
    for key in sorted(resolved):
        lines.append(f"{key} = {format_value(resolved[key])}")
    return lines


def write_svg(
    path: Path,
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, np.ndarray, np.ndarray]],
    width: int = 860,
    height: int = 520,
) -> Path:
    """Write a self-contained line plot.

    Each series is (label, x, y).  The data polylines live inside a
    single <g> whose transform maps data space to the viewport, so the
    polyline points are the raw data values.
    """
    margin_l, margin_r, margin_t, margin_b = 72, 24, 40, 52
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    sx = plot_w / (x_hi - x_lo)
    sy = plot_h / (y_hi - y_lo)
    tx = margin_l - x_lo * sx
    ty = margin_t + y_hi * sy  # y axis points up in data space

    def fmt(v: float) -> str:
        return format(v, FLOAT_FORMAT)

    def tick_label(v: float) -> str:
        return format(v, ".4g")

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}">'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    out.append(
        f'<text x="{width / 2:g}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>'
    )
    # axes box
    out.append(
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    # ticks
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        px = margin_l + plot_w * i / 4
        out.append(
            f'<line x1="{px:g}" y1="{margin_t + plot_h}" x2="{px:g}" '
            f'y2="{margin_t + plot_h + 5}" stroke="#444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:g}" y="{margin_t + plot_h + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tick_label(fx)}</text>'
        )
        fy = y_lo + (y_hi - y_lo) * i / 4
        py = margin_t + plot_h - plot_h * i / 4
        out.append(
            f'<line x1="{margin_l - 5}" y1="{py:g}" x2="{margin_l}" y2="{py:g}" '
            'stroke="#444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{margin_l - 8}" y="{py + 4:g}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tick_label(fy)}</text>'
        )
    out.append(
        f'<text x="{margin_l + plot_w / 2:g}" y="{height - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{margin_t + plot_h / 2:g}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {margin_t + plot_h / 2:g})">{y_label}</text>'
    )
    # data polylines in data coordinates
    out.append(f'<g transform="translate({fmt(tx)} {fmt(ty)}) scale({fmt(sx)} {fmt(-sy)})">')
    for k, (label, x, y) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(
            f"{fmt(float(a))},{fmt(float(b))}" for a, b in zip(x, y)
        )
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'vector-effect="non-scaling-stroke" points="{pts}"/>'
        )
    out.append("</g>")
    # legend
    for k, (label, _, _) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        ly = margin_t + 16 + 18 * k
        out.append(
            f'<line x1="{margin_l + 10}" y1="{ly - 4}" x2="{margin_l + 34}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{margin_l + 40}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    out.append("</svg>")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
