"""Tiny deterministic SVG line-plot writer (no plotting dependency)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

_WIDTH, _HEIGHT = 640, 400
_MARGIN = 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def write_line_plot(path, x, curves, title="", x_label="", y_label="") -> None:
    """Write labelled polylines sharing one x axis to an SVG file.

    ``curves`` is a sequence of ``(label, y_values)`` pairs.  Output is
    byte-identical for identical inputs.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("plot needs at least two samples")
    y_all = np.concatenate([np.asarray(y, dtype=float) for _, y in curves])
    x_min, x_max = float(x.min()), float(x.max())
    y_min, y_max = float(y_all.min()), float(y_all.max())
    if y_max == y_min:
        y_max = y_min + 1.0

    def sx(v):
        return _MARGIN + (v - x_min) / (x_max - x_min) * (_WIDTH - 2 * _MARGIN)

    def sy(v):
        return _HEIGHT - _MARGIN - (v - y_min) / (y_max - y_min) * (
            _HEIGHT - 2 * _MARGIN
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" '
            f'font-size="15">{title}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 12}" text-anchor="middle" '
            f'font-size="12">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="14" y="{_HEIGHT // 2}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 14 {_HEIGHT // 2})">{y_label}</text>'
        )
    for tick in np.linspace(x_min, x_max, 5):
        parts.append(
            f'<text x="{_fmt(sx(tick))}" y="{_HEIGHT - _MARGIN + 16}" '
            f'text-anchor="middle" font-size="10">{tick:g}</text>'
        )
    for tick in np.linspace(y_min, y_max, 5):
        parts.append(
            f'<text x="{_MARGIN - 6}" y="{_fmt(sy(tick) + 3)}" text-anchor="end" '
            f'font-size="10">{tick:.3g}</text>'
        )
    for index, (label, y) in enumerate(curves):
        y = np.asarray(y, dtype=float)
        color = _COLORS[index % len(_COLORS)]
        points = " ".join(f"{_fmt(sx(xi))},{_fmt(sy(yi))}" for xi, yi in zip(x, y))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
        parts.append(
            f'<text x="{_WIDTH - _MARGIN + 4}" y="{_MARGIN + 14 * index + 10}" '
            f'font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
