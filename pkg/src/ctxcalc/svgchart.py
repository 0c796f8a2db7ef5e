"""Minimal deterministic SVG line charts.

Charts are assembled as plain SVG strings with fixed geometry, a fixed
palette and explicit coordinate formatting, so the same table always
renders to the same bytes.  No external plotting dependency is involved.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

__all__ = ["render_line_chart"]

_PALETTE = ("#1f6fb2", "#d1652e", "#3a8f5d", "#8450a8", "#b03a48", "#68707a")

_WIDTH = 720
_HEIGHT = 480
_MARGIN_LEFT = 72
_MARGIN_RIGHT = 168
_MARGIN_TOP = 48
_MARGIN_BOTTOM = 56


def _nice_step(span: float, target_ticks: int) -> float:
    raw = span / max(target_ticks, 1)
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0):
        if raw <= mult * power:
            return mult * power
    return 10.0 * power


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step(hi - lo, target)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-9:
        ticks.append(0.0 if abs(value) < step * 1e-9 else value)
        value += step
    return ticks


def _expand(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        pad = (hi - lo) * 0.05
        return lo - pad, hi + pad
    pad = abs(lo) * 0.5 if lo != 0.0 else 1.0
    return lo - pad, hi + pad


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _label(value: float) -> str:
    return f"{value:g}"


def render_line_chart(
    title: str,
    x_label: str,
    y_label: str,
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
) -> str:
    """Render one or more series over a common x axis to an SVG string."""
    if not x or not series:
        raise ValueError("chart needs at least one x value and one series")
    x_lo, x_hi = _expand(min(x), max(x))
    all_y = [v for _, values in series for v in values]
    y_lo, y_hi = _expand(min(all_y), max(all_y))

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(value: float) -> float:
        return _MARGIN_LEFT + (value - x_lo) / (x_hi - x_lo) * plot_w

    def py(value: float) -> float:
        return _MARGIN_TOP + plot_h - (value - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
    ]

    for tick in _ticks(y_lo, y_hi):
        ty = py(tick)
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{_fmt(ty)}" '
            f'x2="{_MARGIN_LEFT + plot_w}" y2="{_fmt(ty)}" '
            f'stroke="#d8dde2" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{_fmt(ty + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{escape(_label(tick))}</text>'
        )
    for tick in _ticks(x_lo, x_hi):
        tx = px(tick)
        parts.append(
            f'<line x1="{_fmt(tx)}" y1="{_MARGIN_TOP + plot_h}" '
            f'x2="{_fmt(tx)}" y2="{_MARGIN_TOP + plot_h + 5}" '
            f'stroke="#444a50" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(tx)}" y="{_MARGIN_TOP + plot_h + 20}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{escape(_label(tick))}</text>"
        )

    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{_MARGIN_TOP + plot_h}" stroke="#444a50" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP + plot_h}" '
        f'x2="{_MARGIN_LEFT + plot_w}" y2="{_MARGIN_TOP + plot_h}" '
        f'stroke="#444a50" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.0f}" y="{_HEIGHT - 12}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">'
        f"{escape(x_label)}</text>"
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.0f})">'
        f"{escape(y_label)}</text>"
    )

    for k, (name, values) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        points = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, values))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'points="{points}"/>'
        )
        ly = _MARGIN_TOP + 16 + 18 * k
        lx = _MARGIN_LEFT + plot_w + 16
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{escape(name)}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
