"""Dependency-free SVG line charts for check-report series."""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / max(1, n - 1)
    return [lo + i * step for i in range(n)]


def line_chart(
    series: dict[str, list[tuple[float, float]]],
    title: str,
    xlabel: str = "s",
    ylabel: str = "log10(value)",
    width: int = 640,
    height: int = 420,
) -> str:
    """SVG document for log-scale decay series keyed by label."""
    pts_all = [
        (x, math.log10(y)) for pts in series.values() for x, y in pts if y > 0
    ]
    if not pts_all:
        pts_all = [(0.0, 0.0)]
    xs = [p[0] for p in pts_all]
    ys = [p[1] for p in pts_all]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    m_left, m_right, m_top, m_bot = 70, 20, 40, 50
    pw, ph = width - m_left - m_right, height - m_top - m_bot

    def px(x):
        return m_left + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return m_top + (y_hi - y) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{px(tx):.1f}" y1="{m_top}" x2="{px(tx):.1f}" '
            f'y2="{m_top + ph}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{px(tx):.1f}" y="{height - 28}" text-anchor="middle" '
            f'font-size="11">{tx:.3g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{m_left}" y1="{py(ty):.1f}" x2="{m_left + pw}" '
            f'y2="{py(ty):.1f}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{m_left - 6}" y="{py(ty) + 4:.1f}" text-anchor="end" '
            f'font-size="11">{ty:.3g}</text>'
        )
    parts.append(
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {height / 2})">{ylabel}</text>'
    )
    for idx, (label, pts) in enumerate(sorted(series.items())):
        good = [(x, math.log10(y)) for x, y in pts if y > 0]
        if not good:
            continue
        color = _PALETTE[idx % len(_PALETTE)]
        path = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in good)
        parts.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{m_left + 8}" y="{m_top + 16 + 14 * idx}" font-size="11" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
