"""Minimal SVG line charts with zero external dependencies.

CSV stays the canonical output; the chart is a convenience overlay of the
pressure curves with the transition parameters marked as vertical lines.
"""

from __future__ import annotations

import math
from typing import Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

WIDTH, HEIGHT = 880, 560
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 50, 60


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 2.5 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


def write_line_chart(
    path: str,
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    vlines: Sequence[tuple[float, str]] = (),
) -> None:
    """Write a polyline chart; series entries are (name, xs, ys)."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if math.isfinite(y)]
    if not xs_all or not ys_all:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    pad = 0.05 * (y_hi - y_lo) or 1.0
    y_lo, y_hi = y_lo - pad, y_hi + pad
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH/2:.0f}" y="28" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_escape(title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(t):.1f}" y1="{py(y_lo):.1f}" x2="{px(t):.1f}" '
                   f'y2="{py(y_lo)+5:.1f}" stroke="#333"/>')
        out.append(f'<text x="{px(t):.1f}" y="{py(y_lo)+20:.1f}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{MARGIN_L-5}" y1="{py(t):.1f}" x2="{MARGIN_L}" '
                   f'y2="{py(t):.1f}" stroke="#333"/>')
        out.append(f'<text x="{MARGIN_L-9}" y="{py(t)+4:.1f}" text-anchor="end" '
                   f'font-size="11" font-family="sans-serif">{t:g}</text>')
    out.append(f'<text x="{MARGIN_L + plot_w/2:.0f}" y="{HEIGHT-14}" text-anchor="middle" '
               f'font-size="13" font-family="sans-serif">{_escape(x_label)}</text>')
    out.append(f'<text x="18" y="{MARGIN_T + plot_h/2:.0f}" text-anchor="middle" '
               f'font-size="13" font-family="sans-serif" '
               f'transform="rotate(-90 18 {MARGIN_T + plot_h/2:.0f})">{_escape(y_label)}</text>')
    for i, (name, xs, ys) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys)
                       if math.isfinite(y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.6"/>')
        ly = MARGIN_T + 18 + 18 * i
        lx = WIDTH - MARGIN_R + 12
        out.append(f'<line x1="{lx}" y1="{ly-4}" x2="{lx+22}" y2="{ly-4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx+28}" y="{ly}" font-size="12" '
                   f'font-family="sans-serif">{_escape(name)}</text>')
    for j, (x, label) in enumerate(vlines):
        if not x_lo <= x <= x_hi:
            continue
        out.append(f'<line x1="{px(x):.1f}" y1="{MARGIN_T}" x2="{px(x):.1f}" '
                   f'y2="{MARGIN_T+plot_h}" stroke="#777" stroke-dasharray="5,4"/>')
        out.append(f'<text x="{px(x)+4:.1f}" y="{MARGIN_T+16+14*j}" font-size="11" '
                   f'font-family="sans-serif" fill="#444">{_escape(label)}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
