"""Minimal standalone SVG line plots (axes, polylines, shaded bands)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str = ""
    color: Optional[str] = None
    width: float = 1.5
    opacity: float = 1.0
    markers: bool = False
    band: Optional[tuple] = None  # (lower, upper) arrays


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logx: bool = False
    logy: bool = False
    series: list = field(default_factory=list)
    highlight: list = field(default_factory=list)  # (x, y) points drawn fat in red

    def add(self, *args, **kwargs) -> Series:
        s = Series(*args, **kwargs)
        self.series.append(s)
        return s


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        step = max(1, (b - a) // 6)
        return [float(e) for e in range(a, b + 1, step)]
    span = hi - lo or 1.0
    raw = span / 5
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step) + 1)]


def _fmt(v: float, log: bool) -> str:
    return f"1e{int(v)}" if log else f"{v:g}"


def render(fig: Figure, width: int = 640, height: int = 420) -> str:
    left, right, top, bottom = 70, 20, 36, 50
    pw, ph = width - left - right, height - top - bottom

    def tr(vals, log):
        v = np.asarray(vals, dtype=float)
        if log:
            with np.errstate(divide="ignore", invalid="ignore"):
                v = np.where(v > 0, np.log10(np.where(v > 0, v, 1.0)), np.nan)
        return v

    xs = [tr(s.x, fig.logx) for s in fig.series]
    ys = [tr(s.y, fig.logy) for s in fig.series]
    for s in fig.series:
        if s.band is not None:
            ys.append(tr(s.band[0], fig.logy))
            ys.append(tr(s.band[1], fig.logy))
    allx = np.concatenate([x[np.isfinite(x)] for x in xs] or [np.zeros(1)])
    ally = np.concatenate([y[np.isfinite(y)] for y in ys] or [np.zeros(1)])
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="13">{fig.title}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1, fig.logx):
        if x0 <= t <= x1:
            out.append(f'<line x1="{px(t):.1f}" y1="{top + ph}" x2="{px(t):.1f}" y2="{top + ph + 4}" stroke="black"/>')
            out.append(f'<text x="{px(t):.1f}" y="{top + ph + 16}" text-anchor="middle">{_fmt(t, fig.logx)}</text>')
    for t in _ticks(y0, y1, fig.logy):
        if y0 <= t <= y1:
            out.append(f'<line x1="{left - 4}" y1="{py(t):.1f}" x2="{left}" y2="{py(t):.1f}" stroke="black"/>')
            out.append(f'<text x="{left - 6}" y="{py(t) + 4:.1f}" text-anchor="end">{_fmt(t, fig.logy)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{fig.xlabel}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">{fig.ylabel}</text>')

    for i, s in enumerate(fig.series):
        color = s.color or PALETTE[i % len(PALETTE)]
        x = xs[i]
        if s.band is not None:
            lo, hi = tr(s.band[0], fig.logy), tr(s.band[1], fig.logy)
            ok = np.isfinite(x) & np.isfinite(lo) & np.isfinite(hi)
            pts = [f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x[ok], hi[ok])]
            pts += [f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x[ok][::-1], lo[ok][::-1])]
            out.append(f'<polygon points="{" ".join(pts)}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        y = ys[i]
        ok = np.isfinite(x) & np.isfinite(y)
        pts = " ".join(f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x[ok], y[ok]))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="{s.width}" stroke-opacity="{s.opacity}"/>')
        if s.markers:
            out.extend(f'<circle cx="{px(a):.1f}" cy="{py(b):.1f}" r="2.5" fill="{color}"/>' for a, b in zip(x[ok], y[ok]))
    for hx, hy in fig.highlight:
        a, b = tr([hx], fig.logx)[0], tr([hy], fig.logy)[0]
        out.append(f'<circle cx="{px(a):.1f}" cy="{py(b):.1f}" r="5" fill="red"/>')

    labelled = [(i, s) for i, s in enumerate(fig.series) if s.label]
    for k, (i, s) in enumerate(labelled):
        color = s.color or PALETTE[i % len(PALETTE)]
        yy = top + 14 + 14 * k
        out.append(f'<line x1="{left + pw - 150}" y1="{yy - 4}" x2="{left + pw - 130}" y2="{yy - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 125}" y="{yy}">{s.label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save(fig: Figure, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render(fig))
