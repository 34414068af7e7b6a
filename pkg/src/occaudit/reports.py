"""Minimal deterministic SVG emission for audit reports.

Hand-rolled rather than using a plotting library so that identical inputs
produce byte-identical files.
"""
from __future__ import annotations

from typing import Sequence


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class _Canvas:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]

    def text(self, x, y, s, size=12, anchor="start"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}">{_escape(s)}</text>'
        )

    def line(self, x1, y1, x2, y2, color="black", width=1.0):
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def circle(self, x, y, r=3.0, color="steelblue"):
        self.parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"/>'
        )

    def polyline(self, pts, color="steelblue", width=1.5):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def polygon(self, pts, color="lightsteelblue", opacity=0.6):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{color}" fill-opacity="{opacity}" stroke="none"/>'
        )

    def rect(self, x, y, w, h, color="steelblue"):
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="{color}"/>'
        )

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.parts) + "\n</svg>\n")


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class _Axes:
    """Maps data coordinates into a pixel box and draws simple axes."""

    def __init__(self, canvas, box, xlim, ylim):
        self.c = canvas
        self.x0, self.y0, self.w, self.h = box
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + (x - lo) / (hi - lo or 1.0) * self.w

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 + self.h - (y - lo) / (hi - lo or 1.0) * self.h

    def frame(self, xlabel="", ylabel="", title=""):
        self.c.line(self.x0, self.y0 + self.h, self.x0 + self.w, self.y0 + self.h)
        self.c.line(self.x0, self.y0, self.x0, self.y0 + self.h)
        for frac in (0.0, 0.5, 1.0):
            xv = self.xlim[0] + frac * (self.xlim[1] - self.xlim[0])
            yv = self.ylim[0] + frac * (self.ylim[1] - self.ylim[0])
            self.c.text(self.px(xv), self.y0 + self.h + 14, f"{xv:.2f}", size=9, anchor="middle")
            self.c.text(self.x0 - 4, self.py(yv) + 3, f"{yv:.2f}", size=9, anchor="end")
        if xlabel:
            self.c.text(self.x0 + self.w / 2, self.y0 + self.h + 30, xlabel, anchor="middle")
        if ylabel:
            self.c.text(self.x0 + 4, self.y0 - 6, ylabel, size=10)
        if title:
            self.c.text(self.x0 + self.w / 2, self.y0 - 8, title, anchor="middle")


def _span(values, pad=0.05):
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    margin = (hi - lo) * pad
    return lo - margin, hi + margin


def svg_scatter(
    points: Sequence[tuple[float, float, str]],
    path,
    xlabel: str,
    ylabel: str,
    title: str = "",
) -> None:
    """Labeled scatter plot; each point is (x, y, label)."""
    c = _Canvas(560, 420)
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    ax = _Axes(c, (70, 40, 450, 320), _span(xs), _span(ys))
    ax.frame(xlabel=xlabel, ylabel=ylabel, title=title)
    if ax.ylim[0] < 0.0 < ax.ylim[1]:
        c.line(ax.px(ax.xlim[0]), ax.py(0.0), ax.px(ax.xlim[1]), ax.py(0.0),
               color="gray", width=0.5)
    for x, y, label in points:
        c.circle(ax.px(x), ax.py(y))
        if label:
            c.text(ax.px(x) + 5, ax.py(y) - 4, label, size=8)
    c.save(path)


def svg_trace_panel(
    traces: Sequence[tuple[float, Sequence[tuple[int, float, float, float]]]],
    path,
    title: str = "",
) -> None:
    """One subplot per trace: (pi0, rows of (t, central, lo, hi))."""
    n = max(len(traces), 1)
    cols = min(n, 3)
    rows = (n + cols - 1) // cols
    cell_w, cell_h = 240, 200
    c = _Canvas(40 + cols * cell_w, 50 + rows * cell_h)
    if title:
        c.text(20, 24, title, size=14)
    for i, (pi0, data) in enumerate(traces):
        col, row = i % cols, i // cols
        box = (60 + col * cell_w, 60 + row * cell_h, cell_w - 80, cell_h - 80)
        ts = [d[0] for d in data]
        ax = _Axes(c, box, (min(ts), max(ts) or 1), (0.0, 1.0))
        ax.frame(xlabel="t", title=f"initial share {pi0:.2f}")
        band = [(ax.px(t), ax.py(hi)) for t, _, _, hi in data]
        band += [(ax.px(t), ax.py(lo)) for t, _, lo, _ in reversed(data)]
        c.polygon(band)
        c.polyline([(ax.px(t), ax.py(v)) for t, v, _, _ in data])
    c.save(path)


def svg_histogram_pair(
    word: str,
    cells: Sequence[tuple[str, Sequence[float], Sequence[int], Sequence[int]]],
    path,
) -> None:
    """Per-occupation with/without histogram pairs for one word.

    Each cell is (occupation, bin_edges, counts_with, counts_without).
    """
    rows = max(len(cells), 1)
    cell_w, cell_h = 260, 150
    c = _Canvas(60 + 2 * cell_w, 70 + rows * cell_h)
    c.text(20, 24, f"attention to '{word}' (left: with indicators, right: without)", size=13)
    for r, (occ, edges, counts_w, counts_wo) in enumerate(cells):
        peak = max(list(counts_w) + list(counts_wo) + [1])
        for side, counts in enumerate((counts_w, counts_wo)):
            box = (50 + side * cell_w, 70 + r * cell_h, cell_w - 60, cell_h - 60)
            ax = _Axes(c, box, (edges[0], edges[-1]), (0, peak))
            ax.frame(title=occ if side == 0 else "")
            for i, count in enumerate(counts):
                if count <= 0:
                    continue
                x0 = ax.px(edges[i])
                x1 = ax.px(edges[i + 1])
                y = ax.py(count)
                c.rect(x0, y, max(x1 - x0 - 0.5, 0.5), ax.py(0) - y)
    c.save(path)
