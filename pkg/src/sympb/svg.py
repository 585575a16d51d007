"""Minimal deterministic SVG output for orbits and phase portraits."""
from __future__ import annotations

import math

import numpy as np

SIZE = 600
MARGIN = 20
COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]


def _fmt(v):
    return f"{v:.3f}"


def _frame(xs, ys):
    if len(xs) == 0:
        return 0.0, 1.0, 0.0, 1.0
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    return x0, x0 + span, y0, y0 + span


def _mapper(box):
    x0, x1, y0, y1 = box
    s = (SIZE - 2 * MARGIN) / (x1 - x0)

    def f(x, y):
        return MARGIN + (x - x0) * s, SIZE - MARGIN - (y - y0) * s

    return f


def _document(body):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">\n<rect width="100%" height="100%" fill="white"/>\n'
    )
    return head + "".join(body) + "</svg>\n"


def orbit_svg(table_points=None, orbits=(), closed=True) -> str:
    """Table outline (grey) and orbit polylines.

    ``table_points`` is an ``(m, 2)`` array tracing the boundary; each orbit
    is an ``(k, 2)`` array of vertices.
    """
    all_pts = []
    if table_points is not None and len(table_points):
        all_pts.append(np.asarray(table_points, dtype=float))
    for o in orbits:
        if len(o):
            all_pts.append(np.asarray(o, dtype=float))
    if not all_pts:
        return _document([])
    stacked = np.vstack(all_pts)
    f = _mapper(_frame(stacked[:, 0], stacked[:, 1]))
    body = []
    if table_points is not None and len(table_points):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (f(*p) for p in table_points))
        body.append(f'<polygon points="{pts}" fill="none" stroke="#888" stroke-width="1.5"/>\n')
    for k, o in enumerate(orbits):
        if not len(o):
            continue
        tag = "polygon" if closed else "polyline"
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (f(*p) for p in o))
        body.append(f'<{tag} points="{pts}" fill="none" stroke="{COLOURS[k % len(COLOURS)]}" stroke-width="0.8"/>\n')
    return _document(body)


def portrait_svg(records) -> str:
    """Scatter plot of ``(t1 mod 2 pi, t2 - t1)`` for each orbit record."""
    body = []
    f = _mapper((0.0, 2 * math.pi, 0.0, 2 * math.pi))
    for k, rec in enumerate(records):
        col = COLOURS[k % len(COLOURS)]
        for a, b in zip(rec.params[:-1], rec.params[1:]):
            x, y = f(a % (2 * math.pi), (b - a) * 2.0)
            body.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="0.8" fill="{col}"/>\n')
    return _document(body)


def write(path, text):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)
