"""Static SVG rendering of point sets, optimal lines and hull outlines.

Rendering is read-only: it consumes reports and never recomputes or mutates
them.  Continuous optimal families are drawn as translucent fans of five
representative lines.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .geometry import LineHesse, LineSI, PointSet
from .hull import HullPolytope
from .report import FitReport, UniqueLine, representatives

__all__ = ["render_svg"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _line_segment(line, cx: float, cy: float, reach: float):
    """A segment of the infinite line long enough to cross the viewport."""
    if isinstance(line, LineSI):
        h = math.hypot(1.0, line.a)
        ux, uy = 1.0 / h, line.a / h
        px, py = cx, line.a * cx + line.b
    else:
        ux, uy = -line.ny, line.nx
        t = line.c - (line.nx * cx + line.ny * cy)
        px, py = cx + t * line.nx, cy + t * line.ny
    return (px - reach * ux, py - reach * uy, px + reach * ux, py + reach * uy)


def render_svg(
    ps: PointSet,
    reports: Sequence[FitReport] = (),
    hull: Optional[HullPolytope] = None,
    width: int = 640,
    height: int = 480,
) -> str:
    xs, ys = ps.xs, ps.ys
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    span = max(x_hi - x_lo, y_hi - y_lo, 1.0)
    pad = 0.2 * span
    x_lo, x_hi = x_lo - pad, x_hi + pad
    y_lo, y_hi = y_lo - pad, y_hi + pad
    sx = width / (x_hi - x_lo)
    sy = height / (y_hi - y_lo)
    cx, cy = 0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)
    reach = 2.0 * math.hypot(x_hi - x_lo, y_hi - y_lo)

    def to_px(x: float, y: float) -> tuple[float, float]:
        return ((x - x_lo) * sx, (y_hi - y) * sy)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]

    if hull is not None and hull.vertex_count >= 2:
        coords = [to_px(ps.points[v].x, ps.points[v].y) for v in hull.vertices]
        pts_attr = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
        tag = "polygon" if hull.degenerate == "full" else "polyline"
        parts.append(
            f'<{tag} points="{pts_attr}" fill="none" stroke="#bbbbbb" '
            f'stroke-width="1" stroke-dasharray="4 3"/>'
        )

    for ri, rep in enumerate(reports):
        color = _COLORS[ri % len(_COLORS)]
        lines = representatives(rep.optimal_set, n=5, span=1.0)
        fan = len(lines) > 1 and not isinstance(rep.optimal_set, UniqueLine)
        opacity = 0.35 if fan else 1.0
        for line in lines:
            x1, y1, x2, y2 = _line_segment(line, cx, cy, reach)
            (px1, py1), (px2, py2) = to_px(x1, y1), to_px(x2, y2)
            parts.append(
                f'<line x1="{px1:.2f}" y1="{py1:.2f}" x2="{px2:.2f}" y2="{py2:.2f}" '
                f'stroke="{color}" stroke-width="1.5" stroke-opacity="{opacity}"/>'
            )
        norm = "inf" if rep.norm == math.inf else f"{rep.norm:g}"
        label = f"{rep.solver} p={norm} {rep.distance} f={rep.objective:.6g}"
        parts.append(
            f'<text x="8" y="{16 + 16 * ri}" font-size="12" fill="{color}">{label}</text>'
        )

    for p in ps.points:
        px, py = to_px(p.x, p.y)
        r = 3.0 * math.sqrt(min(p.mult, 9))
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{r:.1f}" fill="#222222"/>')

    parts.append("</svg>")
    return "\n".join(parts)
