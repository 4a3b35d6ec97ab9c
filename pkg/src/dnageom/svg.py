"""Deterministic SVG rendering of improvement traces.

One frame per trace state: the hull in gray, the polyline in black, vertices
that changed since the previous frame highlighted in red. Byte output is a
pure function of the trace.
"""

from __future__ import annotations

import os
from typing import Sequence

from .improve import ImprovementTrace
from .planar import ClosedPolyline2, convex_hull

_W = 640.0
_PAD = 0.06


def _bounds(polylines: Sequence[ClosedPolyline2]) -> tuple[float, float, float, float]:
    xs = [p.x for poly in polylines for p in poly.vertices]
    ys = [p.y for poly in polylines for p in poly.vertices]
    return min(xs), min(ys), max(xs), max(ys)


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def render_frame(
    polyline: ClosedPolyline2,
    bounds: tuple[float, float, float, float],
    highlights: Sequence[int] = (),
) -> str:
    """Single SVG document for one polyline state."""
    x0, y0, x1, y1 = bounds
    span = max(x1 - x0, y1 - y0, 1e-12)
    pad = span * _PAD
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    scale = _W / (x1 - x0)
    height = (y1 - y0) * scale

    def sx(x: float) -> str:
        return _fmt((x - x0) * scale)

    def sy(y: float) -> str:
        return _fmt((y1 - y) * scale)  # flip so +y points up

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(_W)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(_W)} {_fmt(height)}">',
    ]
    hull = convex_hull(polyline)
    hull_pts = " ".join(f"{sx(p.x)},{sy(p.y)}" for p in hull.vertices)
    lines.append(
        f'<polygon points="{hull_pts}" fill="none" stroke="#999999" stroke-width="1"/>'
    )
    poly_pts = " ".join(f"{sx(p.x)},{sy(p.y)}" for p in polyline.vertices)
    lines.append(
        f'<polygon points="{poly_pts}" fill="none" stroke="#000000" stroke-width="2"/>'
    )
    for i in highlights:
        p = polyline.vertices[i % len(polyline.vertices)]
        lines.append(
            f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="4" fill="#cc0000"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(trace: ImprovementTrace, out_dir: str) -> list[str]:
    """Write step_000.svg .. step_NNN.svg; frame count is len(trace) + 1."""
    os.makedirs(out_dir, exist_ok=True)
    states = trace.polylines()
    bounds = _bounds(states)
    paths = []
    prev_vertices = None
    for idx, poly in enumerate(states):
        if prev_vertices is None:
            highlights: list[int] = []
        else:
            highlights = [
                i for i, v in enumerate(poly.vertices) if v not in prev_vertices
            ]
        prev_vertices = set(poly.vertices)
        doc = render_frame(poly, bounds, highlights)
        path = os.path.join(out_dir, f"step_{idx:03d}.svg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(doc)
        paths.append(path)
    return paths
