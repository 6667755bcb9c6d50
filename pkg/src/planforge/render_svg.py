"""Render a floor plan to a standalone SVG drawing.

The drawing uses a fixed scale of 100 px per meter, a light 1 m grid, dashed
outer boundary, filled room polygons with id labels, door swing arcs, and a
scale bar. Plan y points up, SVG y points down, so y is flipped.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .doors import door_span
from .types import FloorPlan

PX_PER_M = 100.0
MARGIN_M = 0.5

_STYLE = (
    ".grid { stroke: #d8d8d8; stroke-width: 1; }"
    " .boundary { fill: none; stroke: #555; stroke-width: 2;"
    " stroke-dasharray: 8 5; }"
    " .room { fill: #cfe3f5; stroke: #1f4e79; stroke-width: 2;"
    " fill-opacity: 0.7; }"
    " .door line { stroke: #b03a2e; stroke-width: 3; }"
    " .door path { fill: none; stroke: #b03a2e; stroke-width: 1;"
    " stroke-dasharray: 3 3; }"
    " .label { font: 16px sans-serif; fill: #1f4e79; text-anchor: middle; }"
    " .scalebar line { stroke: #000; stroke-width: 3; }"
    " .scalebar text { font: 14px sans-serif; fill: #000; }"
)


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(plan: FloorPlan) -> str:
    pts = [plan.boundary.vertices] + [r.vertices for r in plan.rooms]
    allv = np.vstack(pts)
    lo = allv.min(axis=0) - MARGIN_M
    hi = allv.max(axis=0) + MARGIN_M
    width = (hi[0] - lo[0]) * PX_PER_M
    height = (hi[1] - lo[1]) * PX_PER_M

    def to_px(p) -> tuple[float, float]:
        return ((p[0] - lo[0]) * PX_PER_M, (hi[1] - p[1]) * PX_PER_M)

    def ring_attr(vertices) -> str:
        return " ".join(
            f"{_fmt(x)},{_fmt(y)}" for x, y in (to_px(v) for v in vertices)
        )

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}"'
        f' height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f"<style>{_STYLE}</style>",
    ]

    out.append('<g class="gridlines">')
    for gx in range(math.ceil(lo[0]), math.floor(hi[0]) + 1):
        x, _ = to_px((gx, 0.0))
        out.append(
            f'<line class="grid" x1="{_fmt(x)}" y1="0" x2="{_fmt(x)}"'
            f' y2="{_fmt(height)}"/>'
        )
    for gy in range(math.ceil(lo[1]), math.floor(hi[1]) + 1):
        _, y = to_px((0.0, gy))
        out.append(
            f'<line class="grid" x1="0" y1="{_fmt(y)}" x2="{_fmt(width)}"'
            f' y2="{_fmt(y)}"/>'
        )
    out.append("</g>")

    out.append(
        f'<polygon class="boundary" points="{ring_attr(plan.boundary.vertices)}"/>'
    )

    for room in sorted(plan.rooms, key=lambda r: r.room_id):
        out.append(f'<polygon class="room" points="{ring_attr(room.vertices)}"/>')
        cx, cy = to_px(room.vertices.mean(axis=0))
        out.append(
            f'<text class="label" x="{_fmt(cx)}" y="{_fmt(cy)}">'
            f"{room.room_id}</text>"
        )

    for door in sorted(plan.doors, key=lambda d: (d.room_id, d.wall_index, d.ratio)):
        room = plan.room(door.room_id)
        p0, p1 = door_span(room, door)
        along = p1 - p0
        normal = np.array([-along[1], along[0]])
        tip = p0 + normal
        hx, hy = to_px(p0)
        fx, fy = to_px(p1)
        tx, ty = to_px(tip)
        r = door.width * PX_PER_M
        out.append('<g class="door">')
        out.append(
            f'<line x1="{_fmt(hx)}" y1="{_fmt(hy)}" x2="{_fmt(tx)}"'
            f' y2="{_fmt(ty)}"/>'
        )
        out.append(
            f'<path d="M {_fmt(fx)} {_fmt(fy)} A {_fmt(r)} {_fmt(r)}'
            f' 0 0 1 {_fmt(tx)} {_fmt(ty)}"/>'
        )
        out.append("</g>")

    bx, by = 10.0, height - 12.0
    out.append('<g class="scalebar">')
    out.append(
        f'<line x1="{_fmt(bx)}" y1="{_fmt(by)}" x2="{_fmt(bx + PX_PER_M)}"'
        f' y2="{_fmt(by)}"/>'
    )
    out.append(
        f'<text x="{_fmt(bx + PX_PER_M + 6.0)}" y="{_fmt(by + 4.0)}">1 m</text>'
    )
    out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(plan: FloorPlan, path: str | Path) -> None:
    Path(path).write_text(render_svg(plan))
