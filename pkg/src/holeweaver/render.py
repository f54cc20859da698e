"""Static SVG rendering of scenarios, holes, and healing results.

Figure conventions: holes gray-filled, obstacles black, static sensors
solid circle outlines, mobile sensors dashed. Output is deterministic
text (fixed float formatting, no timestamps).
"""

from __future__ import annotations

import math
from typing import Sequence

from .geom import Edge
from .regions import Hole
from .scenario import Scenario

_MARGIN = 0.04  # of the larger environment dimension


def _fmt(v: float) -> str:
    return f"{v:.6f}".rstrip("0").rstrip(".")


class _Canvas:
    def __init__(self, sc: Scenario, pixels: float):
        x0, y0, x1, y1 = sc.roi.bbox()
        span = max(x1 - x0, y1 - y0)
        m = _MARGIN * span
        self.x0, self.y1 = x0 - m, y1 + m
        self.w = (x1 - x0) + 2 * m
        self.h = (y1 - y0) + 2 * m
        self.scale = pixels / max(self.w, self.h)

    def pt(self, x: float, y: float) -> tuple[float, float]:
        # Flip y so the figure reads with y upward.
        return ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)


def _path_for_cycle(cv: _Canvas, cycle: Sequence[Edge]) -> str:
    cmds: list[str] = []
    first = cycle[0]
    if first.is_full_circle:
        a = first.arc
        r = a.radius * cv.scale
        x0, y0 = cv.pt(a.center.x - a.radius, a.center.y)
        x1, y1 = cv.pt(a.center.x + a.radius, a.center.y)
        # Mirrored y flips handedness: math-ccw renders as svg sweep 0.
        sweep = "0" if a.ccw else "1"
        return (f"M {_fmt(x0)} {_fmt(y0)} "
                f"A {_fmt(r)} {_fmt(r)} 0 1 {sweep} {_fmt(x1)} {_fmt(y1)} "
                f"A {_fmt(r)} {_fmt(r)} 0 1 {sweep} {_fmt(x0)} {_fmt(y0)} Z")
    sx, sy = cv.pt(first.start.x, first.start.y)
    cmds.append(f"M {_fmt(sx)} {_fmt(sy)}")
    for e in cycle:
        ex, ey = cv.pt(e.end.x, e.end.y)
        if e.arc is None:
            cmds.append(f"L {_fmt(ex)} {_fmt(ey)}")
        else:
            r = e.arc.radius * cv.scale
            sweep_angle = e.sweep()
            large = "1" if abs(sweep_angle) > math.pi else "0"
            sweep = "0" if e.arc.ccw else "1"
            cmds.append(f"A {_fmt(r)} {_fmt(r)} 0 {large} {sweep} {_fmt(ex)} {_fmt(ey)}")
    cmds.append("Z")
    return " ".join(cmds)


def render_svg(sc: Scenario, holes: Sequence[Hole] = (), pixels: float = 800.0) -> str:
    """Render the deployment and its holes as an SVG document string."""
    cv = _Canvas(sc, pixels)
    width = cv.w * cv.scale
    height = cv.h * cv.scale
    parts: list[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]

    roi_pts = " ".join(f"{_fmt(px)},{_fmt(py)}"
                       for px, py in (cv.pt(p.x, p.y) for p in sc.roi.vertices))
    parts.append(f'<polygon points="{roi_pts}" fill="none" stroke="#444" '
                 f'stroke-width="1.5"/>')

    for hole in holes:
        d = " ".join(_path_for_cycle(cv, cyc) for cyc in hole.cycles())
        parts.append(f'<path d="{d}" fill="#bbbbbb" fill-rule="evenodd" '
                     f'stroke="none"/>')

    for o in sc.obstacles:
        pts = " ".join(f"{_fmt(px)},{_fmt(py)}"
                       for px, py in (cv.pt(p.x, p.y) for p in o.vertices))
        parts.append(f'<polygon points="{pts}" fill="black" stroke="none"/>')

    for s in sc.sensors:
        cxp, cyp = cv.pt(s.center.x, s.center.y)
        r = s.radius * cv.scale
        dash = ' stroke-dasharray="6 4"' if s.mobile else ""
        parts.append(f'<circle cx="{_fmt(cxp)}" cy="{_fmt(cyp)}" r="{_fmt(r)}" '
                     f'fill="none" stroke="#1a6faf" stroke-width="1.2"{dash}/>')
        parts.append(f'<circle cx="{_fmt(cxp)}" cy="{_fmt(cyp)}" r="2" '
                     f'fill="#1a6faf"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
