"""Greedy hole healing: relocate mobile sensors for maximum coverage gain.

Candidate target sites are drawn from the holes themselves (centroids of a
chord-polygon triangulation, an approximate deepest point, and a uniform
grid). Each greedy step evaluates the net gain of every unmoved mobile at
every site - area newly covered minus area uncovered by vacating - applies
the best (sensor, site) pair, and recomputes the holes. Gains are measured
with the same exact region algebra as detection, so the plan's bookkeeping
matches a fresh detection run on the final deployment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .geom import (EPS, Arc, Disk, Edge, EdgeSource, Point, PointMerger,
                   SimplePolygon, bbox_of_cycles, bboxes_overlap, cycle_area,
                   dist, point_in_cycles, seg_dist)
from .detect import find_holes
from .regions import Hole, clip_cycles, holes_area

GAIN_EPS = 1e-9  # smallest net gain (m^2) worth moving a sensor for


@dataclass(frozen=True)
class CandidateSite:
    """An admissible relocation target inside a hole."""

    location: Point
    origin: str  # "centroid" | "deepest" | "grid"


@dataclass(frozen=True)
class Move:
    sensor_id: int
    src: Point
    dst: Point
    gain: float


@dataclass(frozen=True)
class HealingPlan:
    """Ordered relocations with their net coverage gains (m^2).

    coverage values measure covered area within free space (environment
    minus obstacles); coverage_after equals coverage_before plus the sum
    of the recorded gains.
    """

    moves: tuple[Move, ...]
    coverage_before: float
    coverage_after: float


# ---------------------------------------------------------------------------
# Candidate sites
# ---------------------------------------------------------------------------

def candidate_sites(holes: Sequence[Hole], budget: int) -> list[CandidateSite]:
    """Deterministic site set across all holes, at most budget points.

    Sites come from each hole's chord-polygon triangulation (the
    area-weighted centroid, then individual triangle centroids), an
    approximate deepest point, and a shared uniform grid whose pitch is
    chosen to respect the budget. Passes run breadth-first across holes so
    a tight budget still reaches every hole before any hole gets seconds.
    Sites are deduplicated within EPS and lie strictly inside their hole
    (hence inside the environment and outside every obstacle).
    """
    if budget < 1:
        raise InputError("site budget must be >= 1")
    if not holes:
        return []
    merger = PointMerger()
    seen: set[int] = set()
    out: list[CandidateSite] = []

    def push(p: Point, origin: str, hole: Hole) -> None:
        if len(out) >= budget:
            return
        if point_in_cycles(p, hole.cycles()) != 1:
            return
        cp = merger.canonical(p)
        if id(cp) in seen:
            return
        seen.add(id(cp))
        out.append(CandidateSite(cp, origin))

    triangulations = [_ear_clip(_chord_polygon(h.outer)) for h in holes]
    for hole, tris in zip(holes, triangulations):
        if tris:
            push(_triangulation_centroid(tris), "centroid", hole)
    for hole in holes:
        push(_deepest_point(hole), "deepest", hole)
    for hole, tris in zip(holes, triangulations):
        for tri in tris:
            push(_tri_centroid(tri), "centroid", hole)

    total_bbox_area = 0.0
    boxes = []
    for hole in holes:
        x0, y0, x1, y1 = hole.bbox()
        boxes.append((x0, y0, x1, y1))
        total_bbox_area += (x1 - x0) * (y1 - y0)
    # Refine the grid until the budget fills (notches and islands swallow
    # lattice points, so one pass can run short).
    for refine in range(6):
        remaining = budget - len(out)
        if remaining <= 0:
            break
        pitch = math.sqrt(max(total_bbox_area, 1e-12) / remaining) / (1 << refine)
        for hole, (x0, y0, x1, y1) in zip(holes, boxes):
            ny = max(1, round((y1 - y0) / pitch))
            nx = max(1, round((x1 - x0) / pitch))
            for iy in range(ny):
                for ix in range(nx):
                    if len(out) >= budget:
                        break
                    p = Point(x0 + (ix + 0.5) * (x1 - x0) / nx,
                              y0 + (iy + 0.5) * (y1 - y0) / ny)
                    push(p, "grid", hole)
    return out[:budget]


def _chord_polygon(outer: Sequence[Edge]) -> list[Point]:
    pts = [e.start for e in outer if not e.is_full_circle]
    return pts


def _ear_clip(pts: list[Point]) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation; returns [] when the chord polygon is
    degenerate (arc chords can self-intersect in contrived holes)."""
    if len(pts) < 3:
        return []
    verts = list(pts)
    if _signed_area(verts) < 0.0:
        verts.reverse()
    tris: list[tuple[Point, Point, Point]] = []
    guard = 0
    while len(verts) > 3 and guard < 10000:
        guard += 1
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % n]
            if _cross(a, b, c) <= 1e-15:
                continue
            if any(_point_in_tri(q, a, b, c) for j, q in enumerate(verts)
                   if q not in (a, b, c)):
                continue
            tris.append((a, b, c))
            del verts[i]
            break
        else:
            return []  # no ear: not a simple polygon
    if len(verts) == 3:
        tris.append(tuple(verts))
    return tris


def _signed_area(pts: Sequence[Point]) -> float:
    total = 0.0
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        total += a.x * b.y - b.x * a.y
    return 0.5 * total


def _cross(a: Point, b: Point, c: Point) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _point_in_tri(q: Point, a: Point, b: Point, c: Point) -> bool:
    d1, d2, d3 = _cross(a, b, q), _cross(b, c, q), _cross(c, a, q)
    return d1 > 1e-15 and d2 > 1e-15 and d3 > 1e-15


def _tri_centroid(tri: tuple[Point, Point, Point]) -> Point:
    a, b, c = tri
    return Point((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)


def _triangulation_centroid(tris: list[tuple[Point, Point, Point]]) -> Point:
    total = 0.0
    mx = my = 0.0
    for a, b, c in tris:
        w = abs(_cross(a, b, c)) / 2.0
        total += w
        mx += w * (a.x + b.x + c.x) / 3.0
        my += w * (a.y + b.y + c.y) / 3.0
    if total <= 0.0:
        a, b, c = tris[0]
        return _tri_centroid((a, b, c))
    return Point(mx / total, my / total)


def _deepest_point(hole: Hole, probes: int = 7) -> Point:
    """Grid point of the hole farthest from its boundary (approximate)."""
    x0, y0, x1, y1 = hole.bbox()
    cycles = hole.cycles()
    edges = [e for cyc in cycles for e in cyc]
    best, best_p = -1.0, Point((x0 + x1) / 2.0, (y0 + y1) / 2.0)
    for iy in range(probes):
        for ix in range(probes):
            p = Point(x0 + (ix + 0.5) * (x1 - x0) / probes,
                      y0 + (iy + 0.5) * (y1 - y0) / probes)
            if point_in_cycles(p, cycles) != 1:
                continue
            clearance = min(_edge_distance(p, e) for e in edges)
            if clearance > best:
                best, best_p = clearance, p
    return best_p


def _edge_distance(p: Point, e: Edge) -> float:
    if e.arc is None:
        return seg_dist(p, e.start, e.end)
    radial = abs(dist(p, e.arc.center) - e.arc.radius)
    if e.is_full_circle or e.contains_point(
            Point(*_closest_on_circle(p, e)), 10.0 * EPS):
        return radial
    return min(dist(p, e.start), dist(p, e.end))


def _closest_on_circle(p: Point, e: Edge) -> tuple[float, float]:
    c, r = e.arc.center, e.arc.radius
    d = dist(p, c)
    if d <= EPS:
        return (c.x + r, c.y)
    return (c.x + (p.x - c.x) * r / d, c.y + (p.y - c.y) * r / d)


# ---------------------------------------------------------------------------
# Gains
# ---------------------------------------------------------------------------

def _disk_holes_overlap(radius: float, site: Point, holes: Sequence[Hole],
                        owner_id: int) -> float:
    """Area of disk(site, radius) inside the union of the holes."""
    total = 0.0
    dbox = (site.x - radius, site.y - radius, site.x + radius, site.y + radius)
    for hole in holes:
        if not bboxes_overlap(hole.bbox(), dbox):
            continue
        cyc = clip_cycles(hole.cycles(), circle=(site, radius), op="intersection",
                          tool_source=lambda _i: EdgeSource("sensor", owner_id))
        total += sum(cycle_area(c) for c in cyc)
    return total


def sole_coverage_region(sensor: Disk, sensors: Sequence[Disk],
                         roi: SimplePolygon,
                         obstacles: Sequence[SimplePolygon] = ()) -> list[list[Edge]]:
    """Free-space area covered only by this sensor, as edge cycles."""
    c, r = sensor.center, sensor.radius
    anchor = Point(c.x + r, c.y)
    cycles: list[list[Edge]] = [[Edge(anchor, anchor, Arc(c, r, ccw=True, full=True),
                                      EdgeSource("sensor", sensor.id))]]
    cycles = clip_cycles(cycles, polygon=roi, op="intersection",
                         tool_source=lambda i: EdgeSource("roi", i))
    dbox = sensor.bbox()
    for idx, o in enumerate(obstacles):
        if cycles and bboxes_overlap(o.bbox(), dbox):
            cycles = clip_cycles(cycles, polygon=o, op="difference",
                                 tool_source=lambda i: EdgeSource("obstacle", idx, i))
    for other in sensors:
        if other.id == sensor.id or not cycles:
            continue
        if dist(other.center, c) >= other.radius + r:
            continue
        cycles = clip_cycles(cycles, circle=(other.center, other.radius),
                             op="difference",
                             tool_source=lambda _i: EdgeSource("sensor", other.id))
    return cycles


def coverage_gain(sensor: Disk, site: Point, holes: Sequence[Hole],
                  sensors: Sequence[Disk] = (), roi: SimplePolygon | None = None,
                  obstacles: Sequence[SimplePolygon] = ()) -> float:
    """Net covered-area change of moving the sensor to the site.

    The gross gain is the disk's overlap with the holes; when deployment
    context is supplied, the area only this sensor currently covers (and
    that its new disk will not re-cover) is charged against the move.
    """
    gross = _disk_holes_overlap(sensor.radius, site, holes, sensor.id)
    if not sensors or roi is None:
        return gross
    sole = sole_coverage_region(sensor, sensors, roi, obstacles)
    return gross - _vacating_loss(sole, sensor.radius, site, sensor.id)


def _vacating_loss(sole_cycles: list[list[Edge]], radius: float, site: Point,
                   owner_id: int) -> float:
    """Sole-coverage area not re-covered by the relocated disk."""
    sole_area = sum(cycle_area(c) for c in sole_cycles)
    if sole_area <= 0.0 or not sole_cycles:
        return max(sole_area, 0.0)
    dbox = (site.x - radius, site.y - radius, site.x + radius, site.y + radius)
    if not bboxes_overlap(bbox_of_cycles(sole_cycles), dbox):
        return sole_area
    recovered = clip_cycles(sole_cycles, circle=(site, radius), op="intersection",
                            tool_source=lambda _i: EdgeSource("sensor", owner_id))
    return sole_area - sum(cycle_area(c) for c in recovered)


# ---------------------------------------------------------------------------
# Greedy planner
# ---------------------------------------------------------------------------

def plan_healing(sensors: Sequence[Disk], roi: SimplePolygon,
                 obstacles: Sequence[SimplePolygon] = (),
                 holes: Sequence[Hole] | None = None,
                 sites: Sequence[CandidateSite] | None = None,
                 site_budget: int = 64,
                 strategy: str = "exact") -> HealingPlan:
    """Greedy relocation plan over a fixed candidate-site set.

    Each step picks the (unmoved mobile, site) pair of maximum net gain
    (ties: lower sensor id, then lexicographically smaller site), applies
    it, and re-detects the holes. Stops when every mobile has moved or no
    pair gains more than GAIN_EPS.
    """
    current = list(sensors)
    if holes is None:
        holes = find_holes(current, roi, obstacles, strategy=strategy)
    if sites is None:
        sites = candidate_sites(holes, site_budget)
    free_area = roi.area - sum(o.area for o in obstacles)
    coverage_before = free_area - holes_area(holes)

    unmoved = sorted([s.id for s in current if s.mobile])
    moves: list[Move] = []
    while unmoved:
        best: tuple[float, int, tuple[float, float]] | None = None
        best_site: Point | None = None
        by_id = {s.id: s for s in current}
        for sid in unmoved:
            m = by_id[sid]
            sole = sole_coverage_region(m, current, roi, obstacles)
            sole_area = sum(cycle_area(c) for c in sole)
            for cand in sites:
                site = cand.location
                # net <= gross <= cheap bound: prune strictly so exact ties
                # still reach the id/site tie-break below.
                if best is not None and _gross_upper_bound(m.radius, site, holes) < best[0]:
                    continue
                gross = _disk_holes_overlap(m.radius, site, holes, sid)
                if best is not None and gross < best[0]:
                    continue
                loss = _vacating_loss(sole, m.radius, site, sid) if sole_area > 0.0 else 0.0
                net = gross - loss
                key = (net, -sid, (-site.x, -site.y))
                if best is None or key > best:
                    best = key
                    best_site = site
        if best is None or best[0] <= GAIN_EPS:
            break
        sid = -best[1]
        m = by_id[sid]
        moves.append(Move(sid, m.center, best_site, best[0]))
        current = [Disk(s.id, best_site, s.radius, s.mobile) if s.id == sid else s
                   for s in current]
        unmoved.remove(sid)
        holes = find_holes(current, roi, obstacles, strategy=strategy)
    coverage_after = coverage_before + sum(mv.gain for mv in moves)
    return HealingPlan(tuple(moves), coverage_before, coverage_after)


def _gross_upper_bound(radius: float, site: Point, holes: Sequence[Hole]) -> float:
    """Cheap upper bound on disk-holes overlap from bounding boxes."""
    dbox = (site.x - radius, site.y - radius, site.x + radius, site.y + radius)
    disk_area = math.pi * radius * radius
    total = 0.0
    for hole in holes:
        hb = hole.bbox()
        if not bboxes_overlap(hb, dbox):
            continue
        ix = min(dbox[2], hb[2]) - max(dbox[0], hb[0])
        iy = min(dbox[3], hb[3]) - max(dbox[1], hb[1])
        total += min(hole.area, disk_area, ix * iy)
    return min(total, disk_area)
