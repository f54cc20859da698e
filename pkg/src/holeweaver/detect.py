"""Coverage-hole detection.

The detector finds every point where two boundary curves (sensor circles,
environment edges) cross without being strictly inside any sensing disk,
marches each circle clockwise between its points to keep the arcs whose
midpoints are uncovered, splits the environment boundary the same way, and
stitches the surviving edges into closed hole boundaries. Obstacles are
then carved out of the holes one at a time by region difference.

Coverage transitions along any circle can only happen at collected
boundary points, so the midpoint of each candidate arc decides the whole
arc. Tangential contacts are zero-width and never recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError
from .geom import (EPS, Arc, CoverageIndex, Disk, Edge, EdgeSource, Point,
                   PointMerger, SimplePolygon, circle_circle_intersections,
                   circle_segment_intersections, dist,
                   polygons_interiors_overlap, segments_properly_cross)
from .neighbors import NeighborGraph, build_neighbor_graph
from .regions import Hole, group_cycles_into_holes, stitch_cycles, subtract_obstacle

_FULL_CIRCLE_PROBES = 7


@dataclass(frozen=True)
class BoundaryPoint:
    """An uncovered crossing of two boundary curves.

    sources names the curves meeting here (two, or more at a shared
    junction); angles carries the point's angle on each incident circle,
    which is what clockwise marching sorts by.
    """

    location: Point
    sources: tuple[EdgeSource, ...]
    angles: tuple[tuple[int, float], ...]


class _BoundaryData:
    """Canonicalized boundary points with per-curve lookup tables."""

    def __init__(self, sensors: Sequence[Disk]):
        self.merger = PointMerger()
        self.index = CoverageIndex(sensors)
        self.sources: dict[Point, set[EdgeSource]] = {}
        self.per_sensor: dict[int, set[Point]] = {}
        self.per_roi_edge: dict[int, set[Point]] = {}

    def add(self, p: Point, sources: Iterable[EdgeSource]) -> Point:
        cp = self.merger.canonical(p)
        rec = self.sources.setdefault(cp, set())
        for src in sources:
            rec.add(src)
            if src.kind == "sensor":
                self.per_sensor.setdefault(src.owner, set()).add(cp)
            elif src.kind == "roi":
                self.per_roi_edge.setdefault(src.owner, set()).add(cp)
        return cp

    def as_points(self, sensors_by_id: dict[int, Disk]) -> list[BoundaryPoint]:
        out = []
        for loc in sorted(self.sources, key=lambda p: (p.x, p.y)):
            srcs = tuple(sorted(self.sources[loc],
                                key=lambda s: (s.kind, s.owner, s.edge)))
            angles = tuple(
                (src.owner, math.atan2(loc.y - sensors_by_id[src.owner].center.y,
                                       loc.x - sensors_by_id[src.owner].center.x))
                for src in srcs if src.kind == "sensor")
            out.append(BoundaryPoint(loc, srcs, angles))
        return out


def _collect(sensors: Sequence[Disk], roi: SimplePolygon,
             graph: NeighborGraph) -> _BoundaryData:
    data = _BoundaryData(sensors)
    by_id = {s.id: s for s in sensors}

    for i, j in sorted(graph.adjacency):
        hits = circle_circle_intersections(by_id[i], by_id[j])
        if hits.kind != "transversal":
            continue
        for p in hits.points:
            if roi.contains(p) < 0:
                continue
            if data.index.strictly_covered(p):
                continue
            data.add(p, (EdgeSource("sensor", i), EdgeSource("sensor", j)))

    roi_edges = roi.edges()
    active = [s for s in sensors if s.id not in graph.dominated]
    for s in active:
        x0, y0, x1, y1 = s.bbox()
        for k, (a, b) in enumerate(roi_edges):
            if max(a.x, b.x) < x0 or min(a.x, b.x) > x1 \
                    or max(a.y, b.y) < y0 or min(a.y, b.y) > y1:
                continue
            hits = circle_segment_intersections(s, a, b)
            if hits.kind != "transversal":
                continue
            for p in hits.points:
                if data.index.strictly_covered(p):
                    continue
                data.add(p, (EdgeSource("sensor", s.id), EdgeSource("roi", k)))

    nverts = len(roi.vertices)
    for k, v in enumerate(roi.vertices):
        if data.index.strictly_covered(v):
            continue
        data.add(v, (EdgeSource("roi", (k - 1) % nverts), EdgeSource("roi", k)))
    return data


def collect_boundary_points(sensors: Sequence[Disk], roi: SimplePolygon,
                            graph: NeighborGraph) -> list[BoundaryPoint]:
    """All uncovered curve crossings inside the environment, with provenance."""
    data = _collect(sensors, roi, graph)
    return data.as_points({s.id: s for s in sensors})


def _march_circle(sensor: Disk, points: list[Point], index: CoverageIndex,
                  roi: SimplePolygon) -> list[Edge]:
    """Clockwise march emitting the uncovered in-environment arcs."""
    src = EdgeSource("sensor", sensor.id)
    c, r = sensor.center, sensor.radius

    if not points:
        # No crossings: the circle is uniformly covered, outside, or free.
        for k in range(_FULL_CIRCLE_PROBES):
            theta = 0.1234567 + 2.0 * math.pi * k / _FULL_CIRCLE_PROBES
            p = Point(c.x + r * math.cos(theta), c.y + r * math.sin(theta))
            if roi.contains(p) != 1 or index.strictly_covered(p):
                return []
        anchor = Point(c.x + r, c.y)
        return [Edge(anchor, anchor, Arc(c, r, ccw=False, full=True), src)]

    slotted = sorted(((math.atan2(p.y - c.y, p.x - c.x), p) for p in points),
                     key=lambda item: (-item[0], item[1].x, item[1].y))
    out: list[Edge] = []
    n = len(slotted)
    for k in range(n):
        th1, p1 = slotted[k]
        th2, p2 = slotted[(k + 1) % n]
        sweep_cw = (th1 - th2) % (2.0 * math.pi)
        if sweep_cw <= 0.0:
            sweep_cw = 2.0 * math.pi
        mid_angle = th1 - 0.5 * sweep_cw
        mid = Point(c.x + r * math.cos(mid_angle), c.y + r * math.sin(mid_angle))
        if roi.contains(mid) != 1 or index.strictly_covered(mid):
            continue
        out.append(Edge(p1, p2, Arc(c, r, ccw=False), src))
    return out


def uncovered_arcs(sensor: Disk, points: Sequence[BoundaryPoint],
                   sensors: Sequence[Disk], roi: SimplePolygon) -> list[Edge]:
    """The clockwise-directed arcs of one circle that bound holes.

    points are this sensor's boundary points; a circle with none of its own
    that is free and inside the environment yields one full-circle edge.
    """
    index = CoverageIndex(sensors)
    locs = [bp.location for bp in points]
    return _march_circle(sensor, locs, index, roi)


def _roi_fragments(data: _BoundaryData, roi: SimplePolygon) -> list[Edge]:
    """Uncovered pieces of the environment boundary, split at its points."""
    out: list[Edge] = []
    for k, (a, b) in enumerate(roi.edges()):
        ca = data.merger.canonical(a)
        cb = data.merger.canonical(b)
        length = dist(a, b)
        items = {0.0: ca, 1.0: cb}
        for p in data.per_roi_edge.get(k, ()):
            t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (length * length)
            if EPS / length < t < 1.0 - EPS / length:
                items[t] = p
        ordered = sorted(items.items())
        for (t1, p1), (t2, p2) in zip(ordered, ordered[1:]):
            if dist(p1, p2) <= EPS:
                continue
            mid = Point((p1.x + p2.x) / 2.0, (p1.y + p2.y) / 2.0)
            if data.index.strictly_covered(mid):
                continue
            out.append(Edge(p1, p2, None, EdgeSource("roi", k)))
    return out


def validate_obstacle_set(roi: SimplePolygon, obstacles: Sequence[SimplePolygon],
                          sensors: Sequence[Disk] = ()) -> None:
    """Enforce the obstacle-set assumptions: pairwise disjoint interiors,
    contained in the environment (touching its boundary is fine), and no
    sensor center strictly inside any obstacle."""
    for idx, o in enumerate(obstacles):
        for v in o.vertices:
            if roi.contains(v) < 0:
                raise InputError(f"obstacle {idx} reaches outside the environment")
        for a, b in o.edges():
            for ra, rb in roi.edges():
                if segments_properly_cross(a, b, ra, rb):
                    raise InputError(
                        f"obstacle {idx} crosses the environment boundary")
        for s in sensors:
            if o.contains(s.center) == 1:
                raise InputError(
                    f"sensor {s.id} center lies inside obstacle {idx}")
    for i in range(len(obstacles)):
        for j in range(i + 1, len(obstacles)):
            if polygons_interiors_overlap(obstacles[i], obstacles[j]):
                raise InputError(f"obstacles {i} and {j} overlap")


def find_holes(sensors: Sequence[Disk], roi: SimplePolygon,
               obstacles: Sequence[SimplePolygon] = (),
               strategy: str = "exact",
               graph: NeighborGraph | None = None) -> list[Hole]:
    """Detect all coverage holes of a deployment, obstacles included.

    Without obstacles this is pure boundary-point extraction and stitching;
    each obstacle is then inserted incrementally by subtracting its interior
    from the holes it touches. The result is deterministic for a fixed
    input and independent of the obstacle order as a region set.
    """
    ids = [s.id for s in sensors]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate sensor ids")
    if obstacles:
        validate_obstacle_set(roi, obstacles, sensors)

    if not sensors:
        cycles = stitch_cycles(
            [Edge(a, b, None, EdgeSource("roi", k))
             for k, (a, b) in enumerate(roi.edges())])
        holes = group_cycles_into_holes(cycles)
    else:
        if graph is None:
            graph = build_neighbor_graph(sensors, strategy)
        data = _collect(sensors, roi, graph)
        edges: list[Edge] = []
        for s in sensors:
            if s.id in graph.dominated:
                continue
            pts = sorted(data.per_sensor.get(s.id, ()), key=lambda p: (p.x, p.y))
            edges.extend(_march_circle(s, pts, data.index, roi))
        edges.extend(_roi_fragments(data, roi))
        holes = group_cycles_into_holes(stitch_cycles(edges)) if edges else []

    for idx, o in enumerate(obstacles):
        holes = subtract_obstacle(holes, o, idx)
    return holes
