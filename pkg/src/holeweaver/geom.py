"""Planar geometry kernel: disks, polygons, and directed segment/arc edges.

Everything downstream (neighbor graphs, hole extraction, region booleans,
healing) is built on the primitives here. All values are immutable and all
routines are pure functions, so they are safe to share across threads.

Conventions used throughout the package:

* Region interiors lie on the LEFT of directed boundary edges. Outer
  boundaries therefore run counter-clockwise and inner boundaries (islands)
  clockwise, and the signed area of a cycle is positive exactly for outer
  boundaries.
* Coincidence is judged at ``EPS`` meters. Contacts whose intersection
  points collapse within ``2 * TANGENT_EPS`` are classified as tangencies;
  tangencies are zero-width and never contribute to region topology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import InputError, StructureError

EPS = 1e-9           # coincidence tolerance for points and on-curve tests (m)
TANGENT_EPS = 1e-5   # intersections closer than 2x this collapse to a tangency (m)
AREA_DUST = 1e-12    # cycles below this magnitude are numerical debris (m^2)
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Core value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(f"non-finite point ({self.x}, {self.y})")


def dist(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def pts_close(a: Point, b: Point, tol: float = EPS) -> bool:
    return abs(a.x - b.x) <= tol and abs(a.y - b.y) <= tol and dist(a, b) <= tol


@dataclass(frozen=True)
class Disk:
    """A sensor's sensing region: center, radius, and mobility flag."""

    id: int
    center: Point
    radius: float
    mobile: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise InputError(f"disk {self.id}: radius must be positive and finite")

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.x - r, c.y - r, c.x + r, c.y + r)

    def contains(self, p: Point) -> int:
        """1 strictly inside, 0 within EPS of the circle, -1 strictly outside."""
        d = dist(p, self.center) - self.radius
        if abs(d) <= EPS:
            return 0
        return 1 if d < 0 else -1


@dataclass(frozen=True)
class SimplePolygon:
    """A simple polygon, stored counter-clockwise (normalized on build)."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(verts) < 3:
            raise InputError("polygon needs at least 3 vertices")
        for a, b in zip(verts, verts[1:] + verts[:1]):
            if pts_close(a, b):
                raise InputError("polygon has coincident consecutive vertices")
        area2 = _shoelace2(verts)
        if abs(area2) <= 2.0 * AREA_DUST:
            raise InputError("polygon has zero area")
        if area2 < 0.0:
            verts = verts[::-1]
            object.__setattr__(self, "vertices", verts)
        _check_simple(verts)

    @classmethod
    def from_coords(cls, coords: Iterable[tuple[float, float]]) -> "SimplePolygon":
        return cls(tuple(Point(float(x), float(y)) for x, y in coords))

    @property
    def area(self) -> float:
        return 0.5 * _shoelace2(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def contains(self, p: Point) -> int:
        """1 inside, 0 within EPS of the boundary, -1 outside."""
        for a, b in self.edges():
            if seg_dist(p, a, b) <= EPS:
                return 0
        inside = False
        for a, b in self.edges():
            if (a.y > p.y) != (b.y > p.y):
                xin = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if p.x < xin:
                    inside = not inside
        return 1 if inside else -1


def _shoelace2(verts: Sequence[Point]) -> float:
    total = 0.0
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total


def _check_simple(verts: Sequence[Point]) -> None:
    n = len(verts)
    for i in range(n):
        a1, a2 = verts[i], verts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share a vertex legitimately
            b1, b2 = verts[j], verts[(j + 1) % n]
            if segments_properly_cross(a1, a2, b1, b2):
                raise InputError("polygon is self-intersecting")


def seg_dist(p: Point, a: Point, b: Point) -> float:
    """Distance from a point to a closed segment."""
    abx, aby = b.x - a.x, b.y - a.y
    apx, apy = p.x - a.x, p.y - a.y
    denom = abx * abx + aby * aby
    if denom <= 0.0:
        return math.hypot(apx, apy)
    t = (apx * abx + apy * aby) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(apx - t * abx, apy - t * aby)


def segments_properly_cross(a1: Point, a2: Point, b1: Point, b2: Point) -> bool:
    """True when two segments cross at a single interior point of both."""
    d1x, d1y = a2.x - a1.x, a2.y - a1.y
    d2x, d2y = b2.x - b1.x, b2.y - b1.y
    det = d1x * d2y - d1y * d2x
    if abs(det) <= 1e-15 * (abs(d1x) + abs(d1y)) * (abs(d2x) + abs(d2y)) + 1e-300:
        return False
    rx, ry = b1.x - a1.x, b1.y - a1.y
    t = (rx * d2y - ry * d2x) / det
    s = (rx * d1y - ry * d1x) / det
    margin = 1e-12
    return margin < t < 1.0 - margin and margin < s < 1.0 - margin


def polygons_interiors_overlap(p: SimplePolygon, q: SimplePolygon) -> bool:
    """True when two simple polygons share interior area (touching is fine)."""
    for a1, a2 in p.edges():
        for b1, b2 in q.edges():
            if segments_properly_cross(a1, a2, b1, b2):
                return True
    # No proper crossings: containment is the only remaining overlap mode.
    if q.contains(_poly_probe(p)) == 1:
        return True
    if p.contains(_poly_probe(q)) == 1:
        return True
    return False


def _poly_probe(p: SimplePolygon) -> Point:
    # A point slightly inside the polygon, derived from a convex-ish vertex.
    verts = p.vertices
    n = len(verts)
    i = min(range(n), key=lambda k: (verts[k].x, verts[k].y))
    a, b, c = verts[i - 1], verts[i], verts[(i + 1) % n]
    mx, my = (a.x + c.x) / 2.0 - b.x, (a.y + c.y) / 2.0 - b.y
    norm = math.hypot(mx, my) or 1.0
    for scale in (1e-6, 1e-9, 1e-3):
        cand = Point(b.x + mx / norm * scale, b.y + my / norm * scale)
        if p.contains(cand) == 1:
            return cand
    return verts[i]


# ---------------------------------------------------------------------------
# Directed boundary edges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeSource:
    """Provenance of a boundary edge.

    kind "sensor": owner is the sensor id.
    kind "roi": owner is the environment-boundary edge index.
    kind "obstacle": owner is the obstacle index, edge the polygon edge index.
    """

    kind: str
    owner: int
    edge: int = 0


@dataclass(frozen=True)
class Arc:
    """Circle-arc geometry attached to an Edge; ccw is the travel direction."""

    center: Point
    radius: float
    ccw: bool
    full: bool = False


@dataclass(frozen=True)
class Edge:
    """A directed boundary edge, straight (arc=None) or circular.

    The region the edge bounds lies on the left of the travel direction.
    A full-circle edge has start == end and arc.full set.
    """

    start: Point
    end: Point
    arc: Arc | None
    source: EdgeSource

    @property
    def is_arc(self) -> bool:
        return self.arc is not None

    @property
    def is_full_circle(self) -> bool:
        return self.arc is not None and self.arc.full

    # -- angles and sweep ---------------------------------------------------

    def start_angle(self) -> float:
        a = self.arc
        return math.atan2(self.start.y - a.center.y, self.start.x - a.center.x)

    def end_angle(self) -> float:
        a = self.arc
        return math.atan2(self.end.y - a.center.y, self.end.x - a.center.x)

    def sweep(self) -> float:
        """Signed angular sweep: positive ccw, negative cw, +-2pi when full."""
        a = self.arc
        if a.full:
            return TWO_PI if a.ccw else -TWO_PI
        sa, ea = self.start_angle(), self.end_angle()
        if a.ccw:
            raw = (ea - sa) % TWO_PI
            return raw if raw > 0.0 else TWO_PI
        raw = (sa - ea) % TWO_PI
        return -(raw if raw > 0.0 else TWO_PI)

    def point_at_angle(self, theta: float) -> Point:
        a = self.arc
        return Point(a.center.x + a.radius * math.cos(theta),
                     a.center.y + a.radius * math.sin(theta))

    def midpoint(self) -> Point:
        if self.arc is None:
            return Point((self.start.x + self.end.x) / 2.0,
                         (self.start.y + self.end.y) / 2.0)
        return self.point_at_angle(self.start_angle() + 0.5 * self.sweep())

    # -- differential data ---------------------------------------------------

    def _dir_at_angle(self, theta: float) -> tuple[float, float]:
        if self.arc.ccw:
            return (-math.sin(theta), math.cos(theta))
        return (math.sin(theta), -math.cos(theta))

    def tangent_at_start(self) -> tuple[float, float]:
        if self.arc is None:
            d = dist(self.start, self.end) or 1.0
            return ((self.end.x - self.start.x) / d, (self.end.y - self.start.y) / d)
        return self._dir_at_angle(self.start_angle())

    def tangent_at_end(self) -> tuple[float, float]:
        if self.arc is None:
            return self.tangent_at_start()
        return self._dir_at_angle(self.end_angle())

    def tangent_at_mid(self) -> tuple[float, float]:
        if self.arc is None:
            return self.tangent_at_start()
        return self._dir_at_angle(self.start_angle() + 0.5 * self.sweep())

    def curvature(self) -> float:
        """Signed curvature along the travel direction (left turn positive)."""
        if self.arc is None:
            return 0.0
        return (1.0 if self.arc.ccw else -1.0) / self.arc.radius

    def reversed(self) -> "Edge":
        if self.arc is None:
            return Edge(self.end, self.start, None, self.source)
        return Edge(self.end, self.start, replace(self.arc, ccw=not self.arc.ccw),
                    self.source)

    # -- area ---------------------------------------------------------------

    def area_term(self) -> float:
        """Green's-theorem contribution: chord shoelace plus the arc bulge."""
        xs, ys, xe, ye = self.start.x, self.start.y, self.end.x, self.end.y
        if self.arc is None:
            return 0.5 * (xs * ye - xe * ys)
        a = self.arc
        sweep = self.sweep()
        return 0.5 * (a.radius * a.radius * sweep
                      + a.center.x * (ye - ys) - a.center.y * (xe - xs))

    # -- point queries and splitting -----------------------------------------

    def contains_point(self, p: Point, tol: float = EPS) -> bool:
        if self.arc is None:
            return seg_dist(p, self.start, self.end) <= tol
        a = self.arc
        if abs(dist(p, a.center) - a.radius) > tol:
            return False
        if a.full:
            return True
        theta = math.atan2(p.y - a.center.y, p.x - a.center.x)
        off = self._angle_offset(theta)
        span = abs(self.sweep())
        slack = tol / a.radius
        return -slack <= off <= span + slack

    def _angle_offset(self, theta: float) -> float:
        """Angular distance of theta from the start, measured along travel."""
        sa = self.start_angle()
        if self.arc.ccw:
            return (theta - sa) % TWO_PI
        return (sa - theta) % TWO_PI

    def param_of(self, p: Point) -> float:
        """Monotone travel parameter of a point assumed to lie on the edge."""
        if self.arc is None:
            abx, aby = self.end.x - self.start.x, self.end.y - self.start.y
            denom = abx * abx + aby * aby
            return ((p.x - self.start.x) * abx + (p.y - self.start.y) * aby) / denom
        theta = math.atan2(p.y - self.arc.center.y, p.x - self.arc.center.x)
        return self._angle_offset(theta)

    def point_on(self, param: float) -> Point:
        if self.arc is None:
            return Point(self.start.x + param * (self.end.x - self.start.x),
                         self.start.y + param * (self.end.y - self.start.y))
        sa = self.start_angle()
        theta = sa + param if self.arc.ccw else sa - param
        return self.point_at_angle(theta)

    def split_at(self, points: Sequence[Point]) -> list["Edge"]:
        """Split at interior points (endpoint-coincident ones are ignored)."""
        if not points:
            return [self]
        if self.arc is None:
            seg_len = dist(self.start, self.end)
            end_param = 1.0
            guard = EPS / max(seg_len, EPS)
        else:
            end_param = abs(self.sweep())
            guard = EPS / self.arc.radius
        items: list[tuple[float, Point]] = []
        for p in points:
            t = self.param_of(p)
            if self.is_full_circle:
                items.append((t % TWO_PI, p))
            elif guard < t < end_param - guard:
                items.append((t, p))
        if not items:
            return [self]
        items.sort(key=lambda it: it[0])
        deduped: list[tuple[float, Point]] = []
        for t, p in items:
            if deduped and pts_close(deduped[-1][1], p):
                continue
            deduped.append((t, p))
        arc = self.arc
        pieces: list[Edge] = []
        if self.is_full_circle:
            # The circle opens up at the split points and wraps around. A
            # single split yields one self-loop arc (full sweep, not marked
            # full) so the junction there still pairs up when stitching.
            open_arc = replace(arc, full=False)
            pts = [p for _, p in deduped]
            for i, p in enumerate(pts):
                q = pts[(i + 1) % len(pts)]
                pieces.append(Edge(p, q, open_arc, self.source))
            return pieces
        prev = self.start
        for _, p in deduped:
            pieces.append(Edge(prev, p, arc, self.source))
            prev = p
        pieces.append(Edge(prev, self.end, arc, self.source))
        return pieces


# ---------------------------------------------------------------------------
# Circle intersections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleHits:
    """Result of intersecting two circles.

    kind is one of "none", "tangent", "transversal", "concentric",
    "identical". Degenerate pairs report no points; a tangency reports its
    single contact point but is ignored by region topology.
    """

    kind: str
    points: tuple[Point, ...] = ()


def circle_circle_intersections(a: Disk, b: Disk) -> CircleHits:
    """All points lying on both circles, with degeneracies classified."""
    if a.id == b.id:
        raise InputError("circle intersection requires distinct sensors")
    d = dist(a.center, b.center)
    r1, r2 = a.radius, b.radius
    if d <= EPS:
        kind = "identical" if abs(r1 - r2) <= EPS else "concentric"
        return CircleHits(kind)
    if d - (r1 + r2) > TANGENT_EPS:
        return CircleHits("none")
    if (abs(r1 - r2) - d) > TANGENT_EPS:
        return CircleHits("none")
    ux, uy = (b.center.x - a.center.x) / d, (b.center.y - a.center.y) / d
    along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    # Stable half-chord: h^2 = ((r1+r2)^2 - d^2)(d^2 - (r1-r2)^2) / (4 d^2)
    h2 = ((r1 + r2) * (r1 + r2) - d * d) * (d * d - (r1 - r2) * (r1 - r2)) / (4.0 * d * d)
    h = math.sqrt(h2) if h2 > 0.0 else 0.0
    px, py = a.center.x + along * ux, a.center.y + along * uy
    if h <= TANGENT_EPS:
        return CircleHits("tangent", (Point(px, py),))
    nx, ny = -uy, ux
    pts = sorted((Point(px + h * nx, py + h * ny), Point(px - h * nx, py - h * ny)),
                 key=lambda p: (p.x, p.y))
    return CircleHits("transversal", tuple(pts))


@dataclass(frozen=True)
class SegmentHits:
    """Result of intersecting a circle with a closed segment."""

    kind: str                      # "none" | "tangent" | "transversal"
    points: tuple[Point, ...] = ()
    params: tuple[float, ...] = ()  # t in [0, 1] along the segment


def circle_segment_intersections(d: Disk, a: Point, b: Point) -> SegmentHits:
    """Points of the segment [a, b] lying on the circle of d.

    Segment endpoints on the circle are snapped and reported once. A contact
    whose two roots collapse within 2 * TANGENT_EPS is reported as tangent.
    """
    seg_len = dist(a, b)
    if seg_len <= EPS:
        raise InputError("degenerate segment for circle intersection")
    abx, aby = b.x - a.x, b.y - a.y
    acx, acy = a.x - d.center.x, a.y - d.center.y
    qa = abx * abx + aby * aby
    qb = 2.0 * (abx * acx + aby * acy)
    qc = acx * acx + acy * acy - d.radius * d.radius
    disc = qb * qb - 4.0 * qa * qc
    # |t+ - t-| * seg_len = sqrt(disc) / sqrt(qa): tangency on chord length.
    tangent_disc = 4.0 * TANGENT_EPS * TANGENT_EPS * qa
    t_guard = EPS / seg_len
    if disc <= tangent_disc:
        if disc < -tangent_disc:
            return SegmentHits("none")
        t = -qb / (2.0 * qa)
        if -t_guard <= t <= 1.0 + t_guard:
            t = min(max(t, 0.0), 1.0)
            return SegmentHits("tangent", (_lerp(a, b, t),), (t,))
        return SegmentHits("none")
    root = math.sqrt(disc)
    out_pts: list[Point] = []
    out_ts: list[float] = []
    for t in ((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)):
        if not (-t_guard <= t <= 1.0 + t_guard):
            continue
        t = min(max(t, 0.0), 1.0)
        p = _lerp(a, b, t)
        if pts_close(p, a):
            p, t = a, 0.0
        elif pts_close(p, b):
            p, t = b, 1.0
        if out_pts and pts_close(out_pts[-1], p):
            continue
        out_pts.append(p)
        out_ts.append(t)
    if not out_pts:
        return SegmentHits("none")
    return SegmentHits("transversal", tuple(out_pts), tuple(out_ts))


def _lerp(a: Point, b: Point, t: float) -> Point:
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


# ---------------------------------------------------------------------------
# Coverage predicates
# ---------------------------------------------------------------------------

def covered(p: Point, sensors: Iterable[Disk], mode: str = "strict") -> bool:
    """Whether any disk covers p.

    strict: strictly inside some disk with EPS margin (hole boundary points
    are never strictly covered). closed: within EPS outside counts too.
    """
    if mode == "strict":
        return any(dist(p, s.center) < s.radius - EPS for s in sensors)
    if mode == "closed":
        return any(dist(p, s.center) <= s.radius + EPS for s in sensors)
    raise InputError(f"unknown coverage mode {mode!r}")


class CoverageIndex:
    """Uniform-grid index over disks for coverage and pair-candidate queries.

    Cell size is the maximum radius, so all disks covering a point have
    their centers within one cell ring, and all circle-intersecting pairs
    have centers within two rings.
    """

    def __init__(self, sensors: Sequence[Disk]):
        self.sensors = list(sensors)
        self.r_max = max((s.radius for s in self.sensors), default=1.0)
        self.cell = max(self.r_max, 1e-6)
        self._bins: dict[tuple[int, int], list[Disk]] = {}
        for s in self.sensors:
            self._bins.setdefault(self._key(s.center.x, s.center.y), []).append(s)

    def _key(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self.cell), math.floor(y / self.cell))

    def _ring(self, p: Point, radius_cells: int):
        kx, ky = self._key(p.x, p.y)
        for ix in range(kx - radius_cells, kx + radius_cells + 1):
            for iy in range(ky - radius_cells, ky + radius_cells + 1):
                bucket = self._bins.get((ix, iy))
                if bucket:
                    yield from bucket

    def candidates_near(self, p: Point) -> Iterable[Disk]:
        """Disks whose circle or interior can reach p."""
        return self._ring(p, 1)

    def strictly_covered(self, p: Point) -> bool:
        return any(dist(p, s.center) < s.radius - EPS for s in self._ring(p, 1))

    def covered_closed(self, p: Point) -> bool:
        return any(dist(p, s.center) <= s.radius + EPS for s in self._ring(p, 1))

    def candidate_pairs(self) -> list[tuple[Disk, Disk]]:
        """Unordered disk pairs whose circles could intersect."""
        out: list[tuple[Disk, Disk]] = []
        seen: set[tuple[int, int]] = set()
        for s in self.sensors:
            for t in self._ring(s.center, 2):
                if t.id <= s.id:
                    continue
                key = (s.id, t.id)
                if key in seen:
                    continue
                seen.add(key)
                gap = dist(s.center, t.center)
                if gap <= s.radius + t.radius + 2.0 * TANGENT_EPS:
                    out.append((s, t))
        out.sort(key=lambda pair: (pair[0].id, pair[1].id))
        return out

    def disks_near_bbox(self, bbox: tuple[float, float, float, float]) -> list[Disk]:
        x0, y0, x1, y1 = bbox
        out = []
        for s in self.sensors:
            bx0, by0, bx1, by1 = s.bbox()
            if bx1 < x0 or bx0 > x1 or by1 < y0 or by0 > y1:
                continue
            out.append(s)
        return out


# ---------------------------------------------------------------------------
# Point canonicalization
# ---------------------------------------------------------------------------

class PointMerger:
    """Snaps points within EPS of each other onto one representative.

    Junction stitching relies on coincident endpoints being the *same*
    value; intersection points computed along different routes agree only
    to rounding, so everything passes through here first. First-seen wins,
    which keeps results deterministic for a fixed insertion order.
    """

    def __init__(self, tol: float = EPS):
        self.tol = tol
        self._bins: dict[tuple[int, int], list[Point]] = {}

    def canonical(self, p: Point) -> Point:
        kx = math.floor(p.x / self.tol)
        ky = math.floor(p.y / self.tol)
        for ix in (kx - 1, kx, kx + 1):
            for iy in (ky - 1, ky, ky + 1):
                for q in self._bins.get((ix, iy), ()):
                    if pts_close(p, q, self.tol):
                        return q
        self._bins.setdefault((kx, ky), []).append(p)
        return p


# ---------------------------------------------------------------------------
# Cycle areas and membership
# ---------------------------------------------------------------------------

def cycle_area(edges: Sequence[Edge]) -> float:
    """Signed area of one closed cycle (positive = ccw = outer boundary)."""
    return sum(e.area_term() for e in edges)


def validate_cycles(cycles: Sequence[Sequence[Edge]]) -> None:
    """Check that every cycle closes up within EPS.

    Raises StructureError naming the first gap found. Full-circle edges
    must stand alone in their cycle.
    """
    for cyc in cycles:
        if not cyc:
            raise StructureError("empty cycle")
        if any(e.is_full_circle for e in cyc):
            if len(cyc) != 1:
                raise StructureError("full-circle edge mixed into a longer cycle")
            continue
        n = len(cyc)
        for i in range(n):
            e, f = cyc[i], cyc[(i + 1) % n]
            if not pts_close(e.end, f.start):
                raise StructureError(
                    f"cycle gap near ({e.end.x:.9f}, {e.end.y:.9f})")


def arc_polygon_area(cycles: Sequence[Sequence[Edge]]) -> float:
    """Area of a region given as closed edge cycles.

    Signed-area sum: the chord-polygon shoelace plus per-arc circular
    segment corrections, with clockwise (inner) cycles contributing
    negatively. Cycles must be closed within EPS.
    """
    validate_cycles(cycles)
    return sum(cycle_area(cyc) for cyc in cycles)


_RAY_SEEDS = [0.12345 + k * 0.381966 for k in range(40)]


def point_in_cycles(p: Point, cycles: Sequence[Sequence[Edge]]) -> int:
    """Region membership by ray parity: 1 inside, 0 on boundary, -1 outside.

    Casts rays in a fixed direction sequence and retries whenever a ray
    grazes an endpoint, runs parallel to a segment, or touches a circle
    tangentially, so the parity count is always unambiguous.
    """
    for cyc in cycles:
        for e in cyc:
            if e.contains_point(p, EPS):
                return 0
    for seed in _RAY_SEEDS:
        ang = (seed % 1.0) * TWO_PI
        ok, crossings = _ray_parity(p, math.cos(ang), math.sin(ang), cycles)
        if ok:
            return 1 if crossings % 2 else -1
    raise StructureError(f"ray casting failed to stabilize at ({p.x}, {p.y})")


def _ray_parity(p: Point, dx: float, dy: float,
                cycles: Sequence[Sequence[Edge]]) -> tuple[bool, int]:
    count = 0
    for cyc in cycles:
        for e in cyc:
            if e.arc is None:
                res = _ray_segment(p, dx, dy, e)
            else:
                res = _ray_arc(p, dx, dy, e)
            if res is None:
                return (False, 0)
            count += res
    return (True, count)


def _ray_segment(p: Point, dx: float, dy: float, e: Edge) -> int | None:
    a, b = e.start, e.end
    abx, aby = b.x - a.x, b.y - a.y
    det = abx * dy - aby * dx
    seg_len = math.hypot(abx, aby)
    if abs(det) <= 1e-12 * seg_len:
        # Parallel: harmless unless the segment hugs the ray line.
        if abs((a.x - p.x) * dy - (a.y - p.y) * dx) <= 10.0 * EPS:
            return None
        return 0
    rx, ry = a.x - p.x, a.y - p.y
    t = (rx * aby - ry * abx) / -det      # along the ray
    s = (rx * dy - ry * dx) / -det        # along the segment
    guard_s = 1e-9 / max(seg_len, 1e-9)
    if abs(t) <= 1e-9:
        # The segment's line passes through the ray origin. Were the point
        # actually on the segment the boundary pre-check would have fired,
        # so this is a non-crossing; retrying cannot move the origin.
        return 0
    if abs(s) <= guard_s or abs(s - 1.0) <= guard_s:
        return None
    if t > 0.0 and 0.0 < s < 1.0:
        return 1
    return 0


def _ray_arc(p: Point, dx: float, dy: float, e: Edge) -> int | None:
    a = e.arc
    cx, cy = a.center.x - p.x, a.center.y - p.y
    b = cx * dx + cy * dy
    disc = b * b - (cx * cx + cy * cy - a.radius * a.radius)
    if abs(disc) <= 1e-9 * max(a.radius, 1.0):
        return None  # tangential graze
    if disc < 0.0:
        return 0
    root = math.sqrt(disc)
    count = 0
    span = abs(e.sweep()) if not a.full else TWO_PI
    ang_guard = 1e-9 / a.radius
    for t in (b - root, b + root):
        if t <= 1e-9:
            # Root at or behind the origin: the circle passes through the
            # ray origin (the on-arc case was pre-checked) or lies behind.
            continue
        qx, qy = p.x + t * dx, p.y + t * dy
        theta = math.atan2(qy - a.center.y, qx - a.center.x)
        if a.full:
            count += 1
            continue
        off = e._angle_offset(theta)
        if off <= ang_guard or span - ang_guard <= off <= span + ang_guard:
            return None
        if off < span:
            count += 1
    return count


def bbox_of_cycles(cycles: Sequence[Sequence[Edge]]) -> tuple[float, float, float, float]:
    """Conservative bounding box (arcs bounded by their full circles)."""
    x0 = y0 = math.inf
    x1 = y1 = -math.inf
    for cyc in cycles:
        for e in cyc:
            if e.arc is None:
                xs = (e.start.x, e.end.x)
                ys = (e.start.y, e.end.y)
            else:
                c, r = e.arc.center, e.arc.radius
                xs = (c.x - r, c.x + r)
                ys = (c.y - r, c.y + r)
            x0, x1 = min(x0, *xs), max(x1, *xs)
            y0, y1 = min(y0, *ys), max(y1, *ys)
    return (x0, y0, x1, y1)


def bboxes_overlap(a: tuple[float, float, float, float],
                   b: tuple[float, float, float, float],
                   pad: float = 0.0) -> bool:
    return not (a[2] + pad < b[0] or b[2] + pad < a[0]
                or a[3] + pad < b[1] or b[3] + pad < a[1])
