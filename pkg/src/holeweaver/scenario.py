"""Scenario model, seeded generation, and strict JSON serialization.

A scenario is the full problem input: the rectangular or polygonal
environment, the sensor deployment, and the obstacle polygons. Random
generation is fully determined by the seed using the PCG64 generator
(schema version 1 implies this algorithm), so fixtures replay exactly.

The file format is strict: unknown fields are rejected, field order is
fixed, and floats serialize through their shortest round-trip
representation, which makes serialize -> parse -> serialize byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .geom import Disk, Point, SimplePolygon, circle_segment_intersections

SCHEMA_VERSION = 1
RNG_ALGORITHM = "pcg64"  # implied by SCHEMA_VERSION; documented for replays
_MAX_PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class Scenario:
    """One deployment problem: environment, sensors, obstacles, and its seed."""

    roi: SimplePolygon
    sensors: tuple[Disk, ...]
    obstacles: tuple[SimplePolygon, ...]
    seed: int

    def __post_init__(self):
        ids = [s.id for s in self.sensors]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate sensor ids in scenario")
        for s in self.sensors:
            if self.roi.contains(s.center) < 0:
                raise InputError(f"sensor {s.id} center outside the environment")
            for k, o in enumerate(self.obstacles):
                if o.contains(s.center) == 1:
                    raise InputError(f"sensor {s.id} center inside obstacle {k}")

    @property
    def roi_area(self) -> float:
        return self.roi.area

    @property
    def free_area(self) -> float:
        return self.roi.area - sum(o.area for o in self.obstacles)

    def mobiles(self) -> list[Disk]:
        return [s for s in self.sensors if s.mobile]

    def with_sensor_moved(self, sensor_id: int, target: Point) -> "Scenario":
        moved = tuple(
            Disk(s.id, target, s.radius, s.mobile) if s.id == sensor_id else s
            for s in self.sensors)
        return Scenario(self.roi, moved, self.obstacles, self.seed)


def rect_roi(width: float, height: float) -> SimplePolygon:
    return SimplePolygon.from_coords(
        [(0.0, 0.0), (width, 0.0), (width, height), (0.0, height)])


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def generate(n: int, width: float, height: float, r_min: float, r_max: float,
             mobile_fraction: float = 0.0,
             obstacles: Sequence[SimplePolygon] = (),
             seed: int = 0) -> Scenario:
    """Random deployment over a width x height environment.

    Centers are uniform over the environment minus the obstacles (rejection
    sampling), radii uniform in [r_min, r_max], and the first
    floor(mobile_fraction * n) sensors are mobile. Fully determined by seed.
    """
    if n < 0:
        raise InputError("sensor count must be non-negative")
    if not (0.0 < r_min <= r_max):
        raise InputError("need 0 < r_min <= r_max")
    if not (0.0 <= mobile_fraction <= 1.0):
        raise InputError("mobile_fraction must lie in [0, 1]")
    roi = rect_roi(width, height)
    rng = np.random.Generator(np.random.PCG64(seed))
    n_mobile = math.floor(mobile_fraction * n)
    sensors: list[Disk] = []
    for i in range(n):
        for _ in range(_MAX_PLACEMENT_ATTEMPTS):
            x = rng.uniform(0.0, width)
            y = rng.uniform(0.0, height)
            p = Point(float(x), float(y))
            if all(o.contains(p) < 0 for o in obstacles):
                break
        else:
            raise InputError("could not place a sensor outside the obstacles")
        r = float(rng.uniform(r_min, r_max))
        sensors.append(Disk(i + 1, p, r, mobile=i < n_mobile))
    return Scenario(roi, tuple(sensors), tuple(obstacles), seed)


def random_obstacles(width: float, height: float, count: int, seed: int,
                     n_vertices: tuple[int, int] = (3, 6),
                     size: tuple[float, float] = (8.0, 25.0)) -> tuple[SimplePolygon, ...]:
    """Disjoint random convex obstacles inside a width x height environment.

    Test-corpus plumbing: convex star-sampled polygons, re-drawn until they
    fit the environment and stay clear of each other.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out: list[SimplePolygon] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise InputError("could not place disjoint obstacles")
        k = int(rng.integers(n_vertices[0], n_vertices[1] + 1))
        radius = float(rng.uniform(size[0], size[1])) / 2.0
        cx = float(rng.uniform(radius, width - radius))
        cy = float(rng.uniform(radius, height - radius))
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=k))
        if np.min(np.diff(angles, append=angles[0] + 2.0 * math.pi)) < 0.3:
            continue
        radii = rng.uniform(0.5 * radius, radius, size=k)
        coords = [(cx + rr * math.cos(a), cy + rr * math.sin(a))
                  for a, rr in zip(angles, radii)]
        try:
            poly = SimplePolygon.from_coords(coords)
        except InputError:
            continue
        x0, y0, x1, y1 = poly.bbox()
        if x0 < 0.0 or y0 < 0.0 or x1 > width or y1 > height:
            continue
        if any(_bbox_gap(poly.bbox(), other.bbox()) < 2.0 for other in out):
            continue
        out.append(poly)
    return tuple(out)


def _bbox_gap(a, b) -> float:
    dx = max(b[0] - a[2], a[0] - b[2], 0.0)
    dy = max(b[1] - a[3], a[1] - b[3], 0.0)
    return math.hypot(dx, dy)


# ---------------------------------------------------------------------------
# Worst-case stressor
# ---------------------------------------------------------------------------

def lower_bound_stressor(n: int, z: int) -> Scenario:
    """A deployment whose obstacle edges each cross many sensor circles.

    For z >= 4, n disjoint unit circles sit in a row and one comb-shaped
    obstacle with z vertices sweeps back and forth across all of them:
    every tooth edge crosses every circle twice, so the circle/edge
    crossing count is n * z exactly when z is a multiple of 4. For z = 3 a
    flat "tent" triangle over a tight cluster of circles makes all three
    edges cross every circle twice (2 * n * z crossings) while keeping the
    sensor centers outside the obstacle.
    """
    if n < 1:
        raise InputError("stressor needs n >= 1")
    if z < 3:
        raise InputError("an obstacle polygon needs at least 3 vertices")

    if z == 3:
        # Cluster the centers so every tent edge passes within the sensing
        # radius of all of them; the dip margin of the slanted edges is
        # about 6e-3, so the cluster must stay well inside that.
        centers = _cluster_centers(n, 0.002)
        obstacle = SimplePolygon.from_coords([(-4.0, 0.3), (4.0, 0.3), (0.0, 1.01)])
    else:
        centers = [Point(4.0 * i, 0.0) for i in range(n)]
        obstacle = _comb_polygon(centers, z)

    sensors = tuple(Disk(i + 1, c, 1.0) for i, c in enumerate(centers))
    x0, y0, x1, y1 = obstacle.bbox()
    roi = SimplePolygon.from_coords([
        (min(x0, centers[0].x - 1.0) - 2.0, min(y0, -1.0) - 2.0),
        (max(x1, centers[-1].x + 1.0) + 2.0, min(y0, -1.0) - 2.0),
        (max(x1, centers[-1].x + 1.0) + 2.0, max(y1, 1.0) + 2.0),
        (min(x0, centers[0].x - 1.0) - 2.0, max(y1, 1.0) + 2.0),
    ])
    return Scenario(roi, sensors, (obstacle,), seed=0)


def _cluster_centers(n: int, radius: float) -> list[Point]:
    if n == 1:
        return [Point(0.0, 0.0)]
    return [Point(radius * math.cos(2.0 * math.pi * i / n),
                  radius * math.sin(2.0 * math.pi * i / n)) for i in range(n)]


def _comb_polygon(centers: Sequence[Point], z: int) -> SimplePolygon:
    """Comb with z // 4 horizontal teeth spanning the circle row.

    Teeth lie in the band 0.15 <= y <= 0.85, inside every unit circle's
    reach but above every center. Leftover vertices (z mod 4) subdivide the
    vertical spine wall, which crosses nothing, so the crossing count stays
    exactly 4 * teeth * n.
    """
    teeth = z // 4
    xl = centers[0].x - 3.0
    xr = centers[-1].x + 3.0   # free end of the inner teeth
    spine = centers[-1].x + 4.0
    hi, lo = 0.85, 0.15
    step = (hi - lo) / (2 * teeth - 1) if teeth > 1 else (hi - lo)
    tops = [hi - 2 * j * step for j in range(teeth)]
    bots = [t - step for t in tops]

    pts: list[tuple[float, float]] = [(xl, tops[0]), (spine, tops[0])]
    extra = z - 4 * teeth
    for k in range(extra):
        frac = (k + 1) / (extra + 1)
        pts.append((spine, tops[0] + (bots[-1] - tops[0]) * frac))
    pts.append((spine, bots[-1]))
    pts.extend([(xl, bots[-1]), (xl, tops[-1])])
    for j in range(teeth - 1, 0, -1):
        pts.extend([(xr, tops[j]), (xr, bots[j - 1]), (xl, bots[j - 1]), (xl, tops[j - 1])])
    pts.pop()  # the final corner duplicates the start
    return SimplePolygon.from_coords(pts)


def stress_crossings(sc: Scenario) -> int:
    """Raw circle/obstacle-edge crossing count of a stressor scenario."""
    count = 0
    for o in sc.obstacles:
        for a, b in o.edges():
            for s in sc.sensors:
                hits = circle_segment_intersections(s, a, b)
                if hits.kind == "transversal":
                    count += len(hits.points)
    return count


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_json_bytes(sc: Scenario) -> bytes:
    doc = {
        "version": SCHEMA_VERSION,
        "seed": sc.seed,
        "roi": [[p.x, p.y] for p in sc.roi.vertices],
        "obstacles": [[[p.x, p.y] for p in o.vertices] for o in sc.obstacles],
        "sensors": [
            {"id": s.id, "x": s.center.x, "y": s.center.y,
             "r": s.radius, "mobile": s.mobile}
            for s in sc.sensors
        ],
    }
    return (json.dumps(doc, allow_nan=False) + "\n").encode("utf-8")


def _reject_nan(token: str):
    raise InputError(f"non-finite number {token!r} in scenario file")


def from_json_bytes(data: bytes) -> Scenario:
    """Strict parse: schema version 1, exactly the documented fields."""
    try:
        doc = json.loads(data.decode("utf-8"), parse_constant=_reject_nan)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed scenario file: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("scenario file must hold a JSON object")
    expected = {"version", "seed", "roi", "obstacles", "sensors"}
    unknown = set(doc) - expected
    if unknown:
        raise InputError(f"unknown scenario fields: {sorted(unknown)}")
    missing = expected - set(doc)
    if missing:
        raise InputError(f"missing scenario fields: {sorted(missing)}")
    if doc["version"] != SCHEMA_VERSION:
        raise InputError(f"unsupported scenario version {doc['version']!r}")
    seed = doc["seed"]
    if not isinstance(seed, int) or not (0 <= seed < 2 ** 64):
        raise InputError("seed must be an unsigned 64-bit integer")

    roi = _parse_polygon(doc["roi"], "roi")
    if not isinstance(doc["obstacles"], list):
        raise InputError("obstacles must be a list of polygons")
    obstacles = tuple(_parse_polygon(o, f"obstacle {i}")
                      for i, o in enumerate(doc["obstacles"]))
    if not isinstance(doc["sensors"], list):
        raise InputError("sensors must be a list")
    sensors = []
    for i, rec in enumerate(doc["sensors"]):
        if not isinstance(rec, dict) or set(rec) != {"id", "x", "y", "r", "mobile"}:
            raise InputError(f"sensor {i}: expected exactly id/x/y/r/mobile")
        if not isinstance(rec["id"], int) or not (0 <= rec["id"] < 2 ** 32):
            raise InputError(f"sensor {i}: id must be an unsigned 32-bit integer")
        if not isinstance(rec["mobile"], bool):
            raise InputError(f"sensor {i}: mobile must be a boolean")
        sensors.append(Disk(rec["id"],
                            Point(_num(rec["x"], "x"), _num(rec["y"], "y")),
                            _num(rec["r"], "r"), rec["mobile"]))
    return Scenario(roi, tuple(sensors), obstacles, seed)


def _num(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{name} must be a number")
    f = float(v)
    if not math.isfinite(f):
        raise InputError(f"{name} must be finite")
    return f


def _parse_polygon(obj, label: str) -> SimplePolygon:
    if not isinstance(obj, list) or len(obj) < 3:
        raise InputError(f"{label}: polygon needs at least 3 vertex pairs")
    coords = []
    for v in obj:
        if not isinstance(v, list) or len(v) != 2:
            raise InputError(f"{label}: vertices must be [x, y] pairs")
        coords.append((_num(v[0], f"{label}.x"), _num(v[1], f"{label}.y")))
    return SimplePolygon.from_coords(coords)


def save(sc: Scenario, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(to_json_bytes(sc))


def load(path: str) -> Scenario:
    with open(path, "rb") as fh:
        return from_json_bytes(fh.read())
