"""Independent ground truth for the analytic pipeline.

mc_coverage classifies seeded uniform samples with its own vectorized
point-in-disk and point-in-polygon tests (no shared code with the arc
machinery), giving coverage fractions with standard errors.
exhaustive_optimal_healing brute-forces every injective mobile-to-site
assignment on small instances; the search is the oracle, while areas are
measured with the same region algebra the planner uses, so the two sides
answer exactly the same question.

Sample classification runs in fixed-size chunks whose integer tallies are
summed in index order, so results are bit-identical for a given seed no
matter how many worker threads HOLEWEAVER_THREADS allows.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, LimitError
from .geom import Disk, EdgeSource, Point, SimplePolygon, cycle_area
from .regions import Hole, clip_cycles, holes_area
from .scenario import Scenario

_CHUNK = 65536


def effective_threads() -> int:
    """Worker cap from HOLEWEAVER_THREADS (default 1, clamped to the CPUs)."""
    raw = os.environ.get("HOLEWEAVER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"HOLEWEAVER_THREADS must be an integer, got {raw!r}")
    return max(1, min(n, os.cpu_count() or 1))


@dataclass(frozen=True)
class CoverageEstimate:
    """Monte-Carlo region fractions over the environment.

    The four disjoint classes (covered outside obstacles, covered inside
    obstacles, holes, uncovered obstacle area) sum to one exactly;
    covered_fraction is the first two combined. Standard errors are the
    binomial sqrt(p (1 - p) / n) per fraction.
    """

    covered_fraction: float
    hole_fraction: float
    obstacle_uncovered_fraction: float
    covered_obstacle_fraction: float
    samples: int
    seed: int
    std_error: dict[str, float]

    def as_dict(self) -> dict:
        return {
            "covered_fraction": self.covered_fraction,
            "hole_fraction": self.hole_fraction,
            "obstacle_uncovered_fraction": self.obstacle_uncovered_fraction,
            "covered_obstacle_fraction": self.covered_obstacle_fraction,
            "samples": self.samples,
            "seed": self.seed,
            "std_error": dict(sorted(self.std_error.items())),
        }


def mc_coverage(sc: Scenario, samples: int = 1_000_000, seed: int = 0) -> CoverageEstimate:
    """Classify seeded uniform samples over the environment.

    Coverage uses closed disks (hole boundaries have measure zero, and the
    closed convention matches boundary-point semantics). Deterministic for
    a given seed.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    xs, ys = _sample_in_roi(rng, sc.roi, samples)

    cx = np.array([s.center.x for s in sc.sensors])
    cy = np.array([s.center.y for s in sc.sensors])
    r2 = np.array([s.radius * s.radius for s in sc.sensors])
    buckets = _sensor_buckets(sc.sensors)

    chunks = [(i, min(i + _CHUNK, samples)) for i in range(0, samples, _CHUNK)]

    def classify(bounds: tuple[int, int]) -> tuple[int, int, int]:
        lo, hi = bounds
        px, py = xs[lo:hi], ys[lo:hi]
        if len(cx):
            cov = _covered_mask(px, py, cx, cy, r2, buckets)
        else:
            cov = np.zeros(hi - lo, dtype=bool)
        obst = np.zeros(hi - lo, dtype=bool)
        for poly in sc.obstacles:
            obst |= _in_polygon_mask(px, py, poly)
        n_cov = int(np.count_nonzero(cov))
        n_cov_obst = int(np.count_nonzero(cov & obst))
        n_obst_uncov = int(np.count_nonzero(obst & ~cov))
        return (n_cov, n_cov_obst, n_obst_uncov)

    workers = effective_threads()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(classify, chunks))
    else:
        tallies = [classify(b) for b in chunks]

    n_cov = sum(t[0] for t in tallies)
    n_cov_obst = sum(t[1] for t in tallies)
    n_obst_uncov = sum(t[2] for t in tallies)
    n_hole = samples - n_cov - n_obst_uncov

    def frac(k: int) -> float:
        return k / samples

    def se(p: float) -> float:
        return math.sqrt(max(p * (1.0 - p), 0.0) / samples)

    fractions = {
        "covered": frac(n_cov),
        "hole": frac(n_hole),
        "obstacle_uncovered": frac(n_obst_uncov),
        "covered_obstacle": frac(n_cov_obst),
    }
    return CoverageEstimate(
        covered_fraction=fractions["covered"],
        hole_fraction=fractions["hole"],
        obstacle_uncovered_fraction=fractions["obstacle_uncovered"],
        covered_obstacle_fraction=fractions["covered_obstacle"],
        samples=samples,
        seed=seed,
        std_error={k: se(v) for k, v in fractions.items()},
    )


def _sample_in_roi(rng: np.random.Generator, roi: SimplePolygon,
                   samples: int) -> tuple[np.ndarray, np.ndarray]:
    x0, y0, x1, y1 = roi.bbox()
    rect_area = (x1 - x0) * (y1 - y0)
    rectangular = abs(roi.area - rect_area) <= 1e-9 * rect_area
    xs = np.empty(samples)
    ys = np.empty(samples)
    filled = 0
    while filled < samples:
        need = samples - filled
        draw = need if rectangular else int(need * 1.6) + 16
        px = rng.uniform(x0, x1, size=draw)
        py = rng.uniform(y0, y1, size=draw)
        if rectangular:
            xs[filled:filled + need] = px
            ys[filled:filled + need] = py
            filled = samples
            break
        keep = _in_polygon_mask(px, py, roi)
        kx, ky = px[keep], py[keep]
        take = min(len(kx), need)
        xs[filled:filled + take] = kx[:take]
        ys[filled:filled + take] = ky[:take]
        filled += take
    return xs, ys


_CELL_OFF = 1 << 20
_CELL_MOD = 1 << 21


def _sensor_buckets(sensors) -> tuple[float, dict[int, np.ndarray]]:
    """Grid of sensor indices keyed by cell, for local coverage tests."""
    r_max = max((s.radius for s in sensors), default=1.0)
    cell = max(r_max, 1e-6)
    table: dict[int, list[int]] = {}
    for i, s in enumerate(sensors):
        x0, y0, x1, y1 = s.bbox()
        for ix in range(math.floor(x0 / cell), math.floor(x1 / cell) + 1):
            for iy in range(math.floor(y0 / cell), math.floor(y1 / cell) + 1):
                table.setdefault((ix + _CELL_OFF) * _CELL_MOD + iy + _CELL_OFF,
                                 []).append(i)
    return cell, {k: np.array(v) for k, v in table.items()}


def _covered_mask(px: np.ndarray, py: np.ndarray, cx: np.ndarray,
                  cy: np.ndarray, r2: np.ndarray,
                  buckets: tuple[float, dict[int, np.ndarray]]) -> np.ndarray:
    """Coverage of sample points, testing only sensors near each grid cell."""
    cell, table = buckets
    out = np.zeros(len(px), dtype=bool)
    key = ((np.floor(px / cell).astype(np.int64) + _CELL_OFF) * _CELL_MOD
           + np.floor(py / cell).astype(np.int64) + _CELL_OFF)
    order = np.argsort(key, kind="stable")
    sk = key[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    bounds = np.r_[starts, len(sk)]
    for a, b in zip(bounds[:-1], bounds[1:]):
        sens = table.get(int(sk[a]))
        if sens is None:
            continue
        idxs = order[a:b]
        dx = px[idxs, None] - cx[sens]
        dy = py[idxs, None] - cy[sens]
        out[idxs] = (dx * dx + dy * dy <= r2[sens]).any(axis=1)
    return out


def _in_polygon_mask(px: np.ndarray, py: np.ndarray,
                     poly: SimplePolygon) -> np.ndarray:
    inside = np.zeros(len(px), dtype=bool)
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        crosses = (a.y > py) != (b.y > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xin = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y)
        inside ^= crosses & (px < xin)
    return inside


# ---------------------------------------------------------------------------
# Exhaustive healing
# ---------------------------------------------------------------------------

_MAX_MOBILES = 3
_MAX_SITES = 50


@dataclass(frozen=True)
class ExhaustiveHealing:
    """Best coverage over all injective mobile-to-site assignments."""

    coverage: float
    assignment: dict[int, Point | None]   # sensor id -> target (None = stay)
    evaluations: int


def exhaustive_optimal_healing(sc: Scenario, mobile_ids: Sequence[int],
                               sites: Sequence[Point],
                               base_holes: Sequence[Hole] | None = None) -> ExhaustiveHealing:
    """Maximum covered free-space area over all placements of the mobiles.

    Every injective assignment of mobiles to candidate sites (each mobile
    may also stay in place) is scored through inclusion-exclusion of the
    per-disk hole overlaps, so the enumeration is exact yet cheap. Refuses
    instances beyond 3 mobiles or 50 sites to keep the search bounded.
    """
    if len(mobile_ids) > _MAX_MOBILES:
        raise LimitError(f"exhaustive healing is limited to {_MAX_MOBILES} mobiles")
    if len(sites) > _MAX_SITES:
        raise LimitError(f"exhaustive healing is limited to {_MAX_SITES} sites")
    by_id = {s.id: s for s in sc.sensors}
    mobiles = [by_id[i] for i in mobile_ids]

    if base_holes is None:
        from .detect import find_holes  # deferred: detect imports regions too
        others = [s for s in sc.sensors if s.id not in set(mobile_ids)]
        base_holes = find_holes(others, sc.roi, sc.obstacles)
    base_cycles = [cyc for h in base_holes for cyc in h.cycles()]
    base_hole_area = holes_area(base_holes)
    free = sc.free_area

    # Placement lists: index 0 is "stay"; the rest are the shared sites.
    placements: list[list[Point]] = [[m.center] + list(sites) for m in mobiles]

    def disk_clip(m: Disk, p: Point) -> list:
        return clip_cycles(base_cycles, circle=(p, m.radius), op="intersection",
                           tool_source=lambda _i: EdgeSource("sensor", m.id))

    # Single-disk hole overlaps u[i][k], pairwise and triple corrections.
    u: list[list[float]] = []
    clipped: list[list[list]] = []
    for mi, m in enumerate(mobiles):
        row_area, row_cycles = [], []
        for p in placements[mi]:
            cyc = disk_clip(m, p)
            row_cycles.append(cyc)
            row_area.append(_cycles_area(cyc))
        u.append(row_area)
        clipped.append(row_cycles)

    def pair_area(mi: int, ki: int, mj: int, kj: int) -> float:
        if u[mi][ki] <= 0.0 or u[mj][kj] <= 0.0:
            return 0.0
        a, b = mobiles[mi], mobiles[mj]
        pa, pb = placements[mi][ki], placements[mj][kj]
        gap = math.hypot(pa.x - pb.x, pa.y - pb.y)
        if gap >= a.radius + b.radius:
            return 0.0
        cyc = clip_cycles(clipped[mi][ki], circle=(pb, b.radius), op="intersection",
                          tool_source=lambda _i: EdgeSource("sensor", b.id))
        return _cycles_area(cyc)

    pair_cache: dict[tuple[int, int, int, int], float] = {}

    def pair(mi: int, ki: int, mj: int, kj: int) -> float:
        key = (mi, ki, mj, kj)
        if key not in pair_cache:
            pair_cache[key] = pair_area(mi, ki, mj, kj)
        return pair_cache[key]

    def triple(k0: int, k1: int, k2: int) -> float:
        if min(u[0][k0], u[1][k1], u[2][k2]) <= 0.0:
            return 0.0
        cyc = clip_cycles(clipped[0][k0], circle=(placements[1][k1], mobiles[1].radius),
                          op="intersection",
                          tool_source=lambda _i: EdgeSource("sensor", mobiles[1].id))
        if not cyc:
            return 0.0
        cyc = clip_cycles(cyc, circle=(placements[2][k2], mobiles[2].radius),
                          op="intersection",
                          tool_source=lambda _i: EdgeSource("sensor", mobiles[2].id))
        return _cycles_area(cyc)

    best = -math.inf
    best_assign: dict[int, Point | None] = {}
    evaluations = 0
    m = len(mobiles)
    index_ranges = [range(len(p)) for p in placements]
    for combo in itertools.product(*index_ranges):
        # Injectivity over shared sites (staying home never conflicts).
        taken = [k for k in combo if k > 0]
        if len(taken) != len(set(taken)):
            continue
        evaluations += 1
        removed = sum(u[mi][k] for mi, k in enumerate(combo))
        for mi in range(m):
            for mj in range(mi + 1, m):
                removed -= pair(mi, combo[mi], mj, combo[mj])
        if m == 3:
            removed += triple(combo[0], combo[1], combo[2])
        coverage = free - (base_hole_area - removed)
        if coverage > best + 1e-12:
            best = coverage
            best_assign = {
                mob.id: (None if k == 0 else placements[mi][k])
                for mi, (mob, k) in enumerate(zip(mobiles, combo))
            }
    return ExhaustiveHealing(best, best_assign, evaluations)


def _cycles_area(cycles) -> float:
    return sum(cycle_area(c) for c in cycles)
