"""Neighbor structure over sensors under additively weighted distance.

Two sensors are neighbors when their weighted Voronoi cells (distance to a
site is Euclidean distance to its center minus its radius) can touch. The
graph's one load-bearing guarantee is soundness: every sensor pair whose
circles intersect at a point not strictly covered by a third sensor IS an
edge, because such a point is weighted-nearest to both sensors at once.

Two strategies are offered. "bruteforce" returns the complete graph over
non-dominated sensors and is the reference. "exact" keeps the graph
planar-sized by combining (a) the pairs that actually carry candidate
boundary points, found through a spatial grid, with (b) the pairs adjacent
at infinity, which are consecutive arcs on the convex hull of the disks
(the far-field owner along direction u is the disk maximizing
c . u + r). Both strategies produce identical downstream boundary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .geom import EPS, CoverageIndex, Disk, circle_circle_intersections, dist

_HULL_DIRECTIONS = 2048


@dataclass(frozen=True)
class NeighborGraph:
    """Adjacency over sensor ids, plus the set of dominated sensors.

    A sensor is dominated when some other disk contains its whole disk
    (|c_i - c_j| + r_j <= r_i + EPS); its weighted cell is empty and it
    appears in no adjacency pair.
    """

    nodes: tuple[int, ...]
    adjacency: frozenset[tuple[int, int]]
    dominated: frozenset[int]


def dominated_ids(sensors: Sequence[Disk]) -> set[int]:
    """Sensors whose disk lies inside another's (ties go to the lower id)."""
    order = sorted(sensors, key=lambda s: (-s.radius, s.id))
    out: set[int] = set()
    for i, s in enumerate(order):
        for t in order[:i]:
            if t.id in out:
                continue
            if dist(s.center, t.center) + s.radius <= t.radius + EPS:
                out.add(s.id)
                break
    return out


def build_neighbor_graph(sensors: Sequence[Disk], strategy: str = "exact") -> NeighborGraph:
    """Build the neighbor graph over sensors using the given strategy."""
    if not sensors:
        raise InputError("neighbor graph requires at least one sensor")
    ids = [s.id for s in sensors]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate sensor ids")
    if strategy not in ("exact", "bruteforce"):
        raise InputError(f"unknown strategy {strategy!r}")

    dominated = dominated_ids(sensors)
    active = [s for s in sensors if s.id not in dominated]

    if strategy == "bruteforce":
        adjacency = {
            (a.id, b.id)
            for i, a in enumerate(active)
            for b in active[i + 1:]
        }
        adjacency = {tuple(sorted(p)) for p in adjacency}
    else:
        adjacency = _boundary_pairs(active) | _far_field_pairs(active)

    return NeighborGraph(tuple(sorted(ids)),
                         frozenset(adjacency),
                         frozenset(dominated))


def _boundary_pairs(active: Sequence[Disk]) -> set[tuple[int, int]]:
    """Pairs with at least one circle intersection not strictly covered."""
    index = CoverageIndex(active)
    out: set[tuple[int, int]] = set()
    for a, b in index.candidate_pairs():
        hits = circle_circle_intersections(a, b)
        if hits.kind != "transversal":
            continue
        for p in hits.points:
            if not index.strictly_covered(p):
                out.add((min(a.id, b.id), max(a.id, b.id)))
                break
    return out


def _far_field_pairs(active: Sequence[Disk]) -> set[tuple[int, int]]:
    """Disk pairs adjacent on the convex hull of the disks.

    Sampled over a fixed fan of directions; exact ties (collinear equal-radius
    runs) are refined by the perpendicular projection of the centers, which
    is the ordering of the cells at infinity.
    """
    if len(active) < 2:
        return set()
    ids = np.array([s.id for s in active])
    cx = np.array([s.center.x for s in active])
    cy = np.array([s.center.y for s in active])
    r = np.array([s.radius for s in active])
    theta = np.linspace(0.0, 2.0 * math.pi, _HULL_DIRECTIONS, endpoint=False)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    support = np.outer(cos_t, cx) + np.outer(sin_t, cy) + r[None, :]
    best = support.max(axis=1)
    tol = 1e-9 + 1e-12 * np.abs(best)
    owner = support.argmax(axis=1)

    pairs: set[tuple[int, int]] = set()
    is_tie = np.zeros(_HULL_DIRECTIONS, dtype=bool)
    for m in range(_HULL_DIRECTIONS):
        tied = np.nonzero(support[m] >= best[m] - tol[m])[0]
        if tied.size > 1:
            is_tie[m] = True
            perp = -sin_t[m] * cx[tied] + cos_t[m] * cy[tied]
            chain = tied[np.argsort(perp, kind="stable")]
            for u, v in zip(chain, chain[1:]):
                a, b = int(ids[u]), int(ids[v])
                if a != b:
                    pairs.add((min(a, b), max(a, b)))
    for m in range(_HULL_DIRECTIONS):
        m2 = (m + 1) % _HULL_DIRECTIONS
        if is_tie[m] or is_tie[m2]:
            # The tie chain already walked this crossing; a raw transition
            # here would bridge across the cells in the middle of the chain.
            continue
        u, v = owner[m], owner[m2]
        if u != v:
            a, b = int(ids[u]), int(ids[v])
            pairs.add((min(a, b), max(a, b)))
    return pairs
