"""Independent oracles used by the tests.

These never call the package's arc machinery: region areas come from
Monte-Carlo sampling of caller-supplied membership predicates, and the
weighted-Voronoi adjacency check classifies a fine grid by weighted
nearest distance directly.
"""

from __future__ import annotations

import math

import numpy as np


def mc_area(member, bbox, samples=200_000, seed=1234):
    """Monte-Carlo area of {p : member(x, y)} within bbox, with sigma."""
    x0, y0, x1, y1 = bbox
    rng = np.random.Generator(np.random.PCG64(seed))
    xs = rng.uniform(x0, x1, samples)
    ys = rng.uniform(y0, y1, samples)
    hits = member(xs, ys)
    p = np.count_nonzero(hits) / samples
    box = (x1 - x0) * (y1 - y0)
    sigma = math.sqrt(max(p * (1 - p), 0.0) / samples) * box
    return p * box, sigma


def grid_weighted_adjacency(disks, spacing=0.01, pad=3.0):
    """Weighted-Voronoi adjacency by labeling a fine grid.

    Labels every grid node with its weighted-nearest disk (Euclidean
    distance to center minus radius; ties to the lower id) and reports the
    id pairs that meet at 4-neighboring nodes.
    """
    cx = np.array([d.center.x for d in disks])
    cy = np.array([d.center.y for d in disks])
    r = np.array([d.radius for d in disks])
    ids = [d.id for d in disks]
    x0, x1 = cx.min() - r.max() - pad, cx.max() + r.max() + pad
    y0, y1 = cy.min() - r.max() - pad, cy.max() + r.max() + pad
    xs = np.arange(x0, x1 + spacing, spacing)
    ys = np.arange(y0, y1 + spacing, spacing)
    gx, gy = np.meshgrid(xs, ys)
    dist = np.sqrt((gx[..., None] - cx) ** 2 + (gy[..., None] - cy) ** 2) - r
    label = dist.argmin(axis=-1)
    pairs = set()
    for a, b in ((label[:, :-1], label[:, 1:]), (label[:-1, :], label[1:, :])):
        diff = a != b
        for u, v in zip(a[diff].ravel(), b[diff].ravel()):
            i, j = ids[u], ids[v]
            if i != j:
                pairs.add((min(i, j), max(i, j)))
    return pairs


def uncovered_in_roi_member(scenario):
    """Vectorized membership of the hole region of a scenario (closed
    disks, obstacles excluded), for use with mc_area."""
    cx = np.array([s.center.x for s in scenario.sensors])
    cy = np.array([s.center.y for s in scenario.sensors])
    r2 = np.array([s.radius ** 2 for s in scenario.sensors])

    def member(xs, ys):
        if len(cx):
            cov = ((xs[:, None] - cx) ** 2 + (ys[:, None] - cy) ** 2 <= r2).any(axis=1)
        else:
            cov = np.zeros(len(xs), dtype=bool)
        inside = in_roi_mask(scenario, xs, ys)
        for o in scenario.obstacles:
            inside &= ~polygon_mask(o, xs, ys)
        return inside & ~cov

    return member


def in_roi_mask(scenario, xs, ys):
    return polygon_mask(scenario.roi, xs, ys)


def polygon_mask(poly, xs, ys):
    inside = np.zeros(len(xs), dtype=bool)
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        crosses = (a.y > ys) != (b.y > ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            xin = a.x + (ys - a.y) * (b.x - a.x) / (b.y - a.y)
        inside ^= crosses & (xs < xin)
    return inside
