"""Stitching boundary edges into cycles, grouping cycles into holes, and
clipping arc-bounded regions against polygons and disks.

A *region* here is a list of closed edge cycles with interiors on the left:
counter-clockwise outer cycles and clockwise inner cycles (islands). The
same stitcher serves initial hole extraction, obstacle subtraction, and the
disk intersections used by healing-gain evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import StructureError
from .geom import (AREA_DUST, EPS, Arc, Disk, Edge, EdgeSource, Point,
                   PointMerger, SimplePolygon, bbox_of_cycles, bboxes_overlap,
                   circle_circle_intersections, circle_segment_intersections,
                   cycle_area, point_in_cycles, pts_close,
                   segments_properly_cross)

Cycle = list[Edge]


# ---------------------------------------------------------------------------
# Stitching
# ---------------------------------------------------------------------------

def stitch_cycles(edges: Sequence[Edge]) -> list[Cycle]:
    """Partition directed boundary edges into closed cycles.

    Endpoints are snapped within EPS and matched up. Where more than one
    edge pair meets at a junction, the successor of an incoming edge is the
    outgoing edge reached first when sweeping clockwise from the reversed
    arrival direction; that choice keeps the bounded region on a consistent
    (left) side through the junction. Tangent-direction ties are broken by
    signed curvature, which orders edges by their second-order bending.

    Raises StructureError for dangling endpoints or unbalanced junctions,
    naming the offending location. Every edge is used exactly once.
    """
    full = [e for e in edges if e.is_full_circle]
    rest = [e for e in edges if not e.is_full_circle]

    merger = PointMerger()
    snapped: list[Edge] = []
    for e in sorted(rest, key=_edge_sort_key):
        s = merger.canonical(e.start)
        t = merger.canonical(e.end)
        if pts_close(s, t):
            # Collapsed under snapping: drop debris (a sliver arc would
            # otherwise read as a full loop). Both ends land on one node,
            # so junction balance is preserved. Genuine self-loop arcs
            # (full-sweep wraps) pass through.
            if e.arc is None or abs(e.sweep()) < 1.0:
                continue
        snapped.append(Edge(s, t, e.arc, e.source))

    outgoing: dict[Point, list[Edge]] = {}
    incoming: dict[Point, list[Edge]] = {}
    for e in snapped:
        outgoing.setdefault(e.start, []).append(e)
        incoming.setdefault(e.end, []).append(e)

    successor: dict[int, Edge] = {}
    for node in outgoing.keys() | incoming.keys():
        outs = outgoing.get(node, [])
        ins = incoming.get(node, [])
        if len(outs) != len(ins) or not outs:
            raise StructureError(
                f"dangling endpoint at ({node.x:.9f}, {node.y:.9f}): "
                f"{len(ins)} incoming vs {len(outs)} outgoing edges")
        if len(outs) == 1:
            successor[id(ins[0])] = outs[0]
            continue
        ends: list[tuple[float, float, int, Edge]] = []
        for f in outs:
            tx, ty = f.tangent_at_start()
            ends.append((math.atan2(ty, tx), f.curvature(), 0, f))
        for e in ins:
            tx, ty = e.tangent_at_end()
            ends.append((math.atan2(-ty, -tx), -e.curvature(), 1, e))
        ends.sort(key=lambda item: (item[0], item[1], item[2]))
        n = len(ends)
        for idx, (_, _, kind, e) in enumerate(ends):
            if kind != 1:
                continue
            _, _, succ_kind, f = ends[(idx - 1) % n]
            if succ_kind != 0:
                raise StructureError(
                    f"inconsistent junction at ({node.x:.9f}, {node.y:.9f})")
            successor[id(e)] = f

    cycles: list[Cycle] = []
    visited: set[int] = set()
    for e in snapped:
        if id(e) in visited:
            continue
        cyc: Cycle = []
        cur = e
        while id(cur) not in visited:
            visited.add(id(cur))
            cyc.append(cur)
            cur = successor[id(cur)]
        if cur is not e:
            raise StructureError("edge pairing did not close a cycle")
        cycles.append(_rotate_canonical(cyc))
    cycles.extend([f] for f in sorted(full, key=_edge_sort_key))
    cycles.sort(key=lambda c: _edge_sort_key(c[0]))
    return cycles


def _edge_sort_key(e: Edge):
    if e.is_full_circle:
        a = e.arc
        return (a.center.x - a.radius, a.center.y, 0.0, 0.0, e.source.kind,
                e.source.owner, e.source.edge)
    tx, ty = e.tangent_at_start()
    return (e.start.x, e.start.y, math.atan2(ty, tx), e.curvature(),
            e.source.kind, e.source.owner, e.source.edge)


def _rotate_canonical(cyc: Cycle) -> Cycle:
    k = min(range(len(cyc)), key=lambda i: _edge_sort_key(cyc[i]))
    return cyc[k:] + cyc[:k]


# ---------------------------------------------------------------------------
# Holes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hole:
    """A maximal connected uncovered region.

    outer runs counter-clockwise; each inner cycle bounds a covered (or
    excluded) island clockwise. A hole is "open" when any bounding edge
    comes from the environment boundary or an obstacle, else "closed".
    """

    outer: tuple[Edge, ...]
    inner: tuple[tuple[Edge, ...], ...]
    area: float
    kind: str

    def cycles(self) -> list[Cycle]:
        return [list(self.outer)] + [list(c) for c in self.inner]

    def bbox(self) -> tuple[float, float, float, float]:
        return bbox_of_cycles([list(self.outer)])


def group_cycles_into_holes(cycles: Sequence[Cycle]) -> list[Hole]:
    """Assign inner (clockwise) cycles to their enclosing outer cycles.

    Each negative-area cycle is attached to the smallest positive-area cycle
    containing it; every positive cycle founds one hole. Zero-area debris is
    dropped.
    """
    outers: list[tuple[float, Cycle]] = []
    inners: list[tuple[float, Cycle]] = []
    for cyc in cycles:
        a = cycle_area(cyc)
        if abs(a) <= AREA_DUST:
            continue
        (outers if a > 0.0 else inners).append((a, cyc))
    outers.sort(key=lambda item: item[0])  # smallest first: innermost parent wins

    children: dict[int, list[tuple[float, Cycle]]] = {i: [] for i in range(len(outers))}
    for a, cyc in inners:
        parent = None
        for idx, (_, outer) in enumerate(outers):
            if _cycle_inside_cycle(cyc, outer):
                parent = idx
                break
        if parent is None:
            raise StructureError("inner boundary without an enclosing outer cycle")
        children[parent].append((a, cyc))

    holes: list[Hole] = []
    for idx, (outer_area, outer) in enumerate(outers):
        inner_cycles = [cyc for _, cyc in children[idx]]
        area = outer_area + sum(a for a, _ in children[idx])
        if area <= 0.0:
            raise StructureError("hole with non-positive net area")
        sources = [e.source.kind for e in outer]
        for cyc in inner_cycles:
            sources.extend(e.source.kind for e in cyc)
        kind = "closed" if all(k == "sensor" for k in sources) else "open"
        holes.append(Hole(tuple(outer), tuple(tuple(c) for c in inner_cycles),
                          area, kind))
    holes.sort(key=lambda h: _edge_sort_key(h.outer[0]))
    return holes


def _cycle_inside_cycle(inner: Cycle, outer: Cycle) -> bool:
    for e in inner:
        side = point_in_cycles(e.midpoint(), [outer])
        if side != 0:
            return side == 1
    # Every probe landed on the outer boundary: treat as not contained.
    return False


def holes_area(holes: Sequence[Hole]) -> float:
    return sum(h.area for h in holes)


# ---------------------------------------------------------------------------
# Clipping
# ---------------------------------------------------------------------------

_OFFSETS = (1e-7, 1e-6, 1e-5)


def clip_cycles(cycles: Sequence[Cycle],
                *,
                polygon: SimplePolygon | None = None,
                circle: tuple[Point, float] | None = None,
                op: str,
                tool_source: Callable[[int], EdgeSource]) -> list[Cycle]:
    """Boolean of an arc-bounded region against a polygon or a disk.

    op "difference" removes the tool's interior from the region; op
    "intersection" keeps only the part inside the tool. Region edges are
    split at transversal crossings with the tool boundary and kept or
    dropped by a midpoint membership test; tool-boundary fragments running
    through the region's interior become new edges, oriented so the result
    stays on their left. The pieces are then re-stitched into cycles.

    Tangential contacts are ignored (zero width). Fragments whose midpoint
    falls exactly on the other boundary are resolved by probing just inside
    the result region; coincident duplicates arising from overlapping
    boundaries collapse to the region-sourced copy.
    """
    if op not in ("difference", "intersection"):
        raise ValueError(f"unknown clip op {op!r}")
    if (polygon is None) == (circle is None):
        raise ValueError("exactly one of polygon/circle must be given")

    if polygon is not None:
        tool_member = polygon.contains
        base_tool_edges = [
            Edge(a, b, None, tool_source(i))
            for i, (a, b) in enumerate(polygon.edges())
        ]
    else:
        center, radius = circle
        probe_disk = Disk(-1, center, radius)
        tool_member = probe_disk.contains
        base_tool_edges = [
            Edge(Point(center.x + radius, center.y),
                 Point(center.x + radius, center.y),
                 Arc(center, radius, ccw=True, full=True), tool_source(0))
        ]
    if op == "difference":
        base_tool_edges = [e.reversed() for e in base_tool_edges]

    merger = PointMerger()
    region_splits: dict[int, list[Point]] = {}
    tool_splits: dict[int, list[Point]] = {}

    region_edges: list[Edge] = [e for cyc in cycles for e in cyc]
    for ri, re in enumerate(region_edges):
        for ti, te in enumerate(base_tool_edges):
            for p in _edge_edge_crossings(re, te):
                cp = merger.canonical(p)
                region_splits.setdefault(ri, []).append(cp)
                tool_splits.setdefault(ti, []).append(cp)
        if polygon is not None:
            # Polygon corners resting exactly on a region edge still split it.
            for v in polygon.vertices:
                if re.contains_point(v, EPS):
                    region_splits.setdefault(ri, []).append(merger.canonical(v))

    kept: list[Edge] = []
    want_inside_tool = (op == "intersection")

    # Classification is per fragment even without splits: when tool and
    # region share boundary stretches, edges of one crossing-free cycle can
    # land on different sides of the tool.
    for ri, e in enumerate(region_edges):
        for frag in e.split_at(region_splits.get(ri, [])):
            if _keep_region_fragment(frag, tool_member, want_inside_tool):
                kept.append(frag)

    for ti, te in enumerate(base_tool_edges):
        for frag in te.split_at(tool_splits.get(ti, [])):
            if _keep_tool_fragment(frag, cycles):
                kept.append(frag)

    kept = _drop_coincident_duplicates(kept)
    if not kept:
        return []
    return stitch_cycles(kept)


def _edge_edge_crossings(re: Edge, te: Edge) -> list[Point]:
    """Transversal crossing points of a region edge and a tool edge."""
    out: list[Point] = []
    if re.arc is None and te.arc is None:
        if segments_properly_cross(re.start, re.end, te.start, te.end):
            out.append(_seg_seg_point(re.start, re.end, te.start, te.end))
        else:
            # T-contacts create junctions worth splitting at; the edge that
            # already ends there ignores the point via its endpoint guard.
            for p in (te.start, te.end):
                if re.contains_point(p, EPS) and not (
                        pts_close(p, re.start) or pts_close(p, re.end)):
                    out.append(p)
            for p in (re.start, re.end):
                if te.contains_point(p, EPS) and not (
                        pts_close(p, te.start) or pts_close(p, te.end)):
                    out.append(p)
        return out
    if re.arc is not None and te.arc is not None:
        hits = circle_circle_intersections(
            Disk(-2, re.arc.center, re.arc.radius),
            Disk(-3, te.arc.center, te.arc.radius))
        if hits.kind != "transversal":
            return out
        for p in hits.points:
            if re.contains_point(p, EPS) and te.contains_point(p, EPS):
                out.append(p)
        return out
    arc_edge, seg_edge = (re, te) if re.arc is not None else (te, re)
    hits = circle_segment_intersections(
        Disk(-2, arc_edge.arc.center, arc_edge.arc.radius),
        seg_edge.start, seg_edge.end)
    if hits.kind != "transversal":
        return out
    for p in hits.points:
        if arc_edge.contains_point(p, EPS):
            out.append(p)
    return out


def _seg_seg_point(a1: Point, a2: Point, b1: Point, b2: Point) -> Point:
    d1x, d1y = a2.x - a1.x, a2.y - a1.y
    d2x, d2y = b2.x - b1.x, b2.y - b1.y
    det = d1x * d2y - d1y * d2x
    t = ((b1.x - a1.x) * d2y - (b1.y - a1.y) * d2x) / det
    return Point(a1.x + t * d1x, a1.y + t * d1y)


def _offset_left(e: Edge, delta: float) -> Point:
    m = e.midpoint()
    tx, ty = e.tangent_at_mid()
    return Point(m.x - ty * delta, m.y + tx * delta)


def _keep_region_fragment(frag: Edge, tool_member, want_inside: bool) -> bool:
    side = tool_member(frag.midpoint())
    if side == 0:
        # Midpoint rides the tool boundary: probe just inside the region,
        # which is the side the result would keep this fragment for.
        for delta in _OFFSETS:
            side = tool_member(_offset_left(frag, delta))
            if side != 0:
                break
        else:
            return False
    return (side == 1) == want_inside


def _keep_tool_fragment(frag: Edge, cycles: Sequence[Cycle]) -> bool:
    side = point_in_cycles(frag.midpoint(), cycles)
    if side == 0:
        for delta in _OFFSETS:
            side = point_in_cycles(_offset_left(frag, delta), cycles)
            if side != 0:
                break
        else:
            return False
    return side == 1


def _geom_key(e: Edge):
    def q(v: float) -> int:
        return round(v / (10.0 * EPS))
    if e.arc is None:
        return (q(e.start.x), q(e.start.y), q(e.end.x), q(e.end.y), "seg")
    a = e.arc
    return (q(e.start.x), q(e.start.y), q(e.end.x), q(e.end.y),
            "arc", q(a.center.x), q(a.center.y), q(a.radius), a.ccw, a.full)


def _drop_coincident_duplicates(edges: list[Edge]) -> list[Edge]:
    seen: dict[tuple, Edge] = {}
    for e in edges:
        key = _geom_key(e)
        if key in seen:
            # Prefer the region-sourced copy over a tool duplicate.
            if seen[key].source.kind == "obstacle" and e.source.kind != "obstacle":
                seen[key] = e
            continue
        seen[key] = e
    return list(seen.values())


# ---------------------------------------------------------------------------
# Obstacle subtraction
# ---------------------------------------------------------------------------

def subtract_obstacle(holes: Sequence[Hole], obstacle: SimplePolygon,
                      obstacle_index: int = 0) -> list[Hole]:
    """Remove an obstacle's interior from every hole it touches.

    A hole may shrink, split into several holes, gain an inner boundary, or
    vanish; new edges carry the obstacle's index and edge indices. Holes the
    obstacle cannot touch (disjoint bounding boxes) pass through unchanged.
    """
    obox = obstacle.bbox()
    out: list[Hole] = []
    for hole in holes:
        if not bboxes_overlap(bbox_of_cycles(hole.cycles()), obox, pad=EPS):
            out.append(hole)
            continue
        new_cycles = clip_cycles(
            hole.cycles(), polygon=obstacle, op="difference",
            tool_source=lambda ei: EdgeSource("obstacle", obstacle_index, ei))
        out.extend(group_cycles_into_holes(new_cycles))
    out.sort(key=lambda h: _edge_sort_key(h.outer[0]))
    return out
