import math

import pytest

import holeweaver as hw
from holeweaver.detect import collect_boundary_points, find_holes, uncovered_arcs
from holeweaver.geom import Disk, Point, SimplePolygon, dist
from helpers import mc_area, uncovered_in_roi_member

Y_LENS = math.sqrt(3) / 2


def disk(i, x, y, r, mobile=False):
    return Disk(i, Point(x, y), r, mobile)


def big_roi():
    return hw.rect_roi(100, 100)


def shifted(sensors, dx=50, dy=50):
    return [Disk(s.id, Point(s.center.x + dx, s.center.y + dy), s.radius, s.mobile)
            for s in sensors]


def lens_pair():
    return shifted([disk(1, 0, 0, 1), disk(2, 1, 0, 1)])


def lens_points(bps):
    return sorted(
        (round(bp.location.x - 50, 6), round(bp.location.y - 50, 6))
        for bp in bps
        if all(src.kind == "sensor" for src in bp.sources))


# -- boundary points ---------------------------------------------------------

def test_lens_points_reported_when_uncovered():
    sensors = lens_pair()
    g = hw.build_neighbor_graph(sensors, "exact")
    bps = collect_boundary_points(sensors, big_roi(), g)
    assert lens_points(bps) == [(0.5, -round(Y_LENS, 6)), (0.5, round(Y_LENS, 6))]
    for bp in bps:
        assert len(bp.sources) >= 2


def test_third_sensor_covering_a_lens_point_excludes_it():
    # The third disk strictly covers the upper intersection point.
    sensors = lens_pair() + shifted([disk(3, 0.5, 0.9, 0.3)])
    assert dist(Point(50.5, 50.9), Point(50.5, 50 + Y_LENS)) < 0.3
    g = hw.build_neighbor_graph(sensors, "exact")
    bps = collect_boundary_points(sensors, big_roi(), g)
    pts = lens_points(bps)
    assert (0.5, round(Y_LENS, 6)) not in pts
    assert (0.5, -round(Y_LENS, 6)) in pts


def test_lens_point_on_third_circle_is_retained():
    # The third circle passes exactly through the upper lens point: it is a
    # weighted-Voronoi vertex, on the boundary of all three disks.
    sensors = lens_pair() + shifted([disk(3, 0.5, Y_LENS + 1.0, 1.0)])
    g = hw.build_neighbor_graph(sensors, "exact")
    bps = collect_boundary_points(sensors, big_roi(), g)
    assert (0.5, round(Y_LENS, 6)) in lens_points(bps)
    vertex = [bp for bp in bps
              if abs(bp.location.x - 50.5) < 1e-6
              and abs(bp.location.y - (50 + Y_LENS)) < 1e-6]
    assert len(vertex) == 1
    owners = {src.owner for src in vertex[0].sources}
    assert owners == {1, 2, 3}


def test_roi_crossings_and_vertices_are_boundary_points():
    sensors = [disk(1, 0, 0, 5)]  # quarter disk at the corner
    g = hw.build_neighbor_graph(sensors, "exact")
    bps = collect_boundary_points(sensors, hw.rect_roi(20, 20), g)
    locs = sorted((round(p.location.x, 9), round(p.location.y, 9)) for p in bps)
    # Circle cuts both axes at 5; three uncovered corners; corner (0,0) is covered.
    assert (0.0, 5.0) in locs and (5.0, 0.0) in locs
    assert (20.0, 0.0) in locs and (0.0, 20.0) in locs and (20.0, 20.0) in locs
    assert (0.0, 0.0) not in locs


# -- arc marching ------------------------------------------------------------

def test_isolated_sensor_emits_full_circle():
    sensors = shifted([disk(1, 0, 0, 1)])
    arcs = uncovered_arcs(sensors[0], [], sensors, big_roi())
    assert len(arcs) == 1
    assert arcs[0].is_full_circle
    assert not arcs[0].arc.ccw  # hole on the left means clockwise marching


def test_lens_emits_major_arcs_only():
    sensors = lens_pair()
    g = hw.build_neighbor_graph(sensors, "exact")
    bps = collect_boundary_points(sensors, big_roi(), g)
    for s in sensors:
        mine = [bp for bp in bps
                if any(src.kind == "sensor" and src.owner == s.id
                       for src in bp.sources)]
        arcs = uncovered_arcs(s, mine, sensors, big_roi())
        assert len(arcs) == 1
        # Major arc: midpoint faces away from the other sensor.
        sweep = abs(arcs[0].sweep())
        assert sweep == pytest.approx(2 * math.pi - 2 * math.pi / 3, abs=1e-9)
        mid = arcs[0].midpoint()
        other = sensors[0] if s.id == 2 else sensors[1]
        assert dist(mid, other.center) > other.radius


def test_dominated_sensor_emits_nothing():
    inner = disk(2, 50.2, 50, 0.5)
    sensors = [disk(1, 50, 50, 5), inner]
    arcs = uncovered_arcs(inner, [], sensors, big_roi())
    assert arcs == []


def test_covering_sensor_outside_roi_reach_emits_nothing():
    # Disk covers the whole environment: its circle lies outside.
    sensors = [disk(1, 10, 10, 100)]
    arcs = uncovered_arcs(sensors[0], [], sensors, hw.rect_roi(20, 20))
    assert arcs == []


# -- full pipeline -----------------------------------------------------------

def test_empty_environment_is_one_open_hole():
    holes = find_holes([], hw.rect_roi(10, 10))
    assert len(holes) == 1
    assert holes[0].area == pytest.approx(100.0)
    assert holes[0].kind == "open"
    assert not holes[0].inner


def test_single_sensor_island():
    holes = find_holes([disk(1, 10, 10, 5)], hw.rect_roi(20, 20))
    assert len(holes) == 1
    assert holes[0].area == pytest.approx(400.0 - 25.0 * math.pi, abs=1e-9)
    assert len(holes[0].inner) == 1
    assert holes[0].inner[0][0].is_full_circle


def test_full_coverage_no_holes():
    assert find_holes([disk(1, 10, 10, 100)], hw.rect_roi(20, 20)) == []


def test_three_circle_gap_is_one_closed_hole():
    # Pairwise-overlapping ring with an uncovered pocket in the middle:
    # the circumradius of the center triangle exceeds the sensing radius.
    side = 1.8
    h = side * math.sqrt(3) / 2
    centers = [(50, 50), (50 + side, 50), (50 + side / 2, 50 + h)]
    assert side / math.sqrt(3) > 1.0
    sensors = [disk(i + 1, x, y, 1.0) for i, (x, y) in enumerate(centers)]
    holes = find_holes(sensors, big_roi())
    closed = [hle for hle in holes if hle.kind == "closed"]
    assert len(closed) == 1
    gap = closed[0]
    assert len(gap.outer) == 3
    assert all(e.is_arc for e in gap.outer)
    assert not gap.inner

    # Inclusion-exclusion over the centers triangle: each vertex clips a
    # 60-degree unit sector, each pairwise lens straddles a triangle edge
    # symmetrically, and the triple intersection is empty (circumradius
    # exceeds the sensing radius).
    tri_area = math.sqrt(3) / 4 * side * side
    lens = 2 * math.acos(side / 2) - (side / 2) * math.sqrt(4 - side * side)
    expected = tri_area - 3 * (math.pi / 6) + 3 * (lens / 2)
    assert gap.area == pytest.approx(expected, abs=1e-9)


def test_open_holes_touch_environment_boundary():
    holes = find_holes([disk(1, 10, 10, 6)], hw.rect_roi(20, 20))
    assert len(holes) == 1
    assert holes[0].kind == "open"


def test_area_identity_on_random_scenarios():
    for seed in (11, 12, 13):
        sc = hw.generate(70, 200, 200, 5, 20, 0.0, (), seed=seed)
        holes = find_holes(sc.sensors, sc.roi)
        est, sigma = mc_area(uncovered_in_roi_member(sc), (0, 0, 200, 200),
                             samples=300_000, seed=seed)
        assert hw.holes_area(holes) == pytest.approx(est, abs=3 * sigma)


def test_detection_is_deterministic():
    sc = hw.generate(60, 200, 200, 5, 20, 0.0, (), seed=77)
    h1 = find_holes(sc.sensors, sc.roi)
    h2 = find_holes(sc.sensors, sc.roi)
    assert h1 == h2


def test_strategies_agree():
    sc = hw.generate(90, 200, 200, 5, 20, 0.0, (), seed=5)
    a = find_holes(sc.sensors, sc.roi, strategy="exact")
    b = find_holes(sc.sensors, sc.roi, strategy="bruteforce")
    assert [round(h.area, 10) for h in a] == [round(h.area, 10) for h in b]


def test_boundary_points_are_exact_and_uncovered():
    sc = hw.generate(80, 200, 200, 5, 20, 0.0, (), seed=21)
    g = hw.build_neighbor_graph(sc.sensors, "exact")
    bps = collect_boundary_points(sc.sensors, sc.roi, g)
    by_id = {s.id: s for s in sc.sensors}
    assert bps
    for bp in bps:
        for src in bp.sources:
            if src.kind == "sensor":
                s = by_id[src.owner]
                assert abs(dist(bp.location, s.center) - s.radius) <= 1e-9
            else:
                a, b = sc.roi.edges()[src.owner]
                assert hw.geom.seg_dist(bp.location, a, b) <= 1e-9
        assert not hw.covered(bp.location, sc.sensors, "strict")
        assert sc.roi.contains(bp.location) >= 0


def test_uncovered_circle_points_lie_on_emitted_arcs():
    import numpy as np
    sc = hw.generate(80, 200, 200, 5, 20, 0.0, (), seed=22)
    holes = find_holes(sc.sensors, sc.roi)
    edges_by_sensor = {}
    for hle in holes:
        for cyc in hle.cycles():
            for e in cyc:
                if e.source.kind == "sensor":
                    edges_by_sensor.setdefault(e.source.owner, []).append(e)
    rng = np.random.Generator(np.random.PCG64(99))
    checked = 0
    while checked < 500:
        s = sc.sensors[int(rng.integers(len(sc.sensors)))]
        theta = float(rng.uniform(0, 2 * math.pi))
        p = Point(s.center.x + s.radius * math.cos(theta),
                  s.center.y + s.radius * math.sin(theta))
        if sc.roi.contains(p) != 1 or hw.covered(p, sc.sensors, "strict"):
            continue
        checked += 1
        assert any(e.contains_point(p, 1e-9)
                   for e in edges_by_sensor.get(s.id, [])), (s.id, p)


# -- obstacles ----------------------------------------------------------------

def test_obstacle_edges_join_open_hole_boundary():
    # An obstacle overlapping an open hole contributes boundary edges.
    roi = hw.rect_roi(30, 30)
    sensors = [disk(1, 7, 15, 6)]
    obstacle = SimplePolygon.from_coords([(15, 10), (25, 10), (25, 20), (15, 20)])
    holes = find_holes(sensors, roi, [obstacle])
    assert all(h.kind == "open" for h in holes)
    kinds = {e.source.kind for h in holes for cyc in h.cycles() for e in cyc}
    assert "obstacle" in kinds and "roi" in kinds and "sensor" in kinds
    est, sigma = mc_area(
        uncovered_in_roi_member(hw.Scenario(roi, tuple(sensors), (obstacle,), 0)),
        (0, 0, 30, 30), samples=300_000)
    assert hw.holes_area(holes) == pytest.approx(est, abs=3 * sigma)


def test_zero_obstacles_matches_plain_detection():
    sc = hw.generate(50, 100, 80, 5, 15, 0.0, (), seed=31)
    assert find_holes(sc.sensors, sc.roi, ()) == find_holes(sc.sensors, sc.roi)


def test_obstacle_insertion_order_independence_small():
    obstacles = hw.random_obstacles(100, 80, 3, seed=52)
    sc = hw.generate(25, 100, 80, 5, 15, 0.0, obstacles, seed=53)
    import itertools
    base = None
    for perm in itertools.permutations(range(3)):
        holes = find_holes(sc.sensors, sc.roi,
                           [sc.obstacles[i] for i in perm])
        areas = sorted(h.area for h in holes)
        if base is None:
            base = areas
        else:
            assert len(base) == len(areas)
            assert all(abs(x - y) <= 1e-9 for x, y in zip(base, areas))


def test_obstacle_validation_errors():
    roi = hw.rect_roi(10, 10)
    out = SimplePolygon.from_coords([(8, 8), (14, 8), (14, 12), (8, 12)])
    with pytest.raises(hw.InputError):
        find_holes([], roi, [out])
    a = SimplePolygon.from_coords([(1, 1), (5, 1), (5, 5), (1, 5)])
    b = SimplePolygon.from_coords([(4, 4), (8, 4), (8, 8), (4, 8)])
    with pytest.raises(hw.InputError):
        find_holes([], roi, [a, b])
    with pytest.raises(hw.InputError):
        find_holes([disk(1, 2, 2, 1)], roi, [a])


def test_obstacles_are_transparent_to_coverage():
    # Obstacles block occupancy, never sensing: the covered fraction of the
    # same sample set is bit-identical with and without them.
    obstacles = hw.random_obstacles(100, 80, 3, seed=71)
    sc = hw.generate(35, 100, 80, 5, 15, 0.0, obstacles, seed=72)
    bare = hw.Scenario(sc.roi, sc.sensors, (), sc.seed)
    with_o = hw.mc_coverage(sc, 100_000, seed=73)
    without = hw.mc_coverage(bare, 100_000, seed=73)
    assert with_o.covered_fraction == without.covered_fraction
    # And hole extents only shrink when obstacles are inserted.
    holes_with = hw.find_holes(sc.sensors, sc.roi, sc.obstacles)
    holes_without = hw.find_holes(sc.sensors, sc.roi)
    assert hw.holes_area(holes_with) <= hw.holes_area(holes_without) + 1e-9


def test_holes_exclude_obstacle_interiors():
    obstacles = hw.random_obstacles(100, 80, 3, seed=74)
    sc = hw.generate(30, 100, 80, 5, 15, 0.0, obstacles, seed=75)
    holes = hw.find_holes(sc.sensors, sc.roi, sc.obstacles)
    sites = hw.candidate_sites(holes, 50) if holes else []
    assert sites
    for s in sites:
        assert all(o.contains(s.location) == -1 for o in sc.obstacles)


def test_frozen_fixture_100x80():
    # Experiment-style deployment: frozen seed, regression-pinned counts,
    # oracle-validated areas.
    sc = hw.generate(23, 100, 80, 5, 20, 0.0, (), seed=6200)
    holes = find_holes(sc.sensors, sc.roi)
    est, sigma = mc_area(uncovered_in_roi_member(sc), (0, 0, 100, 80),
                         samples=300_000)
    assert hw.holes_area(holes) == pytest.approx(est, abs=3 * sigma)
    obstacles = hw.random_obstacles(100, 80, 3, seed=6201, size=(6.0, 14.0))
    sc2 = hw.generate(34, 100, 80, 5, 20, 0.0, obstacles, seed=6202)
    holes2 = find_holes(sc2.sensors, sc2.roi, sc2.obstacles)
    est2, sigma2 = mc_area(uncovered_in_roi_member(sc2), (0, 0, 100, 80),
                           samples=300_000)
    assert hw.holes_area(holes2) == pytest.approx(est2, abs=3 * sigma2)
