import math

import pytest

import holeweaver as hw
from holeweaver.geom import Disk, Point
from holeweaver.oracle import exhaustive_optimal_healing, mc_coverage


def disk(i, x, y, r, mobile=False):
    return Disk(i, Point(x, y), r, mobile)


def test_no_sensors_covers_nothing():
    sc = hw.Scenario(hw.rect_roi(10, 10), (), (), 0)
    est = mc_coverage(sc, samples=50_000, seed=1)
    assert est.covered_fraction == 0.0
    assert est.hole_fraction == 1.0


def test_full_cover_is_one():
    sc = hw.Scenario(hw.rect_roi(10, 10), (disk(1, 5, 5, 50),), (), 0)
    est = mc_coverage(sc, samples=50_000, seed=2)
    assert est.covered_fraction == 1.0
    assert est.hole_fraction == 0.0


def test_disk_fraction_matches_closed_form():
    # Closed form first: pi r^2 / A = 25 pi / 400.
    want = 25.0 * math.pi / 400.0
    sc = hw.Scenario(hw.rect_roi(20, 20), (disk(1, 10, 10, 5),), (), 0)
    est = mc_coverage(sc, samples=1_000_000, seed=3)
    assert est.covered_fraction == pytest.approx(
        want, abs=3 * est.std_error["covered"])


def test_fractions_partition_to_one():
    obstacles = hw.random_obstacles(100, 80, 2, seed=5)
    sc = hw.generate(30, 100, 80, 5, 15, 0.0, obstacles, seed=6)
    est = mc_coverage(sc, samples=100_000, seed=7)
    total = (est.covered_fraction + est.hole_fraction
             + est.obstacle_uncovered_fraction)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert est.covered_obstacle_fraction <= est.covered_fraction


def test_same_seed_is_bit_identical():
    sc = hw.generate(40, 100, 80, 5, 15, 0.0, (), seed=8)
    a = mc_coverage(sc, samples=100_000, seed=9)
    b = mc_coverage(sc, samples=100_000, seed=9)
    assert a == b
    c = mc_coverage(sc, samples=100_000, seed=10)
    assert a != c


def test_thread_cap_does_not_change_results(monkeypatch):
    sc = hw.generate(40, 100, 80, 5, 15, 0.0, (), seed=8)
    a = mc_coverage(sc, samples=200_000, seed=9)
    monkeypatch.setenv("HOLEWEAVER_THREADS", "4")
    b = mc_coverage(sc, samples=200_000, seed=9)
    assert a == b


def test_agrees_with_analytic_holes():
    sc = hw.generate(60, 200, 200, 5, 20, 0.0, (), seed=11)
    holes = hw.find_holes(sc.sensors, sc.roi)
    est = mc_coverage(sc, samples=400_000, seed=12)
    assert hw.holes_area(holes) / sc.roi_area == pytest.approx(
        est.hole_fraction, abs=3 * est.std_error["hole"])


# -- exhaustive healing --------------------------------------------------------

def test_zero_mobiles_returns_current_coverage():
    sc = hw.generate(10, 50, 50, 5, 8, 0.0, (), seed=13)
    holes = hw.find_holes(sc.sensors, sc.roi)
    res = exhaustive_optimal_healing(sc, [], [])
    assert res.coverage == pytest.approx(sc.free_area - hw.holes_area(holes),
                                         abs=1e-6)
    assert res.assignment == {}


def test_single_mobile_single_site_in_big_hole():
    # One far corner hole; relocating there adds the full disk area.
    roi = hw.rect_roi(100, 100)
    statics = [disk(1, 10, 10, 8)]
    mob = disk(2, 12, 10, 3, mobile=True)  # inside the static's disk
    sc = hw.Scenario(roi, (statics[0], mob), (), 0)
    site = Point(70, 70)
    res = exhaustive_optimal_healing(sc, [2], [site])
    base = hw.find_holes(statics, roi)
    current = sc.free_area - hw.holes_area(hw.find_holes(sc.sensors, roi))
    assert res.coverage == pytest.approx(current + 9.0 * math.pi, abs=1e-6)
    assert res.assignment[2] == site


def test_assignment_count_two_mobiles_twelve_sites():
    # 1 + 2 * 12 + 12 * 11 = 157 injective assignments, stay included.
    sc = hw.generate(8, 80, 80, 6, 10, 0.25, (), seed=14)
    mobs = [s.id for s in sc.mobiles()][:2]
    holes = hw.find_holes(sc.sensors, sc.roi)
    sites = [s.location for s in hw.candidate_sites(holes, 12)]
    assert len(sites) == 12
    res = exhaustive_optimal_healing(sc, mobs, sites)
    assert res.evaluations == 157


def test_limits_are_refused():
    sc = hw.generate(12, 80, 80, 5, 8, 0.5, (), seed=15)
    mobs = [s.id for s in sc.mobiles()]
    with pytest.raises(hw.LimitError):
        exhaustive_optimal_healing(sc, mobs[:4], [])
    with pytest.raises(hw.LimitError):
        exhaustive_optimal_healing(sc, mobs[:1],
                                   [Point(1, 1)] * 51)


def test_exhaustive_at_least_greedy():
    for seed in (16, 17, 18):
        sc = hw.generate(10, 60, 60, 5, 9, 0.3, (), seed=seed)
        mobs = [s.id for s in sc.mobiles()][:3]
        holes = hw.find_holes(sc.sensors, sc.roi)
        sites = hw.candidate_sites(holes, 10)
        plan = hw.plan_healing(sc.sensors, sc.roi, holes=holes, sites=sites)
        res = exhaustive_optimal_healing(sc, mobs, [s.location for s in sites])
        assert res.coverage >= plan.coverage_after - 1e-6
        assert plan.coverage_after >= 0.5 * res.coverage - 1e-6
