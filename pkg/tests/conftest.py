"""Shared fixtures: the seeded regression corpus used across the suite.

The corpus mirrors the experimental setups (200 m x 200 m environment,
sensing ranges 5..20 m, sensor counts 10..300); every fourth scenario
carries random disjoint obstacles, and mobile_fraction is fixed at 0.1
(declared here because deployments do not imply a static/mobile split).
"""

from __future__ import annotations

import pytest

import holeweaver as hw

CORPUS_SIZE = 200
CORPUS_NS = [10, 25, 40, 50, 75, 100, 150, 200, 250, 300]
CORPUS_SEED_BASE = 7000


def corpus_scenario(i: int) -> hw.Scenario:
    n = CORPUS_NS[i % len(CORPUS_NS)]
    seed = CORPUS_SEED_BASE + i
    obstacles = ()
    if i % 4 == 3:
        obstacles = hw.random_obstacles(200, 200, 1 + (i // 4) % 3,
                                        seed=CORPUS_SEED_BASE + 100_000 + i)
    return hw.generate(n, 200.0, 200.0, 5.0, 20.0, 0.1, obstacles, seed)


@pytest.fixture(scope="session")
def corpus():
    return [corpus_scenario(i) for i in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def corpus_detections(corpus):
    """(scenario, graph, holes) per corpus entry, computed once."""
    out = []
    for sc in corpus:
        graph = hw.build_neighbor_graph(sc.sensors, "exact")
        holes = hw.find_holes(sc.sensors, sc.roi, sc.obstacles, graph=graph)
        out.append((sc, graph, holes))
    return out


@pytest.fixture(scope="session")
def obstacle_corpus():
    """50 scenarios with 3..5 obstacles for insertion-order checks."""
    out = []
    for i in range(50):
        k = 3 if i < 30 else (4 if i < 45 else 5)
        obstacles = hw.random_obstacles(200, 200, k, seed=40_000 + i)
        sc = hw.generate(40, 200.0, 200.0, 5.0, 20.0, 0.0, obstacles,
                         seed=41_000 + i)
        out.append(sc)
    return out
