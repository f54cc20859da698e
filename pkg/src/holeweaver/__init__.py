"""Coverage-hole detection and greedy healing for heterogeneous sensor
deployments with transparent polygonal obstacles."""

from .errors import (HoleweaverError, InputError, LimitError, StructureError,
                     ValidationError)
from .geom import (EPS, Arc, CircleHits, CoverageIndex, Disk, Edge, EdgeSource,
                   Point, SegmentHits, SimplePolygon, arc_polygon_area,
                   circle_circle_intersections, circle_segment_intersections,
                   covered, cycle_area, point_in_cycles)
from .neighbors import NeighborGraph, build_neighbor_graph, dominated_ids
from .regions import (Hole, clip_cycles, group_cycles_into_holes, holes_area,
                      stitch_cycles, subtract_obstacle)
from .detect import (BoundaryPoint, collect_boundary_points, find_holes,
                     uncovered_arcs, validate_obstacle_set)
from .heal import (CandidateSite, HealingPlan, Move, candidate_sites,
                   coverage_gain, plan_healing, sole_coverage_region)
from .oracle import (CoverageEstimate, ExhaustiveHealing,
                     exhaustive_optimal_healing, mc_coverage)
from .scenario import (Scenario, from_json_bytes, generate,
                       lower_bound_stressor, load, random_obstacles, rect_roi,
                       save, stress_crossings, to_json_bytes)

__version__ = "0.1.0"

__all__ = [
    "Arc", "BoundaryPoint", "CandidateSite", "CircleHits", "CoverageEstimate",
    "CoverageIndex", "Disk", "Edge", "EdgeSource", "EPS", "ExhaustiveHealing",
    "HealingPlan", "Hole", "HoleweaverError", "InputError", "LimitError",
    "Move", "NeighborGraph", "Point", "Scenario", "SegmentHits",
    "SimplePolygon", "StructureError", "ValidationError", "arc_polygon_area",
    "build_neighbor_graph", "candidate_sites", "circle_circle_intersections",
    "circle_segment_intersections", "clip_cycles", "collect_boundary_points",
    "coverage_gain", "covered", "cycle_area", "dominated_ids",
    "exhaustive_optimal_healing", "find_holes", "from_json_bytes", "generate",
    "group_cycles_into_holes", "holes_area", "load", "lower_bound_stressor",
    "mc_coverage", "plan_healing", "point_in_cycles", "random_obstacles",
    "rect_roi", "save", "sole_coverage_region", "stitch_cycles",
    "stress_crossings", "subtract_obstacle", "to_json_bytes",
    "uncovered_arcs", "validate_obstacle_set",
]
