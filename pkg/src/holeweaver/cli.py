"""Batch command-line frontend.

Subcommands: gen (random scenario), detect (holes + optional SVG), heal
(greedy relocation plan), oracle (Monte-Carlo check of the analytic areas),
stress (worst-case obstacle construction). All artifacts are reproducible
byte-for-byte from the inputs; timing lives only in the stdout report.

Exit codes: 0 ok, 1 usage, 2 invalid input, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .errors import (HoleweaverError, InputError, LimitError, StructureError,
                     ValidationError)
from .detect import find_holes, validate_obstacle_set
from .geom import Edge
from .heal import candidate_sites, plan_healing
from .neighbors import build_neighbor_graph
from .oracle import mc_coverage
from .regions import Hole, holes_area, subtract_obstacle
from .render import render_svg
from . import scenario as scen

_EXIT_USAGE = 1
_EXIT_INPUT = 2
_EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        print(f"usage: {message}", file=sys.stderr)
        raise SystemExit(_EXIT_USAGE)


def _build_parser() -> _Parser:
    p = _Parser(prog="holeweaver",
                description="Coverage-hole detection and healing for sensor deployments")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random scenario")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--roi", required=True, metavar="WxH")
    g.add_argument("--rmin", type=float, required=True)
    g.add_argument("--rmax", type=float, required=True)
    g.add_argument("--mobile-frac", type=float, default=0.0)
    g.add_argument("--obstacles", default="none", metavar="FILE|none")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    d = sub.add_parser("detect", help="detect coverage holes")
    d.add_argument("--scenario", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--svg")
    d.add_argument("--strategy", choices=("exact", "bruteforce"), default="exact")
    d.add_argument("--chords", type=int, metavar="K",
                   help="also emit K-point polyline approximations of arcs")

    h = sub.add_parser("heal", help="plan greedy mobile-sensor relocation")
    h.add_argument("--scenario", required=True)
    h.add_argument("--sites", type=int, default=64)
    h.add_argument("--out", required=True)
    h.add_argument("--svg", metavar="BEFORE.svg,AFTER.svg")
    h.add_argument("--strategy", choices=("exact", "bruteforce"), default="exact")

    o = sub.add_parser("oracle", help="Monte-Carlo check of analytic hole areas")
    o.add_argument("--scenario", required=True)
    o.add_argument("--samples", type=int, default=1_000_000)
    o.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("stress", help="worst-case obstacle-crossing scenario")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--z", type=int, required=True)
    s.add_argument("--out")
    return p


def _parse_roi(text: str) -> tuple[float, float]:
    try:
        w, h = text.lower().split("x")
        return float(w), float(h)
    except ValueError:
        raise InputError(f"--roi must look like 200x200, got {text!r}")


def _edge_json(e: Edge) -> dict:
    src = {"kind": e.source.kind, "owner": e.source.owner, "edge": e.source.edge}
    if e.arc is None:
        return {"type": "segment", "start": [e.start.x, e.start.y],
                "end": [e.end.x, e.end.y], "source": src}
    return {"type": "arc", "start": [e.start.x, e.start.y],
            "end": [e.end.x, e.end.y],
            "center": [e.arc.center.x, e.arc.center.y],
            "radius": e.arc.radius,
            "orientation": "ccw" if e.arc.ccw else "cw",
            "full_circle": e.arc.full, "source": src}


def _cycle_polyline(cycle: Sequence[Edge], chords: int) -> list[list[float]]:
    import math
    pts: list[list[float]] = []
    for e in cycle:
        if e.arc is None:
            pts.append([e.start.x, e.start.y])
            continue
        sweep = e.sweep()
        sa = e.start_angle()
        for k in range(max(chords, 1)):
            th = sa + sweep * k / max(chords, 1)
            pts.append([e.arc.center.x + e.arc.radius * math.cos(th),
                        e.arc.center.y + e.arc.radius * math.sin(th)])
    return pts


def _holes_json(holes: Sequence[Hole], chords: int | None) -> list[dict]:
    out = []
    for h in holes:
        rec = {
            "kind": h.kind,
            "area": h.area,
            "outer": [_edge_json(e) for e in h.outer],
            "inner": [[_edge_json(e) for e in cyc] for cyc in h.inner],
        }
        if chords:
            rec["outer_polyline"] = _cycle_polyline(h.outer, chords)
            rec["inner_polylines"] = [_cycle_polyline(c, chords) for c in h.inner]
        out.append(rec)
    return out


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, allow_nan=False)
        fh.write("\n")


def _coverage_percents(sc: scen.Scenario, holes: Sequence[Hole]) -> tuple[float, float]:
    covered = sc.free_area - holes_area(holes)
    pct_roi = 100.0 * covered / sc.roi_area
    pct_free = 100.0 * covered / sc.free_area if sc.free_area > 0 else 0.0
    return pct_roi, pct_free


def _cmd_gen(args) -> int:
    w, h = _parse_roi(args.roi)
    obstacles: tuple = ()
    if args.obstacles != "none":
        with open(args.obstacles, "rb") as fh:
            doc = json.loads(fh.read().decode("utf-8"))
        if not isinstance(doc, list):
            raise InputError("obstacle file must hold a JSON list of polygons")
        obstacles = tuple(scen._parse_polygon(o, f"obstacle {i}")
                          for i, o in enumerate(doc))
    sc = scen.generate(args.n, w, h, args.rmin, args.rmax,
                       args.mobile_frac, obstacles, args.seed)
    scen.save(sc, args.out)
    print(json.dumps({"scenario": args.out, "sensors": len(sc.sensors),
                      "obstacles": len(sc.obstacles), "seed": sc.seed}))
    return 0


def _cmd_detect(args) -> int:
    sc = scen.load(args.scenario)
    if sc.obstacles:
        validate_obstacle_set(sc.roi, sc.obstacles, sc.sensors)
    t0 = time.perf_counter()
    graph = build_neighbor_graph(sc.sensors, args.strategy) if sc.sensors else None
    t1 = time.perf_counter()
    holes = find_holes(sc.sensors, sc.roi, (), strategy=args.strategy,
                       graph=graph)
    t2 = time.perf_counter()
    for idx, o in enumerate(sc.obstacles):
        holes = subtract_obstacle(holes, o, idx)
    t3 = time.perf_counter()

    pct_roi, pct_free = _coverage_percents(sc, holes)
    _write_json(args.out, {
        "scenario": args.scenario,
        "strategy": args.strategy,
        "hole_count": len(holes),
        "areas": [h.area for h in holes],
        "coverage_percent_roi": pct_roi,
        "coverage_percent_free": pct_free,
        "holes": _holes_json(holes, args.chords),
    })
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(sc, holes))
    report = {
        "scenario": args.scenario,
        "hole_count": len(holes),
        "areas": [h.area for h in holes],
        "coverage_percent_roi": pct_roi,
        "coverage_percent_free": pct_free,
        "phase_ms": {"awvd": (t1 - t0) * 1e3, "detect": (t2 - t1) * 1e3,
                     "clip": (t3 - t2) * 1e3, "heal": 0.0},
    }
    print(json.dumps(report))
    return 0


def _cmd_heal(args) -> int:
    sc = scen.load(args.scenario)
    t0 = time.perf_counter()
    holes = find_holes(sc.sensors, sc.roi, sc.obstacles, strategy=args.strategy)
    t1 = time.perf_counter()
    sites = candidate_sites(holes, args.sites) if holes else []
    plan = plan_healing(sc.sensors, sc.roi, sc.obstacles, holes=holes,
                        sites=sites, strategy=args.strategy)
    t2 = time.perf_counter()

    moved = dict()
    for mv in plan.moves:
        moved[mv.sensor_id] = mv.dst
    sc_after = sc
    for sid, dst in moved.items():
        sc_after = sc_after.with_sensor_moved(sid, dst)
    holes_after = find_holes(sc_after.sensors, sc_after.roi, sc_after.obstacles,
                             strategy=args.strategy)

    _write_json(args.out, {
        "scenario": args.scenario,
        "moves": [{"sensor": mv.sensor_id,
                   "from": [mv.src.x, mv.src.y],
                   "to": [mv.dst.x, mv.dst.y],
                   "gain": mv.gain} for mv in plan.moves],
        "coverage_before": plan.coverage_before,
        "coverage_after": plan.coverage_after,
        "coverage_before_percent_free":
            100.0 * plan.coverage_before / sc.free_area,
        "coverage_after_percent_free":
            100.0 * plan.coverage_after / sc.free_area,
    })
    if args.svg:
        names = args.svg.split(",")
        if len(names) != 2:
            raise InputError("--svg expects BEFORE.svg,AFTER.svg")
        with open(names[0], "w", encoding="utf-8") as fh:
            fh.write(render_svg(sc, holes))
        with open(names[1], "w", encoding="utf-8") as fh:
            fh.write(render_svg(sc_after, holes_after))
    pct_roi, pct_free = _coverage_percents(sc_after, holes_after)
    print(json.dumps({
        "scenario": args.scenario,
        "moves": len(plan.moves),
        "hole_count": len(holes_after),
        "areas": [h.area for h in holes_after],
        "coverage_percent_roi": pct_roi,
        "coverage_percent_free": pct_free,
        "phase_ms": {"awvd": 0.0, "detect": (t1 - t0) * 1e3, "clip": 0.0,
                     "heal": (t2 - t1) * 1e3},
    }))
    return 0


def _cmd_oracle(args) -> int:
    sc = scen.load(args.scenario)
    holes = find_holes(sc.sensors, sc.roi, sc.obstacles)
    est = mc_coverage(sc, args.samples, args.seed)
    analytic_hole_fraction = holes_area(holes) / sc.roi_area
    diff = abs(analytic_hole_fraction - est.hole_fraction)
    limit = 3.0 * est.std_error["hole"]
    doc = est.as_dict()
    doc["analytic_hole_fraction"] = analytic_hole_fraction
    doc["difference"] = diff
    doc["three_sigma"] = limit
    print(json.dumps(doc))
    if diff > limit:
        raise ValidationError(
            f"analytic hole fraction {analytic_hole_fraction:.6f} vs "
            f"Monte-Carlo {est.hole_fraction:.6f} differs beyond 3 sigma")
    return 0


def _cmd_stress(args) -> int:
    sc = scen.lower_bound_stressor(args.n, args.z)
    count = scen.stress_crossings(sc)
    if args.out:
        scen.save(sc, args.out)
    print(json.dumps({"n": args.n, "z": args.z,
                      "obstacle_vertices": len(sc.obstacles[0].vertices),
                      "crossings": count}))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"gen": _cmd_gen, "detect": _cmd_detect, "heal": _cmd_heal,
                "oracle": _cmd_oracle, "stress": _cmd_stress}
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"validation: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except (InputError, StructureError, LimitError, FileNotFoundError) as exc:
        print(f"input: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    except HoleweaverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
