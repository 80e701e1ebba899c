"""Command-line front end.

Subcommands: analyze, iterate, verify, render, reconstruct.
Exit codes: 0 success, 1 usage or parse error, 2 geometric degeneracy.
All numeric output uses 17 significant digits so reports round-trip.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .errors import CyclicDegeneration, GeometryError
from .kernel import AtInfinity, Point, UNDEFINED, is_finite
from .quad import (
    Quadrilateral,
    analyze,
    isoptic_point,
    next_generation,
    prev_generation,
    reconstruct_fourth_vertex,
    reconstruct_from_pedal_w,
    reconstruct_from_simson,
    similarity_ratio,
    simson_point,
)
from .render import LAYERS, render_svg
from .verify import SHAPE_CLASSES, CaseSpec, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2


def _num(x: float):
    # json.dumps prints shortest repr; route through %.17g for a fixed width
    if x == 0.0:
        return 0.0  # avoid "-0.0" in reports
    return float(format(x, ".17g"))


def _point_json(p):
    if isinstance(p, Point):
        return {"kind": "point", "xy": [_num(p.x), _num(p.y)]}
    if isinstance(p, AtInfinity):
        return {"kind": "at-infinity", "direction": [_num(p.dx), _num(p.dy)]}
    if p is UNDEFINED:
        return {"kind": "undefined"}
    raise TypeError(f"not a point-like value: {p!r}")


def _quad_json(q: Quadrilateral):
    return [[_num(v.x), _num(v.y)] for v in q.vertices()]


def _circle_json(c):
    if c.is_line:
        d = c.direction()
        return {"kind": "line", "direction": [_num(d.x), _num(d.y)],
                "coeffs": [_num(c.a), _num(c.b), _num(c.c), _num(c.d)]}
    o = c.center()
    return {"kind": "circle", "center": [_num(o.x), _num(o.y)],
            "radius": _num(c.radius())}


def _dump(obj, out_path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_quad_file(path: str) -> Quadrilateral:
    """Parse {"vertices": [[x, y] x 4]}; any malformed content raises ValueError."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "vertices" not in data:
        raise ValueError("expected an object with a 'vertices' key")
    verts = data["vertices"]
    if not isinstance(verts, list) or len(verts) != 4:
        raise ValueError("'vertices' must list exactly 4 [x, y] pairs")
    pts = []
    for pair in verts:
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in pair)):
            raise ValueError(f"bad vertex entry {pair!r}")
        x, y = float(pair[0]), float(pair[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError("vertex coordinates must be finite")
        pts.append(Point(x, y))
    return Quadrilateral(*pts)


def _parse_xy(text: str) -> Point:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    x, y = float(parts[0]), float(parts[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("coordinates must be finite")
    return Point(x, y)


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    q = load_quad_file(args.file)
    rep = analyze(q, args.tol)
    doc = {
        "tool_version": __version__,
        "tolerance": _num(args.tol),
        "input": {"vertices": _quad_json(q)},
        "shape": {
            "convex": rep.shape.convex,
            "concave": rep.shape.concave,
            "cyclic": rep.shape.cyclic,
            "orthocentric": rep.shape.orthocentric,
            "trapezoid": rep.shape.trapezoid,
            "parallelogram": rep.shape.parallelogram,
        },
        "r": None if math.isnan(rep.r) else _num(rep.r),
        "w": _point_json(rep.w),
        "s": _point_json(rep.s),
        "triad_circles": [_circle_json(c) for c in rep.triads.circles],
        "pedal_w": [[_num(p.x), _num(p.y)] for p in rep.pedal_w] if rep.pedal_w else None,
        "pedal_s": [[_num(p.x), _num(p.y)] for p in rep.pedal_s] if rep.pedal_s else None,
        "varignon": [[_num(p.x), _num(p.y)] for p in rep.varignon],
        "isoptic_quantity": _num(rep.isoptic_quantity) if rep.isoptic_quantity is not None else None,
        "residuals": {k: _num(v) for k, v in sorted(rep.residuals.items())},
    }
    _dump(doc, args.out)
    return EXIT_OK


def cmd_iterate(args) -> int:
    q = load_quad_file(args.file)
    step = next_generation if args.direction == "forward" else prev_generation
    generations = [q]
    ratios = []
    degeneration = None
    for _ in range(args.generations):
        try:
            nxt = step(generations[-1], args.tol)
        except CyclicDegeneration as exc:
            pt = exc.point
            degeneration = {
                "reason": "cyclic",
                "point": _point_json(pt) if pt is not None else None,
            }
            break
        except GeometryError as exc:
            degeneration = {"reason": type(exc).__name__, "message": str(exc)}
            break
        ratios.append(_num(nxt.area() / generations[-1].area()))
        generations.append(nxt)
    doc = {
        "tool_version": __version__,
        "tolerance": _num(args.tol),
        "direction": args.direction,
        "input": {"vertices": _quad_json(q)},
        "generations": [_quad_json(g) for g in generations],
        "area_ratios": ratios,
        "degeneration": degeneration,
    }
    _dump(doc, args.out)
    return EXIT_OK if degeneration is None else EXIT_DEGENERATE


def cmd_verify(args) -> int:
    if args.cases <= 0:
        print("error: --cases must be positive", file=sys.stderr)
        return EXIT_USAGE
    spec = CaseSpec(seed=args.seed, shape_class=getattr(args, "shape_class"))
    report = run_suite(spec, args.cases, args.tol)
    doc = report.to_dict()
    doc["tool_version"] = __version__
    _dump(doc, args.out)
    failures = report.failures
    return EXIT_OK if failures == 0 else min(failures, 125)


def cmd_render(args) -> int:
    q = load_quad_file(args.file)
    layers = tuple(name.strip() for name in args.layers.split(",") if name.strip())
    for name in layers:
        if name not in LAYERS:
            print(f"error: unknown layer {name!r} (choose from {', '.join(LAYERS)})",
                  file=sys.stderr)
            return EXIT_USAGE
    svg = render_svg(q, layers, tol=args.tol)
    with open(args.out, "w") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    if args.mode == "fourth-vertex":
        for flag in ("a", "b", "c", "w"):
            if getattr(args, flag) is None:
                print(f"error: --{flag} is required for mode fourth-vertex",
                      file=sys.stderr)
                return EXIT_USAGE
        a, b, c = _parse_xy(args.a), _parse_xy(args.b), _parse_xy(args.c)
        w = _parse_xy(args.w)
        d = reconstruct_fourth_vertex(a, b, c, w, args.tol)
        q = Quadrilateral(a, b, c, d)
        w2 = isoptic_point(q, args.tol)
        residual = w2.dist(w) / q.scale() if is_finite(w2) else math.inf
        doc = {"mode": args.mode, "point": [_num(d.x), _num(d.y)],
               "residual": _num(residual)}
        _dump(doc, args.out)
        return EXIT_OK
    # pedal-w and simson both need a center point and four feet
    anchor_flag = "w" if args.mode == "pedal-w" else "s"
    anchor_text = getattr(args, anchor_flag)
    if anchor_text is None or args.feet is None:
        print(f"error: --{anchor_flag} and --feet are required for mode {args.mode}",
              file=sys.stderr)
        return EXIT_USAGE
    anchor = _parse_xy(anchor_text)
    feet = [_parse_xy(t) for t in args.feet]
    if args.mode == "pedal-w":
        q = reconstruct_from_pedal_w(anchor, feet, args.tol)
        probe = isoptic_point(q, args.tol)
    else:
        q = reconstruct_from_simson(anchor, feet, args.tol)
        probe = simson_point(q, args.tol)
    residual = probe.dist(anchor) / q.scale() if is_finite(probe) else math.inf
    doc = {"mode": args.mode, "vertices": _quad_json(q),
           "residual": _num(residual)}
    _dump(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoptic",
        description="Analyze the perpendicular-bisector iteration, isoptic "
                    "point and Simson line of a quadrilateral.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one quadrilateral")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("iterate", help="run the generation map repeatedly")
    p.add_argument("file")
    p.add_argument("--generations", type=int, required=True)
    p.add_argument("--direction", choices=("forward", "backward"),
                   default="forward")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_iterate)

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--class", dest="shape_class", required=True,
                   choices=SHAPE_CLASSES)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("render", help="draw the figure as SVG")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--layers", default="quad,triads,w")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("reconstruct", help="invert one of the constructions")
    p.add_argument("--mode", required=True,
                   choices=("fourth-vertex", "pedal-w", "simson"))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--w")
    p.add_argument("--s")
    p.add_argument("--feet", nargs=4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_reconstruct)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code 1
        if exc.code not in (0, None):
            return EXIT_USAGE
        return 0
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
