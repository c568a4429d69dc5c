"""Command line front end.

Reads surface and smoothing-instance documents in JSON, expands curves
by either route, dumps graphs, and runs the verification suites. Output
is canonical and byte-stable for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_mono, format_poly
from .skein import SkeinError, instance_from_dict, verify_skein
from .surface import (
    ValidationError,
    build_band_graph,
    build_snake_graph,
    expand,
    expand_by_matrices,
    triangulation_from_dict,
)


class CLIError(Exception):
    pass


class ParseError(CLIError):
    """Input that is not valid JSON or violates the document schema."""


class MethodMismatch(CLIError):
    """The matching and matrix routes disagreed; always a bug."""


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("%s: line %d column %d: %s"
                         % (path, exc.lineno, exc.colno, exc.msg)) from exc


def _load_surface(path):
    try:
        return triangulation_from_dict(_load_json(path))
    except ValidationError as exc:
        raise ParseError("%s: %s" % (path, exc)) from exc


def _pick_curves(curves, name, max_tiles):
    if name is not None:
        chosen = [c for c in curves if c.name == name]
        if not chosen:
            raise CLIError("no curve named %r in the input" % (name,))
    else:
        chosen = curves
    if not chosen:
        raise CLIError("the input declares no curves")
    for c in chosen:
        if max_tiles is not None and len(c.crossings) > max_tiles:
            raise CLIError(
                "curve %r crosses %d arcs, over the --max-tiles limit %d"
                % (c.name or "?", len(c.crossings), max_tiles))
    return chosen


def _shift_text(element):
    if element.tropical_shift is None:
        return "0"
    return format_mono(element.tropical_shift)


def _cmd_expand(args, out):
    tri, curves = _load_surface(args.input)
    rows = []
    for curve in _pick_curves(curves, args.curve, args.max_tiles):
        el = expand(tri, curve, keep_boundary=args.keep_boundary)
        rows.append({
            "name": curve.name or "",
            "X": format_poly(el.laurent),
            "F": format_poly(el.f_poly),
            "shift": _shift_text(el),
            "x": format_poly(el.normalized),
        })
    if args.format == "json":
        json.dump({"curves": rows}, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for row in rows:
            out.write("curve: %s\n" % row["name"])
            for key in ("X", "F", "shift", "x"):
                out.write("%s: %s\n" % (key, row[key]))
    return 0


def _cmd_bmatrix(args, out):
    tri, _ = _load_surface(args.input)
    b = tri.b_matrix()
    if args.format == "json":
        json.dump({"arcs": list(tri.arcs), "b": b}, out, indent=2,
                  sort_keys=True)
        out.write("\n")
    else:
        for label, row in zip(tri.arcs, b):
            out.write("%s: %s\n"
                      % (label, " ".join("%d" % e for e in row)))
    return 0


def _graph_for(tri, curve):
    if curve.kind == "loop":
        return build_band_graph(tri, curve)
    if curve.kind == "arc":
        return build_snake_graph(tri, curve)
    raise CLIError("curve %r has no snake graph" % (curve.name or "?",))


def _cmd_matchings(args, out):
    tri, curves = _load_surface(args.input)
    rows = []
    for curve in _pick_curves(curves, args.curve, args.max_tiles):
        g = _graph_for(tri, curve)
        if curve.kind == "loop":
            pairs = [(w, h) for _, w, h in g.good_matchings()]
        else:
            minimal = g.minimal_matching()
            pairs = [(g.weight_mono(m), g.height_mono(m, minimal))
                     for m in g.perfect_matchings()]
        for w, h in pairs:
            rows.append({
                "curve": curve.name or "",
                "x": format_mono(w),
                "y": format_mono(h),
            })
    if args.format == "json":
        json.dump({"matchings": rows}, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for row in rows:
            out.write("%s: x(P)=%s y(P)=%s\n"
                      % (row["curve"], row["x"], row["y"]))
    return 0


def _cmd_snake_dot(args, out):
    tri, curves = _load_surface(args.input)
    for curve in _pick_curves(curves, args.curve, args.max_tiles):
        out.write(_graph_for(tri, curve).to_dot())
        out.write("\n")
    return 0


def _cmd_verify(args, out):
    tri, curves = _load_surface(args.input)
    for curve in _pick_curves(curves, args.curve, args.max_tiles):
        if curve.kind not in ("arc", "loop"):
            out.write("curve %s: skipped (no matrix route)\n"
                      % (curve.name or "?",))
            continue
        by_match = expand(tri, curve, keep_boundary=args.keep_boundary)
        by_matrix = expand_by_matrices(tri, curve,
                                       keep_boundary=args.keep_boundary)
        if by_match.laurent != by_matrix.laurent:
            raise MethodMismatch(
                "curve %s: matchings gave %s but matrices gave %s"
                % (curve.name or "?", format_poly(by_match.laurent),
                   format_poly(by_matrix.laurent)))
        out.write("curve %s: methods agree\n" % (curve.name or "?",))
    return 0


def _cmd_skein_check(args, out):
    doc = _load_json(args.input)
    if not isinstance(doc, dict) or "surface" not in doc \
            or "instance" not in doc:
        raise ParseError(
            "%s: expected an object with surface and instance keys"
            % (args.input,))
    try:
        tri, curves = triangulation_from_dict(doc["surface"])
        inst = instance_from_dict(doc["instance"], named_curves=curves)
        report = verify_skein(tri, inst)
    except (ValidationError, SkeinError) as exc:
        raise CLIError("%s: %s" % (type(exc).__name__, exc)) from exc
    out.write(report.as_text())
    out.write("\n")
    return 0


def _cmd_selftest(args, out):
    from .selftest import run_selftest
    ok = run_selftest(seed=args.seed, stream=out)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="snakegraphs",
        description="Expand curves on triangulated surfaces and verify "
                    "the expansions.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, needs_input=True, formats=("text",)):
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="JSON input file")
            p.add_argument("--curve", help="restrict to one named curve")
            p.add_argument("--max-tiles", type=int, default=None,
                           help="refuse curves crossing more arcs")
        p.add_argument("--keep-boundary", action="store_true",
                       help="keep boundary variables in expansions")
        p.add_argument("--seed", type=int, default=0)
        if len(formats) > 1:
            p.add_argument("--format", choices=formats, default="text")
        else:
            p.set_defaults(format=formats[0])
        p.set_defaults(fn=fn)
        return p

    add("expand", _cmd_expand, formats=("text", "json"))
    add("bmatrix", _cmd_bmatrix, formats=("text", "json"))
    add("matchings", _cmd_matchings, formats=("text", "json"))
    add("snake-dot", _cmd_snake_dot, formats=("dot",))
    add("verify", _cmd_verify)
    add("skein-check", _cmd_skein_check)
    add("selftest", _cmd_selftest, needs_input=False)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, out)
    except (CLIError, ValidationError) as exc:
        sys.stderr.write("%s: %s\n" % (type(exc).__name__, exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
