"""Command-line interface: ``pccfit {synth,corners,fit,smooth,pipeline,report}``.

Exit codes: 0 success, 2 parse error, 3 fit failure, 4 corner failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io, synth
from .corner import CornerParams, detect_corners
from .errors import (
    InsufficientPoints,
    NoIntersection,
    ParseError,
    PccError,
)
from .geom import ArcSeg
from .longest import GAP_POLICIES
from .pipeline import FIT_METHODS, PipelineConfig, format_rows, run_pipeline
from .smoothing import EPS_GOOD_DEFAULT, METHODS as SMOOTHING, smooth_curve

EXIT_OK, EXIT_PARSE, EXIT_FIT, EXIT_CORNER = 0, 2, 3, 4
CORNER_ERRORS = (InsufficientPoints, NoIntersection)


def _rounded_rect(w=80.0, h=50.0, r=8.0):
    return synth.rounded_polygon([(0, 0), (w, 0), (w, h), (0, h)], r)


def _circle(r=30.0):
    pieces = (ArcSeg.arc((r, 0.0), (-r, 0.0), (0, 0), True, source="truth"),
              ArcSeg.arc((-r, 0.0), (r, 0.0), (0, 0), True, source="truth"))
    return synth.ShapeSpec(pieces, True)


SHAPES = {
    "pentagon": synth.pentagon,
    "arc-decagon": synth.arc_decagon,
    "rounded-decagon": lambda: synth.rounded_polygon(synth.rectilinear_decagon(), 2.5),
    "star": lambda: synth.polygon(synth.star()),
    "rounded-rect": _rounded_rect,
    "circle": _circle,
    "line": lambda: synth.polygon([(0.0, 0.0), (100.0, 0.0)], closed=False),
}


def _corner_args(p):
    g = p.add_argument_group("corner detection")
    g.add_argument("--eps-turn", type=float, default=0.9)
    g.add_argument("--r-max", type=float, default=20.0)
    g.add_argument("--delta", type=float, default=1.0)
    g.add_argument("--m-limit", type=int, default=30)
    g.add_argument("--pair-rule", choices=("sharper", "literal"), default="sharper")


def _corner_params(a) -> CornerParams:
    return CornerParams(a.eps_turn, a.r_max, a.delta, a.m_limit, a.pair_rule)


def _fit_args(p):
    p.add_argument("input", help="CSV of x,y points")
    p.add_argument("--closed", action="store_true", help="treat the points as a closed contour")
    p.add_argument("--tolerance", type=float, default=0.5)
    p.add_argument("--method", choices=FIT_METHODS, default="c0")
    p.add_argument("--gap-policy", choices=GAP_POLICIES, default="recurse")


def _out_args(p, default_fmt="json"):
    p.add_argument("-o", "--output", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=io.FORMATS, default=default_fmt)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pccfit", description="Arc and segment approximation of planar scans.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scan")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--shape", choices=sorted(SHAPES), default="pentagon")
    src.add_argument("--shape-file", help="shape spec file (L/A lines)")
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--corner-exclusion", type=float, default=1.0)
    p.add_argument("--jitter-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--isotropic", action="store_true", help="jitter in both axes instead of along the normal")
    p.add_argument("-o", "--output", help="CSV output (stdout when omitted)")
    p.add_argument("--truth", help="write ground-truth vertices as JSON here")

    p = sub.add_parser("corners", help="detect corners and sections")
    p.add_argument("input")
    p.add_argument("--closed", action="store_true")
    _corner_args(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("fit", help="fit one curve without corner detection or smoothing")
    _fit_args(p)
    _out_args(p)

    p = sub.add_parser("smooth", help="smooth bad junctions of a JSON curve")
    p.add_argument("curve", help="curve JSON as written by fit/pipeline")
    p.add_argument("--smoothing", choices=SMOOTHING[1:], default="biarc")
    p.add_argument("--tolerance", type=float, default=0.5)
    p.add_argument("--eps-good", type=float, default=EPS_GOOD_DEFAULT)
    p.add_argument("--points", help="data points to re-check against the smoothed curve")
    _out_args(p)

    for name, hlp in (("pipeline", "corners, fit, smoothing and output"),
                      ("report", "result table over several tolerances")):
        p = sub.add_parser(name, help=hlp)
        _fit_args(p)
        p.add_argument("--tolerances", type=float, nargs="+")
        p.add_argument("--smoothing", choices=SMOOTHING, default="none")
        p.add_argument("--eps-good", type=float, default=EPS_GOOD_DEFAULT)
        p.add_argument("--keep-corners", action="store_true")
        p.add_argument("--no-corners", action="store_true", help="skip corner detection")
        _corner_args(p)
        if name == "pipeline":
            _out_args(p)
        else:
            p.add_argument("--json", action="store_true", help="print rows as JSON")
    return ap


def _emit(text: str, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(a):
    if a.shape_file:
        shape = synth.parse_shape(Path(a.shape_file).read_text())
    else:
        shape = SHAPES[a.shape]()
    cfg = synth.ScanConfig(a.step, a.corner_exclusion, a.jitter_sigma, a.seed, not a.isotropic)
    pts, truth = synth.generate_scan(shape, cfg)
    _emit(io.format_points(pts), a.output)
    if a.truth:
        Path(a.truth).write_text(json.dumps({"closed": shape.closed,
                                             "vertices": [list(v) for v in truth.vertices]}, indent=1) + "\n")
    return EXIT_OK


def _cmd_corners(a):
    pts = io.read_points(a.input)
    rep = detect_corners(pts, _corner_params(a), a.closed)
    data = {
        "corners": [list(c) for c in rep.corners],
        "anchors": [[i + 1, j + 1] for i, j in rep.anchors],
        "sections": [[i + 1, j + 1] for i, j in rep.sections],
        "dropped": [{"anchors": [d.pair[0] + 1, d.pair[1] + 1], "reason": d.error}
                    for d in rep.diagnostics if d.error],
    }
    _emit(json.dumps(data, indent=1) + "\n", a.output)
    return EXIT_OK


def _config(a, tolerances=None) -> PipelineConfig:
    return PipelineConfig(
        tolerance=a.tolerance, tolerances=tuple(tolerances or ()), method=a.method,
        gap_policy=a.gap_policy, eps_good=getattr(a, "eps_good", EPS_GOOD_DEFAULT),
        smoothing=getattr(a, "smoothing", "none"),
        corner=_corner_params(a) if hasattr(a, "eps_turn") else CornerParams(),
        detect_corners=not getattr(a, "no_corners", True), keep_corners=getattr(a, "keep_corners", False),
        closed=a.closed, input=a.input, output=getattr(a, "output", None))


def _cmd_fit(a):
    res = run_pipeline(_config(a))
    pts = io.read_points(a.input)
    _emit(io.render_curve(res.curve, a.format, pts), a.output)
    return EXIT_OK


def _cmd_smooth(a):
    curve = io.read_curve(a.curve)
    pts = io.read_points(a.points) if a.points else None
    res = smooth_curve(curve, a.smoothing, a.tolerance, a.eps_good, points=pts)
    for r in res.unfixable:
        logging.warning("junction %d unfixable: %s", r.index, r.detail)
    for n in res.notes:
        logging.warning("%s", n)
    _emit(io.render_curve(res.curve, a.format, pts), a.output)
    return EXIT_OK


def _cmd_pipeline(a):
    cfg = _config(a, a.tolerances)
    res = run_pipeline(cfg)
    pts = io.read_points(a.input)
    for n in res.notes:
        logging.info("%s", n)
    for r in res.junctions:
        if r.fix == "unfixable":
            logging.warning("junction %d unfixable: %s", r.index, r.detail)
    _emit(io.render_curve(res.curve, a.format, pts, res.corners.corners), a.output)
    sys.stderr.write(format_rows(res.rows))
    return EXIT_OK


def _cmd_report(a):
    cfg = _config(a, a.tolerances)
    res = run_pipeline(cfg)
    if a.json:
        rows = [dict(tolerance=r.tolerance, arcs=r.arcs, segments=r.segments, bad_points=r.bad_points,
                     straight=r.straight, unfixable=r.unfixable) for r in res.rows]
        sys.stdout.write(json.dumps({"corners": len(res.corners.corners), "rows": rows}, indent=1) + "\n")
    else:
        sys.stdout.write(f"corners: {len(res.corners.corners)}\n")
        sys.stdout.write(format_rows(res.rows))
        sys.stdout.write("arcs/segments count pieces by construction; "
                         "smoothing arcs are included in arcs.\n")
    return EXIT_OK


COMMANDS = {"synth": _cmd_synth, "corners": _cmd_corners, "fit": _cmd_fit, "smooth": _cmd_smooth,
            "pipeline": _cmd_pipeline, "report": _cmd_report}


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="pccfit: %(levelname)s: %(message)s")
    try:
        return COMMANDS[a.command](a)
    except ParseError as exc:
        logging.error("%s", exc)
        return EXIT_PARSE
    except CORNER_ERRORS as exc:
        logging.error("corner detection failed: %s", exc)
        return EXIT_CORNER
    except (PccError, ValueError) as exc:
        logging.error("fit failed: %s", exc)
        return EXIT_FIT
    except OSError as exc:
        logging.error("%s", exc)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
