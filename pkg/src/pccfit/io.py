"""Point-set input and curve output (JSON, SVG, G-code)."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import DisconnectedCurve, DuplicateConsecutive, ParseError
from .geom import ArcSeg, PccCurve

FORMATS = ("json", "svg", "gcode")


def parse_points(text: str) -> np.ndarray:
    """Parse ``x,y`` lines; a first line that is not numeric is taken as a header."""
    out = []
    prev = None
    for ln, row in enumerate(csv.reader(_io.StringIO(text)), 1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", ln)
        try:
            p = (float(row[0]), float(row[1]))
        except ValueError:
            if not out and prev is None and ln == 1:
                continue
            raise ParseError(f"not a number in {','.join(row)!r}", ln) from None
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise ParseError("non-finite coordinate", ln)
        if p == prev:
            raise DuplicateConsecutive(f"point {p} repeats the previous one", ln)
        out.append(p)
        prev = p
    return np.asarray(out, dtype=float).reshape(-1, 2)


def read_points(path) -> np.ndarray:
    return parse_points(Path(path).read_text())


def format_points(points) -> str:
    return "x,y\n" + "".join(f"{x!r},{y!r}\n" for x, y in np.asarray(points, dtype=float).tolist())


def write_points(points, path):
    Path(path).write_text(format_points(points))


# -- JSON -------------------------------------------------------------------

def _one_based(i):
    return None if i is None else int(i) + 1


def curve_to_json(curve: PccCurve) -> list:
    out = []
    for s in curve.segs:
        d = {"kind": s.kind, "start": list(s.start), "end": list(s.end)}
        if s.is_arc:
            d.update(center=list(s.center), radius=s.radius, orientation="ccw" if s.ccw else "cw")
        d.update(source=s.source, first=_one_based(s.first), last=_one_based(s.last))
        out.append(d)
    return out


def curve_from_json(data: list) -> PccCurve:
    segs = []
    for k, d in enumerate(data):
        try:
            kind = d["kind"]
            first = None if d.get("first") is None else int(d["first"]) - 1
            last = None if d.get("last") is None else int(d["last"]) - 1
            common = dict(source=d.get("source", "fit"), first=first, last=last)
            if kind == "arc":
                segs.append(ArcSeg("arc", tuple(map(float, d["start"])), tuple(map(float, d["end"])),
                                   tuple(map(float, d["center"])), float(d["radius"]),
                                   d["orientation"] == "ccw", **common))
            elif kind == "segment":
                segs.append(ArcSeg("segment", tuple(map(float, d["start"])), tuple(map(float, d["end"])),
                                   **common))
            else:
                raise ParseError(f"piece {k}: unknown kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"piece {k}: {exc}") from None
    return PccCurve(segs)


def read_curve(path) -> PccCurve:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if isinstance(data, dict):
        data = data.get("pieces", [])
    return curve_from_json(data)


# -- G-code -----------------------------------------------------------------

def _num(v: float) -> str:
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


def curve_to_gcode(curve: PccCurve) -> str:
    curve.check_chained()
    lines = ["G21", "G90"]
    if curve.segs:
        x, y = curve.segs[0].start
        lines.append(f"G0 X{_num(x)} Y{_num(y)}")
    for s in curve.segs:
        x, y = s.end
        if not s.is_arc:
            lines.append(f"G1 X{_num(x)} Y{_num(y)}")
            continue
        i, j = s.center[0] - s.start[0], s.center[1] - s.start[1]
        lines.append(f"{'G3' if s.ccw else 'G2'} X{_num(x)} Y{_num(y)} I{_num(i)} J{_num(j)}")
    return "\n".join(lines) + "\n"


def parse_gcode(text: str) -> PccCurve:
    """Re-simulate G0/G1/G2/G3 moves as pieces (used to check emitted programs)."""
    segs = []
    pos = None
    for ln, raw in enumerate(text.splitlines(), 1):
        words = raw.split(";", 1)[0].split()
        if not words:
            continue
        code, args = words[0], {w[0]: float(w[1:]) for w in words[1:]}
        if code in ("G21", "G90"):
            continue
        target = (args.get("X", pos[0] if pos else 0.0), args.get("Y", pos[1] if pos else 0.0))
        if code == "G0":
            pos = target
        elif code == "G1":
            segs.append(ArcSeg.segment(pos, target, source="gcode"))
            pos = target
        elif code in ("G2", "G3"):
            c = (pos[0] + args["I"], pos[1] + args["J"])
            r = math.hypot(pos[0] - c[0], pos[1] - c[1])
            segs.append(ArcSeg("arc", pos, target, c, r, code == "G3", "gcode"))
            pos = target
        else:
            raise ParseError(f"unsupported word {code}", ln)
    return PccCurve(segs)


# -- SVG --------------------------------------------------------------------

def curve_to_svg(curve: PccCurve, points=None, corners=(), margin: float = 5.0) -> str:
    """SVG with one path for the curve; data points and corners as small markers.

    Geometry stays in model coordinates (1 unit = 1 mm) under a y-flip.
    """
    curve.check_chained()
    parts = [np.asarray([s.start for s in curve.segs] + [s.end for s in curve.segs]).reshape(-1, 2)]
    for s in curve.segs:
        if s.is_arc:
            parts.append(s.sample(16))
    if points is not None and len(points):
        parts.append(np.asarray(points, dtype=float).reshape(-1, 2))
    if len(corners):
        parts.append(np.asarray(corners, dtype=float).reshape(-1, 2))
    allp = np.vstack(parts) if parts[0].size else np.zeros((1, 2))
    lo = (allp.min(axis=0) - margin).tolist()
    hi = (allp.max(axis=0) + margin).tolist()
    w, h = hi[0] - lo[0], hi[1] - lo[1]
    d = []
    if curve.segs:
        d.append(f"M {curve.segs[0].start[0]!r} {curve.segs[0].start[1]!r}")
    for s in curve.segs:
        x, y = s.end
        if s.is_arc:
            large = 1 if s.sweep > math.pi else 0
            d.append(f"A {s.radius!r} {s.radius!r} 0 {large} {1 if s.ccw else 0} {x!r} {y!r}")
        else:
            d.append(f"L {x!r} {y!r}")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w!r}mm" height="{h!r}mm" '
        f'viewBox="{lo[0]!r} {-hi[1]!r} {w!r} {h!r}">',
        '<g transform="scale(1,-1)">',
        f'<path d="{" ".join(d)}" fill="none" stroke="black" stroke-width="0.2"/>',
    ]
    if points is not None:
        for x, y in np.asarray(points, dtype=float).reshape(-1, 2).tolist():
            out.append(f'<circle cx="{x!r}" cy="{y!r}" r="0.25" fill="steelblue"/>')
    for x, y in np.asarray(corners, dtype=float).reshape(-1, 2).tolist():
        out.append(f'<circle cx="{x!r}" cy="{y!r}" r="0.6" fill="none" stroke="red" stroke-width="0.2"/>')
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def render_curve(curve: PccCurve, fmt: str, points=None, corners=()) -> str:
    if fmt == "json":
        curve.check_chained()
        return json.dumps(curve_to_json(curve), indent=1) + "\n"
    if fmt == "svg":
        return curve_to_svg(curve, points, corners)
    if fmt == "gcode":
        return curve_to_gcode(curve)
    raise ValueError(f"format must be one of {FORMATS}")


def write_curve(curve: PccCurve, fmt: str, path, points=None, corners=()):
    """Write ``curve`` as json, svg or gcode; raises DisconnectedCurve on a broken chain."""
    text = render_curve(curve, fmt, points, corners)
    Path(path).write_text(text)


__all__ = [
    "DisconnectedCurve", "FORMATS", "curve_from_json", "curve_to_gcode", "curve_to_json",
    "curve_to_svg", "format_points", "parse_gcode", "parse_points", "read_curve", "read_points",
    "render_curve", "write_curve", "write_points",
]
