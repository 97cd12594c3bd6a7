"""Deterministic synthetic laser scans of piecewise circular contours.

Samples sit at multiples of a fixed arclength step along the contour, none
within ``corner_exclusion`` of a vertex, so the vertices themselves are never
in the data.  Jitter comes from ``numpy.random.Generator(Philox(seed))``
and by default moves each sample along the contour normal only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, StepTooLarge
from .geom import ArcSeg, as_point, cross, dist, dot, sub, unit


@dataclass(frozen=True)
class ShapeSpec:
    """Ordered contour pieces; ``vertices`` defaults to the tangent breaks.

    Rounded shapes pass their virtual sharp vertices explicitly: those are
    what a corner detector should recover, while the exclusion zones still
    sit only at true tangent breaks.
    """

    pieces: tuple
    closed: bool = False
    vertices: tuple | None = None

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("shape needs at least one piece")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if dist(a.end, b.start) > 1e-9:
                raise ValueError(f"pieces do not connect at {a.end} / {b.start}")
        if self.closed and dist(self.pieces[-1].end, self.pieces[0].start) > 1e-9:
            raise ValueError("closed shape does not return to its start")

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    def breaks(self, tol: float = 1e-9) -> list:
        """Arclength positions of tangent discontinuities."""
        out = []
        s = 0.0
        n = len(self.pieces)
        for k, p in enumerate(self.pieces):
            s += p.length
            if k == n - 1 and not self.closed:
                break
            q = self.pieces[(k + 1) % n]
            if dot(p.tangent_at("end"), q.tangent_at("start")) < 1.0 - tol:
                out.append(0.0 if k == n - 1 else s)
        return sorted(out)

    def truth_vertices(self) -> list:
        if self.vertices is not None:
            return [as_point(v) for v in self.vertices]
        ends = [p.end for p in self.pieces]
        L = self.length
        cum = np.cumsum([p.length for p in self.pieces])
        out = []
        for b in self.breaks():
            k = int(np.argmin(np.abs(cum - (b if b > 0 else L))))
            out.append(ends[k])
        return out


@dataclass(frozen=True)
class ScanConfig:
    step: float = 1.0
    corner_exclusion: float = 1.0
    jitter_sigma: float = 0.0
    seed: int = 0
    normal_only: bool = True

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError("step must be positive")
        if self.corner_exclusion < 0.0 or self.jitter_sigma < 0.0:
            raise ValueError("corner_exclusion and jitter_sigma must be non-negative")


@dataclass
class ScanTruth:
    shape: ShapeSpec
    vertices: list
    arclength: np.ndarray
    piece_index: np.ndarray
    clean: np.ndarray
    normals: np.ndarray = field(repr=False)

    def distance_to_contour(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.min([p.distance_to(pts) for p in self.shape.pieces], axis=0)


def _locate(pieces, cum, s):
    k = int(np.searchsorted(cum, s, side="right"))
    k = min(k, len(pieces) - 1)
    s0 = cum[k - 1] if k > 0 else 0.0
    p = pieces[k]
    frac = (s - s0) / p.length
    return k, p.point_at(min(max(frac, 0.0), 1.0)), p.tangent_at_point(p.point_at(min(max(frac, 0.0), 1.0)))


def generate_scan(shape: ShapeSpec, config: ScanConfig):
    """Sample ``shape`` per ``config``; returns ``(points, truth)``."""
    L = shape.length
    pieces = shape.pieces
    cum = np.cumsum([p.length for p in pieces])
    n_max = int(math.floor(L / config.step + 1e-9))
    s_all = config.step * np.arange(n_max + 1)
    if shape.closed:
        s_all = s_all[s_all < L - 1e-9]
    breaks = shape.breaks()
    keep = np.ones(len(s_all), dtype=bool)
    for b in breaks:
        d = np.abs(s_all - b)
        if shape.closed:
            d = np.minimum(d, L - d)
        keep &= d >= config.corner_exclusion - 1e-12
    s_kept = s_all[keep]
    idx, clean, tang = [], [], []
    for s in s_kept:
        k, p, t = _locate(pieces, cum, float(s))
        idx.append(k)
        clean.append(p)
        tang.append(t)
    idx = np.asarray(idx, dtype=np.int64)
    counts = np.bincount(idx, minlength=len(pieces))
    if np.any(counts < 3):
        k = int(np.argmin(counts))
        raise StepTooLarge(f"piece {k} receives {counts[k]} samples; need at least 3")
    clean = np.asarray(clean, dtype=float)
    normals = np.asarray([(-t[1], t[0]) for t in tang], dtype=float)
    pts = clean.copy()
    if config.jitter_sigma > 0.0:
        rng = np.random.Generator(np.random.Philox(config.seed))
        if config.normal_only:
            pts += rng.normal(0.0, config.jitter_sigma, len(pts))[:, None] * normals
        else:
            pts += rng.normal(0.0, config.jitter_sigma, (len(pts), 2))
    truth = ScanTruth(shape, shape.truth_vertices(), s_kept, idx, clean, normals)
    return pts, truth


# -- shape builders ---------------------------------------------------------

def polygon(vertices, closed: bool = True) -> ShapeSpec:
    v = [as_point(p) for p in vertices]
    n = len(v)
    rng = range(n) if closed else range(n - 1)
    pieces = tuple(ArcSeg.segment(v[i], v[(i + 1) % n], source="truth") for i in rng)
    return ShapeSpec(pieces, closed)


def regular_polygon(n: int, side: float, center=(0.0, 0.0), rotation: float = 0.0) -> ShapeSpec:
    r = side / (2.0 * math.sin(math.pi / n))
    c = as_point(center)
    verts = [(c[0] + r * math.cos(rotation + 2.0 * math.pi * k / n),
              c[1] + r * math.sin(rotation + 2.0 * math.pi * k / n)) for k in range(n)]
    return polygon(verts)


def pentagon(side: float = 50.0) -> ShapeSpec:
    return regular_polygon(5, side, rotation=math.pi / 2.0)


def rounded_polygon(vertices, radius: float) -> ShapeSpec:
    """Closed polygon with every vertex replaced by a tangent fillet of ``radius``.

    The returned truth vertices are the original sharp vertices.
    """
    v = [as_point(p) for p in vertices]
    n = len(v)
    # counter-clockwise orientation keeps the fillet arcs ccw at convex vertices
    area = sum(cross(v[i], v[(i + 1) % n]) for i in range(n))
    if area < 0:
        v = v[::-1]
    fil = []
    for i in range(n):
        a, b, c = v[i - 1], v[i], v[(i + 1) % n]
        u1, u2 = unit(sub(a, b)), unit(sub(c, b))
        half = 0.5 * math.acos(max(-1.0, min(1.0, dot(u1, u2))))
        off = radius / math.tan(half)
        if off >= 0.5 * min(dist(a, b), dist(b, c)):
            raise ValueError(f"radius {radius} too large for vertex {i}")
        t1 = (b[0] + off * u1[0], b[1] + off * u1[1])
        t2 = (b[0] + off * u2[0], b[1] + off * u2[1])
        bis = unit((u1[0] + u2[0], u1[1] + u2[1]))
        h = radius / math.sin(half)
        center = (b[0] + h * bis[0], b[1] + h * bis[1])
        convex = cross(sub(b, a), sub(c, b)) > 0.0
        fil.append(ArcSeg.arc(t1, t2, center, ccw=convex, source="truth"))
    pieces = []
    for i in range(n):
        pieces.append(fil[i])
        pieces.append(ArcSeg.segment(fil[i].end, fil[(i + 1) % n].start, source="truth"))
    return ShapeSpec(tuple(pieces), True, tuple(v))


def arc_polygon(vertices, bulges) -> ShapeSpec:
    """Closed polygon whose edges may be circular arcs; the vertices stay sharp.

    ``bulges[k]`` is the sagitta of edge k over its chord length, positive
    outward (the polygon is taken counter-clockwise); 0 keeps a straight edge.
    """
    v = [as_point(p) for p in vertices]
    n = len(v)
    bulges = list(bulges)
    if len(bulges) != n:
        raise ValueError("need one bulge per edge")
    if sum(cross(v[i], v[(i + 1) % n]) for i in range(n)) < 0:
        # reversed edge k is original edge n-2-k; outward stays outward
        v = v[::-1]
        bulges = [bulges[(n - 2 - k) % n] for k in range(n)]
    pieces = []
    for k in range(n):
        a, b, h = v[k], v[(k + 1) % n], bulges[k]
        if not abs(h) < 0.5:
            raise ValueError("bulge must lie in (-0.5, 0.5)")
        if h == 0.0:
            pieces.append(ArcSeg.segment(a, b, source="truth"))
            continue
        L = dist(a, b)
        s = abs(h) * L
        r = (0.25 * L * L + s * s) / (2.0 * s)
        u = unit(sub(b, a))
        # outward is the right of travel for a ccw polygon
        side = (u[1], -u[0]) if h > 0 else (-u[1], u[0])
        mid = (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
        c = (mid[0] - (r - s) * side[0], mid[1] - (r - s) * side[1])
        pieces.append(ArcSeg.arc(a, b, c, ccw=h > 0, source="truth"))
    return ShapeSpec(tuple(pieces), True)


def star(n_points: int = 5, r_outer: float = 60.0, r_inner: float = 30.0, rotation: float = math.pi / 2) -> list:
    """Vertices of a star polygon (alternating outer and inner radius)."""
    out = []
    for k in range(2 * n_points):
        r = r_outer if k % 2 == 0 else r_inner
        a = rotation + math.pi * k / n_points
        out.append((r * math.cos(a), r * math.sin(a)))
    return out


def arc_decagon(size: float = 150.0, bulge: float = 0.05) -> ShapeSpec:
    """The rectilinear decagon with every other edge bowed outward."""
    return arc_polygon(rectilinear_decagon(size), [bulge if k % 2 else 0.0 for k in range(10)])


def rectilinear_decagon(size: float = 60.0) -> list:
    """Ten-vertex L/step shaped outline (all turns are right angles)."""
    s = size
    return [(0, 0), (s, 0), (s, 0.5 * s), (0.75 * s, 0.5 * s), (0.75 * s, 0.75 * s),
            (0.5 * s, 0.75 * s), (0.5 * s, s), (0.25 * s, s), (0.25 * s, 0.5 * s), (0, 0.5 * s)]


# -- text format ------------------------------------------------------------

def parse_shape(text: str, vertices=None) -> ShapeSpec:
    """Read ``L x1 y1 x2 y2`` and ``A x1 y1 x2 y2 cx cy cw|ccw`` lines (``#`` comments)."""
    pieces = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0].upper() == "L" and len(tok) == 5:
                x1, y1, x2, y2 = map(float, tok[1:])
                pieces.append(ArcSeg.segment((x1, y1), (x2, y2), source="truth"))
            elif tok[0].upper() == "A" and len(tok) == 8:
                x1, y1, x2, y2, cx, cy = map(float, tok[1:7])
                if tok[7].lower() not in ("cw", "ccw"):
                    raise ParseError(f"orientation must be cw or ccw, got {tok[7]!r}", ln)
                pieces.append(ArcSeg.arc((x1, y1), (x2, y2), (cx, cy), tok[7].lower() == "ccw", source="truth"))
            else:
                raise ParseError(f"cannot parse {raw.strip()!r}", ln)
        except ValueError as exc:
            raise ParseError(str(exc), ln) from None
    if not pieces:
        raise ParseError("shape has no pieces")
    closed = len(pieces) > 1 and dist(pieces[-1].end, pieces[0].start) <= 1e-9
    try:
        return ShapeSpec(tuple(pieces), closed, None if vertices is None else tuple(vertices))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_shape(shape: ShapeSpec) -> str:
    lines = []
    for p in shape.pieces:
        if p.is_arc:
            lines.append("A %r %r %r %r %r %r %s" % (*p.start, *p.end, *p.center, "ccw" if p.ccw else "cw"))
        else:
            lines.append("L %r %r %r %r" % (*p.start, *p.end))
    return "\n".join(lines) + "\n"
