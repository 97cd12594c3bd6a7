"""Planar primitives: circles, lines, arc/segment pieces and their constructions.

Points and vectors are plain ``(x, y)`` float tuples (millimetres); batches of
points are ``(n, 2)`` numpy arrays.  Arcs are stored by endpoints, center and
orientation so that C0 chaining is a plain endpoint comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedCurve, DuplicatePoints

R_DEGENERATE = 1e7
TWO_PI = 2.0 * math.pi

# Constructions that emit a straight segment by rule.  Every other source
# (fit, gap-circle, gap-biarc, biarc, fillet) is an arc construction, even when
# the resulting piece happens to be straight.
SEGMENT_SOURCES = frozenset({"gap-segment", "tail", "chain"})

Point2 = tuple
Vec2 = tuple


def as_point(p) -> tuple[float, float]:
    return (float(p[0]), float(p[1]))


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def scale(a, s):
    return (a[0] * s, a[1] * s)


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def norm(a):
    return math.hypot(a[0], a[1])


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a):
    n = math.hypot(a[0], a[1])
    if n == 0.0:
        raise ValueError("zero-length vector has no direction")
    return (a[0] / n, a[1] / n)


def rot90(a):
    """Rotate counterclockwise by pi/2."""
    return (-a[1], a[0])


def lerp(a, b, s):
    return (a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s)


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"invalid circle radius {self.radius!r}")


@dataclass(frozen=True)
class Line:
    """Infinite line through ``point`` with unit ``direction``."""

    point: tuple
    direction: tuple


# Returned by fits and three-point constructions when the data is straight.
CollinearLine = Line


def circle_through_three(a, b, c, r_degenerate: float = R_DEGENERATE):
    """Circle through three points, or a :class:`Line` when they are (nearly) collinear."""
    a, b, c = as_point(a), as_point(b), as_point(c)
    if a == b or b == c or a == c:
        raise DuplicatePoints(f"coincident points among {a}, {b}, {c}")
    # Translate to the centroid so the formula is symmetric in its arguments.
    ox = (a[0] + b[0] + c[0]) / 3.0
    oy = (a[1] + b[1] + c[1]) / 3.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    den = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    sa, sb, sc = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    span = max(dist(a, b), dist(b, c), dist(a, c))
    if den == 0.0:
        return _chord_line(a, b, c)
    ux = (sa * (by - cy) + sb * (cy - ay) + sc * (ay - by)) / den
    uy = (sa * (cx - bx) + sb * (ax - cx) + sc * (bx - ax)) / den
    center = (ux + ox, uy + oy)
    r = dist(center, a)
    if not math.isfinite(r) or r > r_degenerate or r > 1e15 * span:
        return _chord_line(a, b, c)
    return Circle(center, r)


def _chord_line(*pts):
    # direction of the longest pair keeps the line well conditioned
    best = max(((p, q) for i, p in enumerate(pts) for q in pts[i + 1:]), key=lambda pq: dist(*pq))
    return Line(best[0], unit(sub(best[1], best[0])))


def circle_circle_intersection(c1: Circle, c2: Circle, tol: float = 1e-9) -> list:
    """Intersection points of two circles (0, 1 or 2), sorted lexicographically.

    ``tol`` is relative to the larger radius, so the tangency decision does
    not depend on the unit of length.
    """
    (x1, y1), r1 = c1.center, c1.radius
    (x2, y2), r2 = c2.center, c2.radius
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    tol = tol * max(r1, r2)
    if d <= tol:
        # concentric: coincident or disjoint, no isolated intersection
        return []
    if abs(d - (r1 + r2)) < tol or abs(d - abs(r1 - r2)) < tol:
        # tangent: the single contact lies on the center line
        s = r1 if abs(d - (r1 + r2)) < tol or r1 > r2 else -r1
        return [(x1 + dx / d * s, y1 + dy / d * s)]
    if d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (d * d + (r1 - r2) * (r1 + r2)) / (2.0 * d)
    h2 = (r1 - a) * (r1 + a)
    h = math.sqrt(max(h2, 0.0))
    mx, my = x1 + a * dx / d, y1 + a * dy / d
    pts = [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]
    return sorted(pts)


def line_line_intersection(l1: Line, l2: Line) -> list:
    den = cross(l1.direction, l2.direction)
    if abs(den) < 1e-12:
        return []
    s = cross(sub(l2.point, l1.point), l2.direction) / den
    return [add(l1.point, scale(l1.direction, s))]


def line_circle_intersection(line: Line, circle: Circle, tol: float = 1e-9) -> list:
    """Points where ``line`` meets ``circle``; ``tol`` is relative to the radius."""
    d = line.direction
    w = sub(circle.center, line.point)
    s0 = dot(w, d)
    foot = add(line.point, scale(d, s0))
    off = dist(circle.center, foot)
    r = circle.radius
    if abs(off - r) < tol * r:
        return [foot]
    if off > r:
        return []
    h = math.sqrt((r - off) * (r + off))
    return sorted([add(foot, scale(d, -h)), add(foot, scale(d, h))])


def intersect(a, b) -> list:
    """Intersect any two of :class:`Circle` / :class:`Line`."""
    if isinstance(a, Circle) and isinstance(b, Circle):
        return circle_circle_intersection(a, b)
    if isinstance(a, Line) and isinstance(b, Line):
        return line_line_intersection(a, b)
    if isinstance(a, Line):
        return line_circle_intersection(a, b)
    return line_circle_intersection(b, a)


def radial_residual(p, c: Circle) -> float:
    return abs(c.radius - dist(p, c.center))


def distance_to_object(points, obj) -> np.ndarray:
    """Unsigned distances from points to a circle or an infinite line."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if isinstance(obj, Circle):
        return np.abs(np.hypot(pts[:, 0] - obj.center[0], pts[:, 1] - obj.center[1]) - obj.radius)
    n = rot90(obj.direction)
    return np.abs((pts[:, 0] - obj.point[0]) * n[0] + (pts[:, 1] - obj.point[1]) * n[1])


@dataclass(frozen=True)
class ArcSeg:
    """One circular arc or straight segment of a piecewise circular curve.

    ``source`` records which construction produced the piece (see
    :data:`SEGMENT_SOURCES`); ``first``/``last`` are the 0-based data indices
    the piece spans, when it spans data.
    """

    kind: str
    start: tuple
    end: tuple
    center: tuple | None = None
    radius: float | None = None
    ccw: bool | None = None
    source: str = "fit"
    first: int | None = None
    last: int | None = None

    @classmethod
    def segment(cls, a, b, **kw) -> "ArcSeg":
        a, b = as_point(a), as_point(b)
        if a == b:
            raise DuplicatePoints(f"segment endpoints coincide at {a}")
        return cls("segment", a, b, **kw)

    @classmethod
    def arc(cls, start, end, center, ccw: bool, **kw) -> "ArcSeg":
        start, end, center = as_point(start), as_point(end), as_point(center)
        r = dist(start, center)
        if not abs(dist(end, center) - r) <= 1e-9 * max(r, 1.0):
            raise ValueError("arc endpoints are not equidistant from the center")
        return cls("arc", start, end, center, r, bool(ccw), **kw)

    @property
    def is_arc(self) -> bool:
        return self.kind == "arc"

    @property
    def sweep(self) -> float:
        """Central angle in [0, 2pi); zero for segments."""
        if not self.is_arc:
            return 0.0
        a0 = math.atan2(self.start[1] - self.center[1], self.start[0] - self.center[0])
        a1 = math.atan2(self.end[1] - self.center[1], self.end[0] - self.center[0])
        s = (a1 - a0) if self.ccw else (a0 - a1)
        return s % TWO_PI

    @property
    def length(self) -> float:
        if self.is_arc:
            return self.radius * self.sweep
        return dist(self.start, self.end)

    def tangent_at(self, which: str = "start") -> tuple:
        p = self.start if which == "start" else self.end
        return self.tangent_at_point(p)

    def tangent_at_point(self, p) -> tuple:
        if not self.is_arc:
            return unit(sub(self.end, self.start))
        r = sub(p, self.center)
        t = rot90(r) if self.ccw else (r[1], -r[0])
        return unit(t)

    def point_at(self, s: float) -> tuple:
        """Point at arclength fraction ``s`` in [0, 1]."""
        if not self.is_arc:
            return lerp(self.start, self.end, s)
        a0 = math.atan2(self.start[1] - self.center[1], self.start[0] - self.center[0])
        ang = a0 + (s if self.ccw else -s) * self.sweep
        return (self.center[0] + self.radius * math.cos(ang), self.center[1] + self.radius * math.sin(ang))

    def sample(self, n: int) -> np.ndarray:
        s = np.linspace(0.0, 1.0, n)
        if not self.is_arc:
            a, b = np.asarray(self.start), np.asarray(self.end)
            return a + s[:, None] * (b - a)
        a0 = math.atan2(self.start[1] - self.center[1], self.start[0] - self.center[0])
        ang = a0 + (1.0 if self.ccw else -1.0) * s * self.sweep
        pts = np.column_stack([self.center[0] + self.radius * np.cos(ang),
                               self.center[1] + self.radius * np.sin(ang)])
        pts[0], pts[-1] = self.start, self.end
        return pts

    def contains_angle(self, p) -> bool:
        """True when ``p`` projects radially inside the arc's angular span."""
        if not self.is_arc:
            d = sub(self.end, self.start)
            s = dot(sub(p, self.start), d) / dot(d, d)
            return 0.0 <= s <= 1.0
        return bool(self._in_span(np.asarray([p], dtype=float))[0])

    def _in_span(self, pts: np.ndarray) -> np.ndarray:
        a0 = math.atan2(self.start[1] - self.center[1], self.start[0] - self.center[0])
        ang = np.arctan2(pts[:, 1] - self.center[1], pts[:, 0] - self.center[0])
        rel = (ang - a0) if self.ccw else (a0 - ang)
        return np.mod(rel, TWO_PI) <= self.sweep + 1e-15

    def distance_to(self, points) -> np.ndarray:
        """Distance from each point to the piece (not to its supporting circle)."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        a, b = np.asarray(self.start), np.asarray(self.end)
        de = np.minimum(np.hypot(*(pts - a).T), np.hypot(*(pts - b).T))
        if not self.is_arc:
            d = b - a
            s = np.clip(((pts - a) @ d) / (d @ d), 0.0, 1.0)
            foot = a + s[:, None] * d
            return np.hypot(*(pts - foot).T)
        radial = np.abs(np.hypot(pts[:, 0] - self.center[0], pts[:, 1] - self.center[1]) - self.radius)
        return np.where(self._in_span(pts), np.minimum(radial, de), de)

    def with_start(self, p) -> "ArcSeg":
        """Same supporting geometry, new start point (assumed on the piece)."""
        return self._moved(as_point(p), self.end)

    def with_end(self, p) -> "ArcSeg":
        return self._moved(self.start, as_point(p))

    def _moved(self, start, end) -> "ArcSeg":
        if start == end:
            raise DuplicatePoints("trimmed piece collapses to a point")
        if not self.is_arc:
            return replace(self, start=start, end=end)
        # re-project onto the circle so the radius invariant survives rounding
        def onto(p):
            u = unit(sub(p, self.center))
            return add(self.center, scale(u, self.radius))
        start = start if start == self.start else onto(start)
        end = end if end == self.end else onto(end)
        return replace(self, start=start, end=end)

    def reversed(self) -> "ArcSeg":
        ccw = None if self.ccw is None else not self.ccw
        return replace(self, start=self.end, end=self.start, ccw=ccw, first=self.last, last=self.first)


def tangent_at(piece: ArcSeg, which: str = "start") -> tuple:
    return piece.tangent_at(which)


def arc_through_three(a, b, c, r_degenerate: float = R_DEGENERATE, **kw) -> ArcSeg:
    """Arc from ``a`` to ``c`` passing through ``b``; a segment a->c when collinear."""
    obj = circle_through_three(a, b, c, r_degenerate)
    if isinstance(obj, Line):
        return ArcSeg.segment(a, c, **kw)
    ccw = cross(sub(b, a), sub(c, b)) > 0.0
    return ArcSeg.arc(a, c, obj.center, ccw, **kw)


def arc_from_center(start, end, center, ccw: bool, **kw) -> ArcSeg:
    """Arc with the given center, snapping ``end`` onto the start radius if needed."""
    start, end, center = as_point(start), as_point(end), as_point(center)
    r = dist(start, center)
    u = unit(sub(end, center))
    end = add(center, scale(u, r))
    return ArcSeg("arc", start, end, center, r, bool(ccw), **kw)


@dataclass
class PccCurve:
    """Ordered chain of arcs and segments."""

    segs: list = field(default_factory=list)

    def __len__(self):
        return len(self.segs)

    def __iter__(self):
        return iter(self.segs)

    def __getitem__(self, i):
        return self.segs[i]

    @property
    def n_arcs(self) -> int:
        return sum(1 for s in self.segs if s.is_arc)

    @property
    def n_segments(self) -> int:
        return sum(1 for s in self.segs if not s.is_arc)

    def construction_counts(self) -> tuple:
        """(arcs, segments) counted by the construction that produced each piece."""
        seg = sum(1 for s in self.segs if s.source in SEGMENT_SOURCES)
        return len(self.segs) - seg, seg

    def gaps(self, tol: float = 1e-9) -> list:
        """Indices ``i`` where ``segs[i].end`` does not meet ``segs[i+1].start``."""
        return [i for i in range(len(self.segs) - 1)
                if dist(self.segs[i].end, self.segs[i + 1].start) > tol]

    def is_chained(self, tol: float = 1e-9) -> bool:
        return not self.gaps(tol)

    def check_chained(self, tol: float = 1e-9):
        g = self.gaps(tol)
        if g:
            raise DisconnectedCurve(f"curve is broken after piece(s) {g}")

    @property
    def closed(self) -> bool:
        return len(self.segs) > 1 and dist(self.segs[-1].end, self.segs[0].start) <= 1e-9

    def distance_to(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if not self.segs:
            return np.full(len(pts), np.inf)
        return np.min([s.distance_to(pts) for s in self.segs], axis=0)

    def sample(self, per_piece: int = 32) -> np.ndarray:
        return np.vstack([s.sample(per_piece) for s in self.segs])

    @property
    def length(self) -> float:
        return sum(s.length for s in self.segs)


def polyline_spacing(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    return np.hypot(*np.diff(pts, axis=0).T)


def chain_segments(points: Sequence, source: str = "chain", offset: int = 0) -> list:
    pts = [as_point(p) for p in points]
    return [ArcSeg.segment(pts[i], pts[i + 1], source=source, first=offset + i, last=offset + i + 1)
            for i in range(len(pts) - 1)]


def concat(curves: Iterable) -> PccCurve:
    segs = []
    for c in curves:
        segs.extend(c.segs if isinstance(c, PccCurve) else c)
    return PccCurve(segs)
