"""Recover corners that fall between scan samples.

Anchor points are samples where the polyline turns sharply (turn cosine at
least ``-eps_turn``) on a small circle (circumradius below ``r_max``).  Each
anchor pair splits the data; a Taubin circle is grown backwards from the
first anchor and forwards from the second while it stays within ``delta`` of
its points, and the corner is the intersection of the two fits nearest the
first anchor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, DuplicatePoints, InsufficientPoints, NoIntersection
from .geom import R_DEGENERATE, Circle, as_point, circle_through_three, dist, distance_to_object, intersect
from .lsq import taubin_fit

log = logging.getLogger(__name__)

PAIR_RULES = ("sharper", "literal")


@dataclass(frozen=True)
class CornerParams:
    eps_turn: float = 0.9
    r_max: float = 20.0
    delta: float = 1.0
    m_limit: int = 30
    pair_rule: str = "sharper"
    r_degenerate: float = R_DEGENERATE

    def __post_init__(self):
        if not 0.0 <= self.eps_turn < 1.0:
            raise ValueError("eps_turn must lie in [0, 1)")
        if not (self.r_max > 0.0 and self.delta > 0.0 and self.r_degenerate > 0.0):
            raise ValueError("r_max, delta and r_degenerate must be positive")
        if self.m_limit < 4:
            raise ValueError("m_limit must be at least 4")
        if self.pair_rule not in PAIR_RULES:
            raise ValueError(f"pair_rule must be one of {PAIR_RULES}")


@dataclass
class AnchorDiagnostic:
    pair: tuple
    k: int | None = None
    h: int | None = None
    left: object = None
    right: object = None
    corner: tuple | None = None
    error: str | None = None


@dataclass
class CornerReport:
    anchors: list
    corners: list
    sections: list
    closed: bool = False
    diagnostics: list = field(default_factory=list)

    def section_points(self, points, j: int) -> np.ndarray:
        """Points of section ``j`` with its bounding corners attached."""
        return _section_points(np.asarray(points, dtype=float), self, j)


def _idx(i: int, n: int, closed: bool) -> int | None:
    if closed:
        return i % n
    return i if 0 <= i < n else None


def turn_cosine(points, i: int, closed: bool = False) -> float:
    """Cosine of the angle at ``P[i]`` between the directions to its two neighbours."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    a, c = _idx(i - 1, n, closed), _idx(i + 1, n, closed)
    if a is None or c is None:
        raise IndexError(f"point {i} lacks a neighbour")
    p = pts[i % n]
    t1, t2 = pts[a] - p, pts[c] - p
    n1, n2 = np.hypot(*t1), np.hypot(*t2)
    if n1 == 0.0 or n2 == 0.0:
        raise DuplicatePoints(f"point {i} coincides with a neighbour")
    return float(np.clip(np.dot(t1, t2) / (n1 * n2), -1.0, 1.0))


def _circumradius(a, b, c, r_degenerate: float = R_DEGENERATE) -> float:
    obj = circle_through_three(a, b, c, r_degenerate)
    return obj.radius if isinstance(obj, Circle) else np.inf


def anchor_mask(points, params: CornerParams, closed: bool = False):
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    cos = np.full(n, -1.0)
    mask = np.zeros(n, dtype=bool)
    idx = range(n) if closed else range(1, n - 1)
    for i in idx:
        cos[i] = turn_cosine(pts, i, closed)
        if cos[i] >= -params.eps_turn:
            p0, p2 = pts[(i - 1) % n], pts[(i + 1) % n]
            mask[i] = _circumradius(p0, pts[i], p2, params.r_degenerate) < params.r_max
    return mask, cos


def _clusters(mask, closed: bool) -> list:
    n = len(mask)
    idx = np.flatnonzero(mask).tolist()
    if not idx:
        return []
    runs = [[idx[0]]]
    for i in idx[1:]:
        if i == runs[-1][-1] + 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    if closed and len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == n - 1:
        runs[0] = runs.pop() + runs[0]
    if closed and len(runs) == 1 and len(runs[0]) == n:
        return []
    return runs


def find_anchor_pairs(points, params: CornerParams = CornerParams(), closed: bool = False) -> list:
    """One ``(i, i+1)`` index pair per cluster of consecutive anchor points.

    The pivot of a cluster is its sharpest point.  With ``pair_rule='sharper'``
    the pivot pairs with whichever neighbour turns more sharply; ``literal``
    pairs it with P[i+1] when ``cos[i+1] <= cos[i-1]``.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 5:
        return []
    mask, cos = anchor_mask(pts, params, closed)
    pairs = []
    used = set()
    for run in _clusters(mask, closed):
        i = max(run, key=lambda j: (cos[j], -j))
        prev, nxt = _idx(i - 1, n, closed), _idx(i + 1, n, closed)
        if prev is None:
            pair = (i, nxt)
        elif nxt is None:
            pair = (prev, i)
        else:
            forward = cos[nxt] <= cos[prev]
            if params.pair_rule == "sharper":
                forward = not forward if cos[nxt] != cos[prev] else True
            pair = (i, nxt) if forward else (prev, i)
        if pair[0] in used or pair[1] in used:
            continue
        used.update(pair)
        pairs.append(pair)
    pairs.sort()
    return pairs


def _fit(points, r_degenerate: float = R_DEGENERATE):
    if len(points) == 3:
        return circle_through_three(*points, r_degenerate=r_degenerate)
    return taubin_fit(points, r_degenerate)


def _max_dist(obj, points) -> float:
    return float(np.max(distance_to_object(points, obj)))


def grow_taubin_arcs(points, pair, params: CornerParams = CornerParams(), closed: bool = False):
    """Grow the two one-sided fits around an anchor pair.

    Returns ``(k, h, left, right)``: the left window is ``P[i-k..i]`` and the
    right one ``P[j..j+h-1]`` for the pair ``(i, j)``; ``left``/``right`` are
    :class:`Circle` or :class:`Line`.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    i, j = pair

    def left(k):
        if not closed and i - k < 0:
            return None
        if k + 1 > n - 1:
            return None
        return pts[[(i - q) % n for q in range(k + 1)]][::-1]

    def right(h):
        if not closed and j + h - 1 > n - 1:
            return None
        if h > n - 1:
            return None
        return pts[[(j + q) % n for q in range(h)]]

    if left(2) is None or right(3) is None:
        raise InsufficientPoints(f"anchor pair {pair} is too close to the data ends")
    k, h = 3, 4
    fk = fh = True
    M = params.m_limit
    while k <= M and h <= M:
        if fk:
            w = left(k)
            if w is not None and _grow_ok(w, params.delta, params.r_degenerate):
                k += 1
            else:
                fk = False
        if fh:
            w = right(h)
            if w is not None and _grow_ok(w, params.delta, params.r_degenerate):
                h += 1
            else:
                fh = False
        if not fk and not fh:
            break
    k, h = k - 1, h - 1
    rd = params.r_degenerate
    return k, h, _fit(left(k), rd), _fit(right(h), rd)


def _grow_ok(window, delta: float, r_degenerate: float = R_DEGENERATE) -> bool:
    try:
        obj = taubin_fit(window, r_degenerate)
    except DegenerateInput:
        return False
    return _max_dist(obj, window) < delta


def locate_corner(left, right, near):
    """Intersection of the two fits closest to ``near``."""
    cands = intersect(left, right)
    if not cands:
        raise NoIntersection("the two one-sided fits do not meet")
    near = as_point(near)
    return min(cands, key=lambda p: dist(p, near))


def detect_corners(points, params: CornerParams = CornerParams(), closed: bool = False) -> CornerReport:
    """Anchor pairs, recovered corners and the section decomposition."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 5:
        raise InsufficientPoints(f"corner detection needs at least 5 points, got {n}")
    anchors, corners, diags = [], [], []
    for pair in find_anchor_pairs(pts, params, closed):
        dg = AnchorDiagnostic(pair)
        try:
            k, h, lf, rf = grow_taubin_arcs(pts, pair, params, closed)
            dg.k, dg.h, dg.left, dg.right = k, h, lf, rf
            c = locate_corner(lf, rf, pts[pair[0]])
            dg.corner = c
            anchors.append(pair)
            corners.append(c)
        except (NoIntersection, InsufficientPoints, DegenerateInput, DuplicatePoints) as exc:
            dg.error = f"{type(exc).__name__}: {exc}"
            log.info("anchor pair %s dropped: %s", pair, dg.error)
        diags.append(dg)
    sections = _sections(n, anchors, closed)
    return CornerReport(anchors, corners, sections, closed, diags)


def _sections(n: int, anchors: list, closed: bool) -> list:
    """Index ranges (inclusive, possibly wrapping when closed) between corners."""
    if not anchors:
        return [(0, n - 1)]
    if not closed:
        out = []
        start = 0
        for a, b in anchors:
            out.append((start, a))
            start = b
        out.append((start, n - 1))
        return out
    out = []
    for q in range(len(anchors)):
        b = anchors[q][1]
        a = anchors[(q + 1) % len(anchors)][0]
        out.append((b, a))
    return out


def section_indices(sec, n: int) -> list:
    a, b = sec
    if b >= a:
        return list(range(a, b + 1))
    return list(range(a, n)) + list(range(0, b + 1))


def _section_points(pts: np.ndarray, rep: CornerReport, j: int) -> np.ndarray:
    n = len(pts)
    idx = section_indices(rep.sections[j], n)
    body = [tuple(pts[i]) for i in idx]
    m = len(rep.corners)
    if m == 0:
        if rep.closed:
            body.append(body[0])
        return np.asarray(body)
    if rep.closed:
        head, tail = rep.corners[j], rep.corners[(j + 1) % m]
    else:
        head = rep.corners[j - 1] if j > 0 else None
        tail = rep.corners[j] if j < m else None
    if head is not None:
        body = _attach(body, head, front=True)
    if tail is not None:
        body = _attach(body, tail, front=False)
    return np.asarray(body)


def _attach(body, corner, front: bool, tol: float = 1e-9):
    corner = as_point(corner)
    if front:
        if dist(body[0], corner) <= tol:
            body = body[1:]
        return [corner] + body
    if dist(body[-1], corner) <= tol:
        body = body[:-1]
    return body + [corner]


def improve_dataset(points, gap_factor: float = 3.0) -> np.ndarray:
    """Insert one point into every spacing gap wider than ``gap_factor`` times the median.

    The new point is the intersection, nearest the gap's chord midpoint, of
    the circles through the three samples on either side.  When both sides
    lie on one circle the midpoint is projected onto it; when the circles do
    not meet, or meet farther away than the gap is wide, the chord midpoint
    itself is used.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 2:
        return pts.copy()
    step = np.hypot(*np.diff(pts, axis=0).T)
    med = float(np.median(step))
    out = [tuple(pts[0])]
    for i in range(n - 1):
        if step[i] > gap_factor * med:
            out.append(_gap_point(pts, i))
        out.append(tuple(pts[i + 1]))
    return np.asarray(out)


def _gap_point(pts, i):
    a, b = pts[i], pts[i + 1]
    mid = (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
    if i < 2 or i + 3 >= len(pts):
        return mid
    try:
        lf = circle_through_three(*pts[i - 2:i + 1])
        rf = circle_through_three(*pts[i + 1:i + 4])
    except DuplicatePoints:
        return mid
    if isinstance(lf, Circle) and isinstance(rf, Circle) and _same_circle(lf, rf):
        # one circle through both sides: put the point on it
        c, r = lf.center, lf.radius
        d = dist(mid, c)
        return mid if d == 0.0 else (c[0] + (mid[0] - c[0]) * r / d, c[1] + (mid[1] - c[1]) * r / d)
    cands = intersect(lf, rf)
    if not cands:
        return mid
    p = min(cands, key=lambda q: dist(q, mid))
    if dist(p, mid) > dist(a, b):
        return mid
    return p



def _same_circle(a: Circle, b: Circle, rel: float = 1e-6) -> bool:
    scale = max(a.radius, b.radius)
    return dist(a.center, b.center) <= rel * scale and abs(a.radius - b.radius) <= rel * scale
