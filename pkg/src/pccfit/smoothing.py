"""Junction classification and local smoothing of bad junctions.

Junction ``k`` of a curve is the shared point of ``segs[k-1]`` and
``segs[k]`` (for a closed curve, junction 0 joins the last piece to the
first).  A junction is bad when the tangent dot product there is below
``eps_good``; bad junctions are replaced either by a biarc between two points
at distance ``delta`` from the junction or by a single fillet arc tangent to
both neighbours.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .biarc import build_biarc, build_double_biarc
from .errors import (
    DeltaTooLarge,
    DeltaTooSmall,
    DenominatorZero,
    DuplicatePoints,
    Inadmissible,
    NegativeBeta,
    NeighborTooShort,
    NoFilletExists,
)
from .geom import (
    ArcSeg,
    Circle,
    Line,
    PccCurve,
    add,
    as_point,
    circle_circle_intersection,
    cross,
    dist,
    dot,
    intersect,
    norm,
    rot90,
    scale,
    sub,
    unit,
)

log = logging.getLogger(__name__)

EPS_GOOD_DEFAULT = 0.995
METHODS = ("none", "biarc", "fillet")


@dataclass
class JunctionReport:
    """``index`` numbers junctions of the input curve (0 is the seam of a closed one)."""

    index: int
    cos_angle: float
    verdict: str
    fix: str = "none"
    detail: str = ""

    @property
    def bad(self) -> bool:
        return self.verdict == "bad"


def classify_junction(t_prev_end, t_next_start, eps_good: float = EPS_GOOD_DEFAULT, index: int = -1) -> JunctionReport:
    if not 0.0 <= eps_good < 1.0:
        raise ValueError("eps_good must lie in [0, 1)")
    c = max(-1.0, min(1.0, dot(as_point(t_prev_end), as_point(t_next_start))))
    return JunctionReport(index, c, "bad" if c < eps_good else "good")


def junction_cosines(curve: PccCurve) -> list:
    """(index, cos) for every junction, the seam included when the curve is closed."""
    segs = curve.segs
    out = [(k, dot(segs[k - 1].tangent_at("end"), segs[k].tangent_at("start"))) for k in range(1, len(segs))]
    if curve.closed:
        out.insert(0, (0, dot(segs[-1].tangent_at("end"), segs[0].tangent_at("start"))))
    return out


# -- points at a given distance from a piece end -----------------------------

def point_at_distance(piece: ArcSeg, delta: float, from_end: bool):
    """Point of ``piece`` at straight-line distance ``delta`` from one of its ends."""
    anchor = piece.end if from_end else piece.start
    other = piece.start if from_end else piece.end
    if not piece.is_arc:
        L = dist(piece.start, piece.end)
        if delta >= L:
            raise NeighborTooShort(f"segment of length {L:.6g} shorter than delta {delta:.6g}")
        return add(anchor, scale(unit(sub(other, anchor)), delta))
    if delta >= 2.0 * piece.radius:
        raise NeighborTooShort("delta exceeds the arc diameter")
    cands = circle_circle_intersection(Circle(piece.center, piece.radius), Circle(anchor, delta))
    # walk from the anchor into the piece: keep the candidate inside the angular span
    inside = [p for p in cands if piece.contains_angle(p)]
    if not inside:
        raise NeighborTooShort("no point of the piece at distance delta from its end")
    # of two candidates inside (arc longer than a half turn), take the one nearer along the arc
    p = min(inside, key=lambda q: _arc_param(piece, q, from_end))
    if _arc_param(piece, p, from_end) >= piece.sweep - 1e-12:
        raise NeighborTooShort("piece too short for delta")
    return _onto(piece, p)


def _arc_param(piece: ArcSeg, p, from_end: bool) -> float:
    ref = piece.end if from_end else piece.start
    a0 = math.atan2(ref[1] - piece.center[1], ref[0] - piece.center[0])
    a = math.atan2(p[1] - piece.center[1], p[0] - piece.center[0])
    fwd = piece.ccw != from_end
    d = (a - a0) if fwd else (a0 - a)
    return d % (2.0 * math.pi)


def _onto(piece: ArcSeg, p):
    if not piece.is_arc:
        return as_point(p)
    return add(piece.center, scale(unit(sub(p, piece.center)), piece.radius))


def _trim_end(piece: ArcSeg, p) -> ArcSeg:
    return piece.with_end(p)


def _trim_start(piece: ArcSeg, p) -> ArcSeg:
    return piece.with_start(p)


def _deviation(pieces, p) -> float:
    return float(min(s.distance_to([p])[0] for s in pieces))


def _neighbours(curve: PccCurve, k: int):
    segs = curve.segs
    if k == 0:
        if not curve.closed:
            raise IndexError("junction 0 exists only on closed curves")
        return len(segs) - 1, 0
    if not 0 < k < len(segs):
        raise IndexError(f"no junction {k}")
    return k - 1, k


def _splice(curve: PccCurve, k: int, prev: ArcSeg, mid: list, nxt: ArcSeg) -> PccCurve:
    segs = list(curve.segs)
    a, b = _neighbours(curve, k)
    if k == 0:
        # rotate so the seam becomes an interior junction
        body = segs[1:-1]
        return PccCurve([nxt] + body + [prev] + mid)
    return PccCurve(segs[:a] + [prev] + mid + [nxt] + segs[b + 1:])


def smooth_with_biarc(curve: PccCurve, k: int, delta: float, epsilon: float, ratio: float = 1.0):
    """Replace junction ``k`` by a biarc between points at distance ``delta`` on both neighbours.

    Returns ``(curve, biarc_pieces)``.
    """
    a, b = _neighbours(curve, k)
    prev, nxt = curve.segs[a], curve.segs[b]
    pk = nxt.start
    q0 = point_at_distance(prev, delta, from_end=True)
    q1 = point_at_distance(nxt, delta, from_end=False)
    t0, t1 = prev.tangent_at_point(q0), nxt.tangent_at_point(q1)
    pieces = _biarc_pieces(q0, t0, q1, t1, ratio)
    dev = _deviation(pieces, pk)
    if dev > epsilon:
        raise DeltaTooLarge(f"biarc passes {dev:.6g} from the junction (tolerance {epsilon:.6g})")
    if dev < 1e-6:
        raise DeltaTooSmall("biarc is indistinguishable from the junction")
    new_prev, new_next = _trim_end(prev, q0), _trim_start(nxt, q1)
    pieces[0] = _trim_start(pieces[0], new_prev.end)
    pieces[-1] = _trim_end(pieces[-1], new_next.start)
    return _splice(curve, k, new_prev, pieces, new_next), pieces


def _biarc_pieces(q0, t0, q1, t1, ratio):
    errs = (Inadmissible, NegativeBeta, DenominatorZero, ValueError)
    for kw in ({"ratio": ratio}, {}):
        try:
            return list(build_biarc(q0, t0, q1, t1, source="biarc", **kw).arcs)
        except errs:
            continue
    try:
        return build_double_biarc(q0, t0, q1, t1, source="biarc")
    except errs as exc:
        raise Inadmissible(f"no smoothing biarc: {exc}") from None


# -- fillet ----------------------------------------------------------------

def smooth_with_fillet(curve: PccCurve, k: int, rho: float):
    """Round junction ``k`` with an arc of radius ``rho`` tangent to both neighbours.

    Returns ``(curve, fillet_piece)``.
    """
    if not rho > 0.0:
        raise NoFilletExists("fillet radius must be positive")
    a, b = _neighbours(curve, k)
    prev, nxt = curve.segs[a], curve.segs[b]
    pk = nxt.start
    out_prev = scale(prev.tangent_at("end"), -1.0)
    out_next = nxt.tangent_at("start")
    bis = add(out_prev, out_next)
    if norm(bis) < 1e-12:
        raise NoFilletExists("neighbours are tangent; nothing to round")
    bis = unit(bis)
    off_prev = _offset_obj(prev, pk, bis, rho)
    off_next = _offset_obj(nxt, pk, bis, rho)
    cands = list(intersect(off_prev, off_next))
    if not cands:
        raise NoFilletExists(f"offsets do not meet for rho={rho:.6g}")
    # keep centers inside the wedge, nearest to the junction
    cands.sort(key=lambda c: dist(c, pk))
    for c in cands:
        if dot(sub(c, pk), bis) <= 0.0:
            continue
        try:
            t_prev = _foot(prev, c)
            t_next = _foot(nxt, c)
        except NoFilletExists:
            continue
        if not (_on_piece(prev, t_prev) and _on_piece(nxt, t_next)):
            continue
        if dist(t_prev, prev.start) < 1e-12 or dist(t_next, nxt.end) < 1e-12:
            continue
        new_prev, new_next = _trim_end(prev, t_prev), _trim_start(nxt, t_next)
        ccw = cross(sub(new_prev.end, c), prev.tangent_at_point(t_prev)) > 0.0
        fil = ArcSeg("arc", new_prev.end, new_next.start, c, rho, ccw, "fillet")
        if fil.sweep >= math.pi:
            continue
        return _splice(curve, k, new_prev, [fil], new_next), fil
    raise NoFilletExists(f"no fillet of radius {rho:.6g} fits between the neighbours")


def _offset_obj(piece: ArcSeg, pk, bis, rho):
    if not piece.is_arc:
        d = unit(sub(piece.end, piece.start))
        n = rot90(d)
        s = 1.0 if dot(n, bis) >= 0.0 else -1.0
        return Line(add(piece.start, scale(n, s * rho)), d)
    u = unit(sub(pk, piece.center))
    r = piece.radius - rho if dot(bis, u) < 0.0 else piece.radius + rho
    if r <= 0.0:
        raise NoFilletExists("offset circle collapses")
    return Circle(piece.center, r)


def _foot(piece: ArcSeg, c):
    if not piece.is_arc:
        d = unit(sub(piece.end, piece.start))
        return add(piece.start, scale(d, dot(sub(c, piece.start), d)))
    v = sub(c, piece.center)
    if norm(v) == 0.0:
        raise NoFilletExists("fillet center at the neighbour's center")
    return add(piece.center, scale(unit(v), piece.radius))


def _on_piece(piece: ArcSeg, p) -> bool:
    return piece.contains_angle(p)


def fillet_deviation(fillet: ArcSeg, pk) -> float:
    return float(fillet.distance_to([pk])[0])


def largest_fillet(curve: PccCurve, k: int, epsilon: float, iters: int = 50, accept=None):
    """Fillet with the largest radius whose distance to the junction stays within ``epsilon``.

    ``accept(curve)``, when given, must also hold for the filleted curve.
    """
    a, b = _neighbours(curve, k)
    pk = curve.segs[b].start
    hi = max(curve.segs[a].length, curve.segs[b].length)

    def ok(rho):
        try:
            c, fil = smooth_with_fillet(curve, k, rho)
        except (NoFilletExists, DuplicatePoints, ValueError):
            return None
        if fillet_deviation(fil, pk) > epsilon or (accept is not None and not accept(c)):
            return None
        return c, fil

    lo, best = 0.0, None
    # shrink the upper end until something fits, then bisect
    r = hi
    for _ in range(60):
        got = ok(r)
        if got is not None:
            lo, best = r, got
            break
        hi, r = r, 0.5 * r
    if best is None:
        raise NoFilletExists("no fillet within tolerance")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        got = ok(mid)
        if got is not None:
            lo, best = mid, got
        else:
            hi = mid
        if hi - lo <= 1e-9 * max(hi, 1.0):
            break
    return best[0], best[1], lo


# -- driver ------------------------------------------------------------------

@dataclass
class SmoothingResult:
    curve: PccCurve
    reports: list
    notes: list = field(default_factory=list)

    @property
    def unfixable(self) -> list:
        return [r for r in self.reports if r.fix == "unfixable"]


def default_delta(points, epsilon: float, prev: ArcSeg, nxt: ArcSeg) -> float:
    pts = np.asarray(points, dtype=float)
    med = float(np.median(np.hypot(*np.diff(pts, axis=0).T))) if len(pts) > 1 else epsilon
    d = max(2.0 * med, 4.0 * epsilon)
    return min(d, 0.5 * min(prev.length, nxt.length))


def smooth_curve(curve: PccCurve, method: str = "biarc", epsilon: float = 0.5,
                 eps_good: float = EPS_GOOD_DEFAULT, delta: float | None = None,
                 rho: float | None = None, points=None, keep=(), max_halvings: int = 8) -> SmoothingResult:
    """Fix every bad junction left to right; failures are reported as unfixable.

    ``keep`` lists junction points (coordinates) that must stay sharp; they are
    reported bad with ``fix='unfixable'`` and detail ``'kept'``.  With
    ``points``, a fix is only accepted if every point within ``epsilon`` of
    the curve stays within it; otherwise delta (or the fillet radius) shrinks,
    and the junction is left sharp and reported when nothing fits.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    reports, notes = [], []
    if method == "none" or len(curve) < 2:
        for k, c in junction_cosines(curve):
            reports.append(JunctionReport(k, c, "bad" if c < eps_good else "good"))
        return SmoothingResult(curve, reports, notes)
    keep = [as_point(p) for p in keep]
    pts = points if points is not None else np.vstack([s.start for s in curve.segs] + [curve.segs[-1].end])
    k = visit = 1
    done_seam = not curve.closed
    while True:
        if k >= len(curve.segs):
            if done_seam:
                break
            k, done_seam = 0, True
        a, b = _neighbours(curve, k)
        prev, nxt = curve.segs[a], curve.segs[b]
        rep = classify_junction(prev.tangent_at("end"), nxt.tangent_at("start"), eps_good, k)
        rep.index = visit if k else 0
        visit += 1
        reports.append(rep)
        if not rep.bad:
            k = k + 1 if k else len(curve.segs)
            continue
        if any(dist(nxt.start, p) <= 1e-9 for p in keep):
            rep.fix, rep.detail = "unfixable", "kept"
            k = k + 1 if k else len(curve.segs)
            continue
        accept = _cover_guard(curve, points, epsilon)
        try:
            if method == "biarc":
                curve, added = _try_biarc(curve, k, epsilon, delta, pts, max_halvings, accept)
            else:
                if rho is None:
                    curve, fil, _ = largest_fillet(curve, k, epsilon, accept=accept)
                else:
                    c, fil = smooth_with_fillet(curve, k, rho)
                    if accept is not None and not accept(c):
                        raise NoFilletExists(f"fillet of radius {rho} uncovers data points")
                    curve = c
                added = [fil]
            rep.fix = method
            if k == 0:
                break
            k = k + len(added) + 1
        except (DeltaTooLarge, DeltaTooSmall, NeighborTooShort, NoFilletExists, Inadmissible,
                DuplicatePoints, ValueError) as exc:
            rep.fix, rep.detail = "unfixable", f"{type(exc).__name__}: {exc}"
            k = k + 1 if k else len(curve.segs)
    if points is not None:
        res = curve.distance_to(points)
        bad = np.flatnonzero(res > epsilon)
        if len(bad):
            notes.append(f"{len(bad)} data point(s) farther than {epsilon} from the smoothed curve")
    return SmoothingResult(curve, reports, notes)


def _cover_guard(curve: PccCurve, points, epsilon: float):
    """Predicate: a changed curve keeps every currently covered point within ``epsilon``."""
    if points is None:
        return None
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    covered = pts[curve.distance_to(pts) <= epsilon]
    if not len(covered):
        return None
    return lambda c: bool(np.all(c.distance_to(covered) <= epsilon))


def _try_biarc(curve, k, epsilon, delta, pts, max_halvings, accept=None):
    a, b = _neighbours(curve, k)
    d = delta if delta is not None else default_delta(pts, epsilon, curve.segs[a], curve.segs[b])
    last = None
    for _ in range(max_halvings + 1):
        try:
            c, added = smooth_with_biarc(curve, k, d, epsilon)
            if accept is None or accept(c):
                return c, added
            last = DeltaTooLarge(f"delta {d:g} uncovers data points")
        except DeltaTooLarge as exc:
            last = exc
        d *= 0.5
    raise last
