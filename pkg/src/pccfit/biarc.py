"""Constrained biarcs and the rational quadratic Bezier form of arcs.

A biarc from ``ps`` (tangent ``ts``) to ``pe`` (tangent ``te``) is fixed by the
control points ``P1 = ps + alpha*ts`` and ``P3 = pe - beta*te`` with
``|P3 - P1| = alpha + beta``; the junction is
``P2 = (beta*P1 + alpha*P3) / (alpha + beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CollinearControls,
    DenominatorZero,
    Inadmissible,
    NegativeBeta,
    OutOfDomain,
)
from .geom import (
    ArcSeg,
    PccCurve,
    add,
    as_point,
    cross,
    dist,
    dot,
    lerp,
    norm,
    rot90,
    scale,
    sub,
    unit,
)

MIN_SWEEP = 1e-7


def _frame(ps, ts, pe, te):
    ps, pe = as_point(ps), as_point(pe)
    ts, te = unit(as_point(ts)), unit(as_point(te))
    return ps, ts, pe, te, sub(pe, ps)


def biarc_admissible(ps, ts, pe, te) -> bool:
    """True when a single biarc with positive alpha and beta exists."""
    ps, ts, pe, te, v = _frame(ps, ts, pe, te)
    c = dot(ts, te)
    if 1.0 - c <= 1e-12:
        return False
    vv = dot(v, v)
    rhs = 2.0 * dot(v, ts) * dot(v, te) / (c - 1.0)
    return abs(vv - rhs) > 1e-10 * max(vv, abs(rhs))


def biarc_admissible_angles(ps, ts, pe, te) -> bool:
    """Same test written with the angles between V, ts and te."""
    ps, ts, pe, te, v = _frame(ps, ts, pe, te)
    c3 = dot(ts, te)
    if 1.0 - c3 <= 1e-12:
        return False
    vn = unit(v)
    c1, c2 = dot(vn, ts), dot(vn, te)
    lhs, rhs = c3, 2.0 * c1 * c2 + 1.0
    # relative to 1 - c3, matching the scaling of the vector form
    return abs(lhs - rhs) > 1e-10 * max(1.0 - c3, abs(2.0 * c1 * c2))


def beta_of_alpha(alpha: float, v, ts, te) -> float:
    v, ts, te = as_point(v), as_point(ts), as_point(te)
    den = 2.0 * alpha * (dot(ts, te) - 1.0) - 2.0 * dot(v, te)
    if abs(den) < 1e-14:
        raise DenominatorZero(f"beta undefined at alpha={alpha!r}")
    return (2.0 * alpha * dot(v, ts) - dot(v, v)) / den


def choose_alpha(v, ts, te) -> float:
    """A positive alpha giving positive beta, following the three sign cases of K."""
    v, ts, te = as_point(v), unit(as_point(ts)), unit(as_point(te))
    c = dot(ts, te)
    vv, vts, vte = dot(v, v), dot(v, ts), dot(v, te)
    if 1.0 - c <= 1e-12:
        raise Inadmissible("tangents are equal")
    d = math.sqrt(vv)
    a2 = vte / (c - 1.0)
    K = vts / (c - 1.0)
    if abs(vts) <= 1e-12 * d:
        alpha = max(a2, 0.0) + d / 2.0
    elif K > 0.0:
        alpha = max(a2, 0.0) + d / 2.0
    else:
        a1 = vv / (2.0 * vts)
        if abs(a1 - a2) <= 1e-10 * max(abs(a1), abs(a2)):
            raise Inadmissible("alpha_1 equals alpha_2")
        if a2 <= 0.0 < a1:
            alpha = 0.5 * a1
        else:
            alpha = 0.5 * (a1 + a2)
    beta = beta_of_alpha(alpha, v, ts, te)
    if not (alpha > 0.0 and beta > 0.0):
        raise Inadmissible(f"no positive alpha/beta pair (alpha={alpha}, beta={beta})")
    return alpha


def alpha_for_ratio(ratio: float, v, ts, te) -> float:
    """Alpha with ``alpha = ratio * beta`` on the closure condition (positive root)."""
    v, ts, te = as_point(v), unit(as_point(ts)), unit(as_point(te))
    c = dot(ts, te)
    # 2 r (c - 1) beta^2 - 2 (V.te + r V.ts) beta + V.V = 0, leading coeff < 0
    a = 2.0 * ratio * (c - 1.0)
    b = -2.0 * (dot(v, te) + ratio * dot(v, ts))
    cc = dot(v, v)
    if a >= 0.0:
        raise Inadmissible("tangents are equal")
    disc = b * b - 4.0 * a * cc
    # the roots have opposite signs; pick the positive one stably
    sq = math.sqrt(disc)
    beta = (2.0 * cc) / (-b + sq) if b < 0 else (-b - sq) / (2.0 * a)
    if not beta > 0.0 or not math.isfinite(beta):
        raise Inadmissible(f"no positive beta for ratio {ratio}")
    return ratio * beta


@dataclass(frozen=True)
class RationalArcBezier:
    """Circular arc as a rational quadratic Bezier with weights (1, cos theta, 1)."""

    p0: tuple
    p1: tuple
    p2: tuple
    w1: float
    theta: float
    center: tuple
    radius: float

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        b0, b1, b2 = (1 - t) ** 2, 2 * t * (1 - t) * self.w1, t * t
        den = b0 + b1 + b2
        x = (b0 * self.p0[0] + b1 * self.p1[0] + b2 * self.p2[0]) / den
        y = (b0 * self.p0[1] + b1 * self.p1[1] + b2 * self.p2[1]) / den
        if t.ndim == 0:
            return (float(x), float(y))
        return np.column_stack([x, y])


def arc_to_bezier(b0, b1, b2) -> RationalArcBezier:
    """Rational Bezier arc from its isosceles control triangle b0, b1, b2.

    The half sweep ``theta`` is the angle between the first leg and the chord,
    taken with atan2 so arcs close to a half turn keep their weight
    ``cos(theta)`` to full precision.  ``R = |b1 - b0| / tan(theta)`` and the
    center sits at distance ``|b1 - b0| / sin(theta)`` from ``b1`` along
    ``(bc - ab) / |bc - ab|``.
    """
    b0, b1, b2 = as_point(b0), as_point(b1), as_point(b2)
    la, lb = dist(b0, b1), dist(b1, b2)
    if la == 0.0 or lb == 0.0:
        raise CollinearControls("repeated control point")
    ab, bc = unit(sub(b1, b0)), unit(sub(b2, b1))
    if abs(cross(ab, bc)) < 1e-15:
        raise CollinearControls("control points are collinear")
    if abs(la - lb) > 1e-9 * max(la, lb):
        raise ValueError("control polygon legs differ; not a circular arc")
    D = max(-1.0, min(1.0, dot(ab, bc)))
    if D <= -1.0:
        raise CollinearControls("control polygon folds back")
    e = unit(sub(b2, b0))
    theta = math.atan2(abs(cross(ab, e)), dot(ab, e))
    s_th = math.sin(theta)
    R = la * math.cos(theta) / s_th
    center = add(b1, scale(unit(sub(bc, ab)), la / s_th))
    r0, r2 = dist(center, b0), dist(center, b2)
    if abs(r0 - R) > 1e-9 * max(R, 1.0) or abs(r2 - R) > 1e-9 * max(R, 1.0):
        raise ValueError("inconsistent arc center")
    return RationalArcBezier(b0, b1, b2, math.cos(theta), theta, center, R)


def piece_to_beziers(piece: ArcSeg) -> list:
    """Rational Bezier pieces for an arc; arcs of pi or more are split in two."""
    if not piece.is_arc:
        m = lerp(piece.start, piece.end, 0.5)
        return [RationalArcBezier(piece.start, m, piece.end, 1.0, 0.0, None, math.inf)]
    sw = piece.sweep
    if sw < MIN_SWEEP:
        m = lerp(piece.start, piece.end, 0.5)
        return [RationalArcBezier(piece.start, m, piece.end, 1.0, 0.0, None, math.inf)]
    if sw >= math.pi - 1e-9:
        mid = piece.point_at(0.5)
        a = ArcSeg("arc", piece.start, mid, piece.center, piece.radius, piece.ccw)
        b = ArcSeg("arc", mid, piece.end, piece.center, piece.radius, piece.ccw)
        return piece_to_beziers(a) + piece_to_beziers(b)
    t0 = piece.tangent_at("start")
    half = 0.5 * sw
    leg = piece.radius * math.tan(half)
    ctrl = add(piece.start, scale(t0, leg))
    th = half
    return [RationalArcBezier(piece.start, ctrl, piece.end, math.cos(th), th, piece.center, piece.radius)]


def _eval_piece(piece: ArcSeg, s: float):
    parts = piece_to_beziers(piece)
    if len(parts) == 1:
        return parts[0].evaluate(s)
    if s < 0.5:
        return parts[0].evaluate(2.0 * s)
    return parts[1].evaluate(2.0 * s - 1.0)


def pcc_eval(curve, t: float):
    """Evaluate a chained curve at ``t`` in [0, n]; piece i covers [i, i+1)."""
    segs = curve.segs if isinstance(curve, PccCurve) else list(curve)
    n = len(segs)
    if not (0.0 <= t <= n) or n == 0:
        raise OutOfDomain(f"t={t} outside [0, {n}]")
    if t == n:
        return segs[-1].end
    i = int(math.floor(t))
    return _eval_piece(segs[i], t - i)


@dataclass(frozen=True)
class Biarc:
    ps: tuple
    p1: tuple
    p2: tuple
    p3: tuple
    pe: tuple
    alpha: float
    beta: float
    arcs: tuple

    @property
    def control(self):
        return (self.ps, self.p1, self.p2, self.p3, self.pe)


def _arc_from_controls(a, b, c, source, t_in) -> ArcSeg:
    """Circular arc a -> c tangent to a->b at a; a segment when (nearly) straight."""
    chord = sub(c, a)
    sw = 2.0 * math.atan2(abs(cross(t_in, chord)), dot(t_in, chord))
    if sw < MIN_SWEEP or norm(chord) == 0.0:
        return ArcSeg.segment(a, c, source=source)
    ccw = cross(t_in, chord) > 0.0
    # center on the normal at a, equidistant from a and c
    n = rot90(t_in) if ccw else (t_in[1], -t_in[0])
    r = dot(chord, chord) / (2.0 * dot(chord, n))
    center = add(a, scale(n, r))
    return ArcSeg("arc", a, _snap(c, center, r), center, abs(r), ccw, source)


def _snap(p, center, r):
    u = unit(sub(p, center))
    return add(center, scale(u, abs(r)))


def build_biarc(ps, ts, pe, te, alpha: float | None = None, ratio: float | None = None,
                source: str = "biarc") -> Biarc:
    ps, ts, pe, te, v = _frame(ps, ts, pe, te)
    if ps == pe:
        raise Inadmissible("biarc endpoints coincide")
    if not biarc_admissible(ps, ts, pe, te):
        raise Inadmissible("end conditions admit no single biarc")
    if alpha is None:
        alpha = alpha_for_ratio(ratio, v, ts, te) if ratio is not None else choose_alpha(v, ts, te)
    beta = beta_of_alpha(alpha, v, ts, te)
    if not alpha > 0.0:
        raise Inadmissible("alpha must be positive")
    if not beta > 0.0:
        raise NegativeBeta(f"beta={beta} for alpha={alpha}")
    p1 = add(ps, scale(ts, alpha))
    p3 = sub(pe, scale(te, beta))
    # (beta p1 + alpha p3) / (alpha + beta) without forming huge legs first
    p2 = add(ps, scale(add(v, scale(sub(ts, te), beta)), alpha / (alpha + beta)))
    a1 = _arc_from_controls(ps, p1, p2, source, ts)
    # second arc is built backwards from pe so its end tangent is exactly te
    a2 = _arc_from_controls(pe, p3, p2, source, (-te[0], -te[1])).reversed()
    a2 = _with_start_exact(a2, a1.end)
    return Biarc(ps, p1, p2, p3, pe, alpha, beta, (a1, a2))


def _with_start_exact(piece: ArcSeg, p) -> ArcSeg:
    if not piece.is_arc:
        return ArcSeg.segment(p, piece.end, source=piece.source)
    return ArcSeg("arc", p, piece.end, piece.center, piece.radius, piece.ccw, piece.source)


def biarc_deviation(biarc: Biarc, points) -> float:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    return float(np.max(np.minimum(biarc.arcs[0].distance_to(pts), biarc.arcs[1].distance_to(pts))))


def best_ratio_biarc(ps, ts, pe, te, points, r_lo: float = 0.125, r_hi: float = 8.0,
                     iters: int = 40, source: str = "biarc") -> Biarc:
    """Biarc whose ratio alpha/beta minimises the max distance to ``points``.

    Golden-section search over log(ratio); infeasible ratios score infinity.
    """
    def score(lr):
        try:
            return biarc_deviation(build_biarc(ps, ts, pe, te, ratio=math.exp(lr), source=source), points)
        except (Inadmissible, NegativeBeta, DenominatorZero, ValueError):
            return math.inf

    a, c = math.log(r_lo), math.log(r_hi)
    # coarse scan first: the deviation need not be unimodal in the ratio
    grid = np.linspace(a, c, 17)
    vals = [score(g) for g in grid]
    k = int(np.argmin(vals))
    if not math.isfinite(vals[k]):
        raise Inadmissible("no feasible ratio in range")
    a, c = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = c - g * (c - a), a + g * (c - a)
    f1, f2 = score(x1), score(x2)
    for _ in range(iters):
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - g * (c - a)
            f1 = score(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (c - a)
            f2 = score(x2)
    best = min([(vals[k], grid[k]), (f1, x1), (f2, x2)])
    return build_biarc(ps, ts, pe, te, ratio=math.exp(best[1]), source=source)


def build_double_biarc(ps, ts, pe, te, source: str = "biarc") -> list:
    """Four G1 arcs joining the end conditions through a midpoint.

    Used when no single biarc exists.  The midpoint starts at the chord
    midpoint and is pushed along the bisector of ``ts`` and ``-te`` until both
    halves are admissible; its tangent is the normalised average of the end
    tangents (the chord direction when they cancel).
    """
    ps, ts, pe, te, v = _frame(ps, ts, pe, te)
    d = norm(v)
    if d == 0.0:
        raise Inadmissible("endpoints coincide")
    if 1.0 - dot(ts, te) <= 1e-12 and abs(cross(ts, unit(v))) < 1e-12 and dot(ts, v) > 0:
        return [ArcSeg.segment(ps, pe, source=source)]
    avg = add(ts, te)
    tangents = [unit(avg)] if norm(avg) > 1e-9 else []
    tangents.append(unit(v))
    bis = sub(ts, te)
    bis = unit(bis) if norm(bis) > 1e-9 else rot90(unit(v))
    mid = lerp(ps, pe, 0.5)
    for off in (0.0, 0.25, -0.25, 0.5, -0.5):
        m = add(mid, scale(bis, off * d))
        for tm in tangents:
            try:
                b1 = build_biarc(ps, ts, m, tm, source=source)
                b2 = build_biarc(m, tm, pe, te, source=source)
            except (Inadmissible, NegativeBeta, DenominatorZero, ValueError):
                continue
            return [*b1.arcs, *b2.arcs]
    raise Inadmissible("no admissible midpoint found")
