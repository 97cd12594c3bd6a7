"""Longest-arc spline: window table M, greedy selection G and gap filling.

Arrays here are 0-based; ``m[i]`` is still the number of points (both ends
included) of the window starting at point ``i``.  The JSON curve writer in
:mod:`pccfit.io` shifts piece point indices to 1-based.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .biarc import best_ratio_biarc, build_double_biarc
from .errors import (
    DenominatorZero,
    DuplicatePoints,
    GapUnfillable,
    Inadmissible,
    NegativeBeta,
    TooFewPoints,
)
from .geom import ArcSeg, PccCurve, arc_through_three, chain_segments
from .lsq import WindowFitter

log = logging.getLogger(__name__)

EPSILON_DEFAULT = 0.5
GAP_POLICIES = ("recurse", "biarc")


@dataclass
class FitTables:
    m: np.ndarray
    g: np.ndarray
    epsilon: float

    def to_dict(self) -> dict:
        return {"m": self.m.tolist(), "g": self.g.tolist(), "epsilon": self.epsilon}


@dataclass
class SplineBuild:
    curve: PccCurve
    covered: np.ndarray
    residuals: np.ndarray
    tables: FitTables | None = None
    notes: list = field(default_factory=list)

    @property
    def uncovered(self) -> list:
        return np.flatnonzero(~self.covered).tolist()


def _check_points(points, min_n: int = 4) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < min_n:
        raise TooFewPoints(f"need at least {min_n} points, got {len(pts)}")
    step = np.hypot(*np.diff(pts, axis=0).T)
    if np.any(step == 0.0):
        k = int(np.flatnonzero(step == 0.0)[0])
        raise DuplicatePoints(f"points {k} and {k + 1} coincide")
    return pts


def build_m(points, epsilon: float = EPSILON_DEFAULT, fitter: WindowFitter | None = None) -> np.ndarray:
    """Longest feasible window from every start point, grown one point at a time.

    A window ``i..i+k`` is accepted when every interior point is within
    ``epsilon`` of its constrained least-squares arc.  Growth stops at the
    first rejected window; the last two entries are zero.
    """
    if fitter is None:
        fitter = WindowFitter(_check_points(points))
    n = len(fitter)
    if n < 4:
        raise TooFewPoints(f"need at least 4 points, got {n}")
    m = np.zeros(n, dtype=np.int64)
    i, k = 0, 3
    while i <= n - 3:
        if fitter.max_residual(i, i + k, epsilon) > epsilon:
            m[i] = k
            i += 1
            k = 2 if i == n - 3 else 3
        else:
            k += 1
            if i + k > n - 1:
                m[i] = k
                i += 1
                k = 2 if i == n - 3 else 3
    return m


def select_g(m) -> np.ndarray:
    """Greedy choice of arc start points from the window table."""
    m = np.asarray(m, dtype=np.int64)
    n = len(m)
    g = m.copy()
    i = 0
    while i < n - 1:
        if m[i] == 0:
            break
        s = int(m[i]) // 2
        e = i + int(m[i]) - 1
        jump = None
        for j in range(i + 1, min(i + s, n - 3) + 1):
            if m[j] > m[i]:
                jump = j
                break
        if jump is not None:
            g[i:jump] = 0
            i = jump
            continue
        g[i + 1:e] = 0
        i = e
    return g


def windows(g) -> list:
    """(start, end) index pairs of the selected windows, in order."""
    return [(int(i), int(i + v - 1)) for i, v in enumerate(np.asarray(g)) if v > 0]


def window_pieces(fitter: WindowFitter, s: int, e: int, eps: float, notes: list,
                  offset: int = 0, source: str = "fit") -> list:
    """Fit window ``s..e``, splitting it at the midpoint until every piece holds.

    A piece holds when its interior points are within ``eps`` of the circle
    and of the piece itself; the second test catches points that sit on the
    circle but beyond an end of the arc.  Two-point windows are segments.
    """
    piece = fitter.piece(s, e, eps, offset=offset, source=source)
    if e - s < 2:
        return [piece]
    inner = fitter.points[s + 1:e]
    if fitter.max_residual(s, e, eps) <= eps and float(piece.distance_to(inner).max()) <= eps:
        return [piece]
    mid = (s + e) // 2
    notes.append(f"window {offset + s}..{offset + e} re-split at {offset + mid}")
    return (window_pieces(fitter, s, mid, eps, notes, offset, source)
            + window_pieces(fitter, mid, e, eps, notes, offset, source))


class _Builder:
    def __init__(self, fitter: WindowFitter, epsilon: float, gap_policy: str, offset: int, depth: int):
        self.f = fitter
        self.pts = fitter.points
        self.eps = epsilon
        self.policy = gap_policy
        self.offset = offset
        self.depth = depth
        self.notes = []

    def arc(self, s: int, e: int) -> list:
        return window_pieces(self.f, s, e, self.eps, self.notes, self.offset)

    def gap(self, e: int, s: int, prev: ArcSeg | None, nxt: ArcSeg | None) -> list:
        k = s - e
        if k <= 0:
            return []
        o = self.offset
        if k == 1:
            return [ArcSeg.segment(self.pts[e], self.pts[s], source="gap-segment", first=o + e, last=o + s)]
        if k == 2:
            return [arc_through_three(self.pts[e], self.pts[e + 1], self.pts[s],
                                      source="gap-circle", first=o + e, last=o + s)]
        if self.policy == "biarc" and prev is not None and nxt is not None:
            pieces = self._biarc_gap(e, s, prev, nxt)
            if pieces is not None:
                return pieces
        return self._recurse(e, s)

    def _biarc_gap(self, e, s, prev, nxt):
        ps, pe = self.pts[e], self.pts[s]
        ts, te = prev.tangent_at("end"), nxt.tangent_at("start")
        inner = self.pts[e + 1:s]
        try:
            b = best_ratio_biarc(ps, ts, pe, te, inner, source="gap-biarc")
            pieces = list(b.arcs)
        except (Inadmissible, NegativeBeta, DenominatorZero, ValueError):
            try:
                pieces = build_double_biarc(ps, ts, pe, te, source="gap-biarc")
            except (Inadmissible, NegativeBeta, DenominatorZero, ValueError):
                self.notes.append(f"gap {self.offset + e}..{self.offset + s}: no biarc, reapplying fit")
                return None
        o = self.offset
        pieces[0] = replace(pieces[0], first=o + e)
        pieces[-1] = replace(pieces[-1], last=o + s)
        return pieces

    def _recurse(self, e, s):
        sub_pts = self.pts[e:s + 1]
        try:
            sub = WindowFitter(sub_pts, self.f.n_grid, self.f.rel_tol)
            m = build_m(sub_pts, self.eps, sub)
            g = select_g(m)
            child = _Builder(sub, self.eps, self.policy, self.offset + e, self.depth + 1)
            segs = child.run(g)
            self.notes.extend(child.notes)
            return segs
        except (TooFewPoints, DuplicatePoints) as exc:
            self.notes.append(f"gap {self.offset + e}..{self.offset + s}: {exc}; chained segments")
            return chain_segments(sub_pts, source="chain", offset=self.offset + e)

    def run(self, g) -> list:
        n = len(self.pts)
        out = []
        e = 0
        prev = None
        for s, end in windows(g):
            a = self.arc(s, end)
            out.extend(self.gap(e, s, prev, a[0]))
            out.extend(a)
            prev, e = a[-1], end
        out.extend(self.gap(e, n - 1, prev, None))
        return out


def coverage(curve: PccCurve, points, epsilon: float):
    res = curve.distance_to(points)
    return res <= epsilon, res


def build_spline(points, tables: FitTables | None = None, gap_policy: str = "recurse",
                 epsilon: float | None = None, fitter: WindowFitter | None = None) -> SplineBuild:
    """Assemble the longest-arc curve; gaps between arcs are filled per ``gap_policy``.

    A gap of one step becomes a segment, two steps the circle through the
    three points, longer gaps are refitted (``recurse``) or bridged by a
    biarc tangent to the flanking arcs (``biarc``, falling back to ``recurse``
    where no flanking arc or no biarc exists).
    """
    if gap_policy not in GAP_POLICIES:
        raise ValueError(f"gap_policy must be one of {GAP_POLICIES}")
    if fitter is None:
        fitter = WindowFitter(_check_points(points))
    if tables is None:
        eps = EPSILON_DEFAULT if epsilon is None else epsilon
        m = build_m(fitter.points, eps, fitter)
        tables = FitTables(m, select_g(m), eps)
    eps = tables.epsilon if epsilon is None else epsilon
    b = _Builder(fitter, eps, gap_policy, 0, 0)
    try:
        segs = b.run(tables.g)
    except GapUnfillable:  # pragma: no cover - _recurse already degrades to segments
        segs = chain_segments(fitter.points)
    curve = PccCurve(segs)
    cov, res = coverage(curve, fitter.points, eps)
    return SplineBuild(curve, cov, res, tables, b.notes)


def fit_longest(points, epsilon: float = EPSILON_DEFAULT, gap_policy: str = "recurse",
                fitter: WindowFitter | None = None) -> SplineBuild:
    if fitter is None:
        fitter = WindowFitter(_check_points(points))
    m = build_m(fitter.points, epsilon, fitter)
    return build_spline(fitter.points, FitTables(m, select_g(m), epsilon), gap_policy, fitter=fitter)
