"""Least-squares circles: the endpoint-constrained arc and Taubin's algebraic fit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CenterHitsPoint, DegenerateInput
from .geom import R_DEGENERATE, ArcSeg, Circle, Line, as_point, dist, rot90, sub, unit

N_GRID = 1024
REL_TOL = 1e-10


@dataclass(frozen=True)
class ChordFrame:
    """Chord P0 -> P_{N+1} with its unit direction and left normal."""

    p0: tuple
    pN1: tuple
    d: float
    u: tuple
    u_perp: tuple

    @classmethod
    def from_points(cls, p0, pN1) -> "ChordFrame":
        p0, pN1 = as_point(p0), as_point(pN1)
        d = dist(p0, pN1)
        if d == 0.0:
            raise DegenerateInput("chord endpoints coincide")
        u = unit(sub(pN1, p0))
        return cls(p0, pN1, d, u, rot90(u))

    @property
    def midpoint(self):
        return (0.5 * (self.p0[0] + self.pN1[0]), 0.5 * (self.p0[1] + self.pN1[1]))

    def center(self, t: float):
        m = self.midpoint
        return (m[0] + t * self.u_perp[0], m[1] + t * self.u_perp[1])

    def radius(self, t: float) -> float:
        return math.sqrt(t * t + 0.25 * self.d * self.d)


@dataclass(frozen=True)
class ConstrainedArcFit:
    frame: ChordFrame
    t_star: float
    center: tuple
    radius: float
    max_residual: float
    is_segment: bool
    f_star: float
    f_limit: float
    bracket: float
    interior_side: int = 0

    def to_piece(self, **kw) -> ArcSeg:
        """The fitted arc (or segment) from ``p0`` to ``pN1``.

        The arc lies on the side of the chord holding most interior points;
        ``interior_side`` is +1 for the left of P0 -> P_{N+1}, -1 for the
        right, 0 on a tie (then the minor arc is used).
        """
        f = self.frame
        if self.is_segment:
            return ArcSeg.segment(f.p0, f.pN1, **kw)
        side = self.interior_side
        if side == 0:
            side = -1 if self.t_star >= 0.0 else 1
        # an arc bulging to the left of the chord is traversed clockwise
        return ArcSeg.arc(f.p0, f.pN1, self.center, ccw=side < 0, **kw)


def _interior_array(interior) -> np.ndarray:
    pts = np.asarray(interior, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise DegenerateInput("need at least one interior point")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite coordinates")
    return pts


def _terms(frame: ChordFrame, pts: np.ndarray):
    mx, my = frame.midpoint
    Dx, Dy = mx - pts[:, 0], my - pts[:, 1]
    b = frame.u_perp[0] * Dx + frame.u_perp[1] * Dy
    return b, Dx * Dx + Dy * Dy


def objective_f(t: float, frame: ChordFrame, interior, strict: bool = False) -> float:
    """Sum of squared radial residuals of the interior points for center C(t).

    The value stays defined when C(t) lands on a data point (the objective is
    continuous there, only its derivative is not); ``strict=True`` raises
    :class:`CenterHitsPoint` in that case instead.
    """
    pts = _interior_array(interior)
    b, q = _terms(frame, pts)
    hd2 = 0.25 * frame.d * frame.d
    gi2 = np.maximum(t * t + 2.0 * t * b + q, 0.0)
    if strict and np.any(gi2 < 1e-24):
        raise CenterHitsPoint(f"center C({t!r}) coincides with a data point")
    r = (hd2 - 2.0 * t * b - q) / (math.sqrt(t * t + hd2) + np.sqrt(gi2))
    return float(np.dot(r, r))


def limit_f(frame: ChordFrame, interior) -> float:
    """Common value of the objective at t -> +/-infinity."""
    pts = _interior_array(interior)
    s = (frame.p0[0] - pts[:, 0]) * frame.u_perp[0] + (frame.p0[1] - pts[:, 1]) * frame.u_perp[1]
    return float(np.dot(s, s))


def _segment_ok(f_lim: float, f_star: float, n: int, epsilon: float, d: float) -> bool:
    floor = n * (1e-12 * d) ** 2
    return f_lim <= f_star + floor and f_lim <= n * epsilon * epsilon + floor


def _from_kernel(frame, res, n, epsilon, side) -> ConstrainedArcFit:
    t, fs, fl, ra, rl, T = res
    seg = _segment_ok(fl, fs, n, epsilon, frame.d)
    return ConstrainedArcFit(
        frame=frame,
        t_star=t,
        center=frame.center(t),
        radius=frame.radius(t),
        max_residual=rl if seg else ra,
        is_segment=seg,
        f_star=fs,
        f_limit=fl,
        bracket=T,
        interior_side=side,
    )


def _majority_side(frame: ChordFrame, pts: np.ndarray) -> int:
    s = (pts[:, 0] - frame.p0[0]) * frame.u_perp[0] + (pts[:, 1] - frame.p0[1]) * frame.u_perp[1]
    return int(np.sign(np.count_nonzero(s > 0) - np.count_nonzero(s < 0)))


def minimize_f(frame: ChordFrame, interior, epsilon: float = 0.0, n_grid: int = N_GRID,
               rel_tol: float = REL_TOL) -> ConstrainedArcFit:
    """Constrained least-squares arc through ``frame.p0`` and ``frame.pN1``.

    ``epsilon`` is the caller's fit tolerance; it only matters for the
    straight-line fallback, which is taken when the line is at least as good
    as every arc on the search bracket and its objective is at most
    ``N * epsilon**2``.
    """
    pts = _interior_array(interior)
    xy = np.vstack([frame.p0, pts, frame.pN1])
    x, y = np.ascontiguousarray(xy[:, 0]), np.ascontiguousarray(xy[:, 1])
    try:
        res = kernels.fit_window(x, y, 0, len(xy) - 1, n_grid, rel_tol)
    except ZeroDivisionError as exc:
        raise CenterHitsPoint(str(exc)) from None
    return _from_kernel(frame, res, len(pts), epsilon, _majority_side(frame, pts))


class WindowFitter:
    """Memoised constrained fits over index windows of one point sequence.

    Fits do not depend on the tolerance except through the straight-line
    fallback, so one fitter serves several tolerances.
    """

    def __init__(self, points, n_grid: int = N_GRID, rel_tol: float = REL_TOL):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        self.points = pts
        self.x = np.ascontiguousarray(pts[:, 0])
        self.y = np.ascontiguousarray(pts[:, 1])
        self.n_grid = n_grid
        self.rel_tol = rel_tol
        self._raw = {}

    def __len__(self):
        return len(self.points)

    def raw(self, lo: int, hi: int):
        key = (lo, hi)
        r = self._raw.get(key)
        if r is None:
            try:
                r = kernels.fit_window(self.x, self.y, lo, hi, self.n_grid, self.rel_tol)
            except ZeroDivisionError as exc:
                raise CenterHitsPoint(str(exc)) from None
            self._raw[key] = r
        return r

    def max_residual(self, lo: int, hi: int, epsilon: float) -> float:
        t, fs, fl, ra, rl, T = self.raw(lo, hi)
        n = hi - lo - 1
        d = math.hypot(self.x[hi] - self.x[lo], self.y[hi] - self.y[lo])
        return rl if _segment_ok(fl, fs, n, epsilon, d) else ra

    def fit(self, lo: int, hi: int, epsilon: float) -> ConstrainedArcFit:
        frame = ChordFrame.from_points(self.points[lo], self.points[hi])
        inner = self.points[lo + 1:hi]
        return _from_kernel(frame, self.raw(lo, hi), hi - lo - 1, epsilon, _majority_side(frame, inner))

    def piece(self, lo: int, hi: int, epsilon: float, offset: int = 0, **kw) -> ArcSeg:
        """Fitted piece for the window; windows of two points are segments."""
        kw.setdefault("first", offset + lo)
        kw.setdefault("last", offset + hi)
        if hi - lo == 1:
            return ArcSeg.segment(self.points[lo], self.points[hi], **kw)
        return self.fit(lo, hi, epsilon).to_piece(**kw)


def fit_arc(points, epsilon: float = 0.0, **kw) -> ArcSeg:
    """Constrained arc from the first to the last point of ``points``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        return ArcSeg.segment(pts[0], pts[-1], **kw)
    frame = ChordFrame.from_points(pts[0], pts[-1])
    return minimize_f(frame, pts[1:-1], epsilon).to_piece(**kw)


def taubin_objective(points, center, radius) -> float:
    """Gradient-weighted algebraic error minimised by Taubin's fit."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    d2 = (pts[:, 0] - center[0]) ** 2 + (pts[:, 1] - center[1]) ** 2
    return float(np.sum((d2 - radius * radius) ** 2) / (4.0 * np.mean(d2)))


def taubin_fit(points, r_degenerate: float = R_DEGENERATE):
    """Taubin algebraic circle fit; a :class:`Line` for (near) straight data."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(np.unique(pts, axis=0)) < 3:
        raise DegenerateInput("Taubin fit needs at least three distinct points")
    centroid = pts.mean(axis=0)
    X = pts[:, 0] - centroid[0]
    Y = pts[:, 1] - centroid[1]
    Z = X * X + Y * Y
    zmean = Z.mean()
    Z0 = (Z - zmean) / (2.0 * math.sqrt(zmean))
    _, _, vt = np.linalg.svd(np.column_stack([Z0, X, Y]), full_matrices=False)
    A = vt[2].copy()
    a0 = A[0] / (2.0 * math.sqrt(zmean))
    lin = math.hypot(A[1], A[2])
    if abs(a0) * math.sqrt(zmean) < 1e-12 * lin:
        return _principal_line(pts)
    a3 = -zmean * a0
    cx = -A[1] / (2.0 * a0) + centroid[0]
    cy = -A[2] / (2.0 * a0) + centroid[1]
    r = math.sqrt(A[1] * A[1] + A[2] * A[2] - 4.0 * a0 * a3) / (2.0 * abs(a0))
    if not math.isfinite(r) or r > r_degenerate:
        return _principal_line(pts)
    return Circle((float(cx), float(cy)), float(r))


def _principal_line(pts: np.ndarray) -> Line:
    c = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - c, full_matrices=False)
    d = vt[0]
    # orient along the data order
    if np.dot(pts[-1] - pts[0], d) < 0:
        d = -d
    return Line((float(c[0]), float(c[1])), (float(d[0]), float(d[1])))
