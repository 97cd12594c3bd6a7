"""Continuous (C0) reduced-arc spline.

Each step picks a split point so that two consecutive windows cover as many
points as possible; the selected windows share endpoints, so the curve has no
gaps.  A curve ending one point short gets a closing segment.
"""

from __future__ import annotations

import numpy as np

from .geom import ArcSeg, PccCurve
from .longest import (
    EPSILON_DEFAULT,
    FitTables,
    SplineBuild,
    _check_points,
    build_m,
    coverage,
    window_pieces,
    windows,
)
from .lsq import WindowFitter


def _score_default(m, i: int) -> int:
    s = int(m[i])
    nxt = i + s - 1
    nxt = min(nxt, len(m) - 1)
    if m[nxt] == 0:
        return s
    return s + int(m[nxt]) - 1


def select_g_c0(m) -> np.ndarray:
    """Greedy split selection; nonzero entries of the result form a chain of windows."""
    m = np.asarray(m, dtype=np.int64)
    n = len(m)
    g = m.copy()
    i = 0
    while i <= n - 3:
        if m[i] == 0:
            break
        k = i
        z = _score_default(m, i)
        for j in range(i + 2, i + int(m[i]) - 2 + 1):
            if j - i + m[j] > z:
                k, z = j, j - i + int(m[j])
        g[i + 1:k] = 0
        g[k + 1:k + int(m[k]) - 1] = 0
        if k != i:
            g[i] = k - i + 1
        i = k + int(m[k]) - 1
    return g


def build_spline_c0(points, g=None, epsilon: float = EPSILON_DEFAULT,
                    fitter: WindowFitter | None = None) -> SplineBuild:
    """One constrained arc per selected window; consecutive arcs share endpoints."""
    if fitter is None:
        fitter = WindowFitter(_check_points(points))
    n = len(fitter)
    m = None
    if g is None:
        m = build_m(fitter.points, epsilon, fitter)
        g = select_g_c0(m)
    g = np.asarray(g)
    notes = []
    segs = []
    end = 0
    for s, e in windows(g):
        segs.extend(window_pieces(fitter, s, e, epsilon, notes))
        end = e
    if end < n - 1:
        # only n-2 can be left over; anything else means g does not chain
        for a in range(end, n - 1):
            segs.append(ArcSeg.segment(fitter.points[a], fitter.points[a + 1], source="tail",
                                       first=a, last=a + 1))
    curve = PccCurve(segs)
    cov, res = coverage(curve, fitter.points, epsilon)
    tables = FitTables(m if m is not None else np.zeros(n, dtype=np.int64), g, epsilon)
    return SplineBuild(curve, cov, res, tables, notes)


def fit_c0(points, epsilon: float = EPSILON_DEFAULT, fitter: WindowFitter | None = None) -> SplineBuild:
    return build_spline_c0(points, None, epsilon, fitter)
