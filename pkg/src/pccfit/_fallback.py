"""Pure numpy implementation of the window-fit kernel.

The constrained arc through ``P[lo]`` and ``P[hi]`` has its center on the
chord bisector, ``C(t) = mid + t * n`` with ``n`` the left normal of the chord.
For an interior point with ``D = mid - P`` write ``b = n . D`` and
``q = |D|^2``; then ``R(t)^2 - |P - C(t)|^2 = d^2/4 - 2 t b - q`` and the signed
residual is that difference divided by ``R + |P - C|``.  Evaluating it this way
avoids the cancellation of ``R - |P - C|`` when ``|t|`` is large.

Search: ``n_grid`` uniform samples on ``[-T, T]`` with
``T = max(10 d, 10 * spread)`` (``spread`` is twice the largest distance of an
interior point from the chord midpoint), then golden-section refinement of the
three lowest local minima of the samples between their grid neighbours.
"""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0
N_REFINE = 3


def _window_terms(x, y, lo, hi):
    x0, y0 = x[lo], y[lo]
    ex, ey = x[hi] - x0, y[hi] - y0
    d = math.sqrt(ex * ex + ey * ey)
    if d == 0.0:
        raise ValueError("window endpoints coincide")
    ux, uy = ex / d, ey / d
    mx, my = x0 + 0.5 * ex, y0 + 0.5 * ey
    Dx = mx - x[lo + 1:hi]
    Dy = my - y[lo + 1:hi]
    b = -uy * Dx + ux * Dy
    q = Dx * Dx + Dy * Dy
    return d, b, q


def _objective_grid(ts, hd2, b, q):
    t = ts[:, None]
    gi2 = t * t + 2.0 * t * b + q
    with np.errstate(invalid="ignore", divide="ignore"):
        r = (hd2 - 2.0 * t * b - q) / (np.sqrt(t * t + hd2) + np.sqrt(gi2))
        f = np.sum(r * r, axis=1)
    f[np.any(gi2 < 1e-24, axis=1)] = np.inf
    return f


def _objective(t, hd2, b, q):
    gi2 = t * t + 2.0 * t * b + q
    if np.any(gi2 < 1e-24):
        return math.inf
    r = (hd2 - 2.0 * t * b - q) / (math.sqrt(t * t + hd2) + np.sqrt(gi2))
    return float(np.dot(r, r))


def _golden(a, c, tol, hd2, b, q):
    h = c - a
    x1 = a + INV_PHI2 * h
    x2 = a + INV_PHI * h
    f1 = _objective(x1, hd2, b, q)
    f2 = _objective(x2, hd2, b, q)
    while h > tol:
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            h = c - a
            x1 = a + INV_PHI2 * h
            f1 = _objective(x1, hd2, b, q)
        else:
            a, x1, f1 = x1, x2, f2
            h = c - a
            x2 = a + INV_PHI * h
            f2 = _objective(x2, hd2, b, q)
    return (x1, f1) if f1 < f2 else (x2, f2)


def fit_window(x, y, lo, hi, n_grid=1024, rel_tol=1e-10):
    n = hi - lo - 1
    if n < 1:
        raise ValueError("window needs at least one interior point")
    d, b, q = _window_terms(x, y, lo, hi)
    hd2 = 0.25 * d * d
    flim = float(np.dot(b, b))
    spread = 2.0 * math.sqrt(float(q.max()))
    T = max(10.0 * d, 10.0 * spread)
    step = 2.0 * T / (n_grid - 1)
    ts = -T + step * np.arange(n_grid)
    fg = _objective_grid(ts, hd2, b, q)

    finite = np.isfinite(fg)
    left = np.concatenate(([np.inf], fg[:-1]))
    right = np.concatenate((fg[1:], [np.inf]))
    cand = np.flatnonzero(finite & (left >= fg) & (right >= fg))
    # stable sort keeps the lowest index first among ties, as the C kernel does
    cand = cand[np.argsort(fg[cand], kind="stable")][:N_REFINE]

    tb, fb = 0.0, math.inf
    for j in cand:
        if fg[j] < fb:
            fb, tb = float(fg[j]), float(ts[j])
        a = -T + step * max(j - 1, 0)
        c = -T + step * min(j + 1, n_grid - 1)
        t, fr = _golden(a, c, rel_tol * d, hd2, b, q)
        if fr < fb:
            fb, tb = fr, t
    if fb == math.inf:
        raise ZeroDivisionError("every candidate center hits a data point")
    g0 = math.sqrt(tb * tb + hd2)
    res = np.abs((hd2 - 2.0 * tb * b - q) / (g0 + np.sqrt(tb * tb + 2.0 * tb * b + q)))
    return float(tb), float(fb), flim, float(res.max()), float(np.abs(b).max()), T


def objective_many(ts, x, y, lo, hi):
    d, b, q = _window_terms(np.asarray(x), np.asarray(y), lo, hi)
    return _objective_grid(np.asarray(ts, dtype=float), 0.25 * d * d, b, q)
