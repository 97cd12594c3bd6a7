# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled window fit for the constrained least-squares arc.

Mirrors ``pccfit._fallback`` operation for operation; see that module for the
algorithm description.
"""

from libc.math cimport sqrt, fabs, INFINITY
from libc.stdlib cimport malloc, free

cdef double INV_PHI = 0.6180339887498949
cdef double INV_PHI2 = 0.3819660112501051
cdef int N_REFINE = 3


cdef extern from "_objective.h" nogil:
    double _objective "pcc_objective"(double t, double hd2, const double* b,
                                      const double* q, int n)


cdef double _golden(double a, double c, double tol, double hd2, const double* b,
                    const double* q, int n, double* fout) noexcept nogil:
    cdef double h = c - a
    cdef double x1 = a + INV_PHI2 * h
    cdef double x2 = a + INV_PHI * h
    cdef double f1 = _objective(x1, hd2, b, q, n)
    cdef double f2 = _objective(x2, hd2, b, q, n)
    while h > tol:
        if f1 < f2:
            c = x2
            x2 = x1
            f2 = f1
            h = c - a
            x1 = a + INV_PHI2 * h
            f1 = _objective(x1, hd2, b, q, n)
        else:
            a = x1
            x1 = x2
            f1 = f2
            h = c - a
            x2 = a + INV_PHI * h
            f2 = _objective(x2, hd2, b, q, n)
    if f1 < f2:
        fout[0] = f1
        return x1
    fout[0] = f2
    return x2


def fit_window(const double[::1] x, const double[::1] y, Py_ssize_t lo, Py_ssize_t hi,
               int n_grid=1024, double rel_tol=1e-10):
    """Fit the constrained arc P[lo] -> P[hi] to the points strictly between.

    Returns ``(t_star, f_star, f_limit, max_res_arc, max_res_line, bracket)``.
    """
    cdef int n = <int>(hi - lo - 1)
    if n < 1:
        raise ValueError("window needs at least one interior point")
    cdef double x0 = x[lo], y0 = y[lo]
    cdef double ex = x[hi] - x0, ey = y[hi] - y0
    cdef double d = sqrt(ex * ex + ey * ey)
    if d == 0.0:
        raise ValueError("window endpoints coincide")
    cdef double ux = ex / d, uy = ey / d
    cdef double px = -uy, py = ux
    cdef double mx = x0 + 0.5 * ex, my = y0 + 0.5 * ey
    cdef double hd2 = 0.25 * d * d
    cdef double* b = <double*>malloc(n * sizeof(double))
    cdef double* q = <double*>malloc(n * sizeof(double))
    cdef double* fg = <double*>malloc(n_grid * sizeof(double))
    cdef int k, j, m
    cdef double Dx, Dy, flim = 0.0, spread = 0.0, T, step, t, fv, tb, fb, res, ra, rl
    cdef int best_idx[3]
    cdef double best_val[3]
    cdef double g0, gi, fr
    try:
        for k in range(n):
            Dx = mx - x[lo + 1 + k]
            Dy = my - y[lo + 1 + k]
            b[k] = px * Dx + py * Dy
            q[k] = Dx * Dx + Dy * Dy
            flim += b[k] * b[k]
            if q[k] > spread:
                spread = q[k]
        spread = 2.0 * sqrt(spread)
        T = 10.0 * d
        if 10.0 * spread > T:
            T = 10.0 * spread
        step = 2.0 * T / (n_grid - 1)
        with nogil:
            for j in range(n_grid):
                fg[j] = _objective(-T + step * j, hd2, b, q, n)
            for m in range(N_REFINE):
                best_idx[m] = -1
                best_val[m] = INFINITY
            for j in range(n_grid):
                fv = fg[j]
                if fv == INFINITY:
                    continue
                if j > 0 and fg[j - 1] < fv:
                    continue
                if j < n_grid - 1 and fg[j + 1] < fv:
                    continue
                # insert into the sorted top list
                for m in range(N_REFINE):
                    if fv < best_val[m]:
                        for k in range(N_REFINE - 1, m, -1):
                            best_val[k] = best_val[k - 1]
                            best_idx[k] = best_idx[k - 1]
                        best_val[m] = fv
                        best_idx[m] = j
                        break
            tb = 0.0
            fb = INFINITY
            for m in range(N_REFINE):
                j = best_idx[m]
                if j < 0:
                    continue
                if best_val[m] < fb:
                    fb = best_val[m]
                    tb = -T + step * j
                t = _golden(-T + step * (j - 1 if j > 0 else 0),
                            -T + step * (j + 1 if j < n_grid - 1 else n_grid - 1),
                            rel_tol * d, hd2, b, q, n, &fr)
                if fr < fb:
                    fb = fr
                    tb = t
        if fb == INFINITY:
            raise ZeroDivisionError("every candidate center hits a data point")
        ra = 0.0
        rl = 0.0
        g0 = sqrt(tb * tb + hd2)
        for k in range(n):
            gi = sqrt(tb * tb + 2.0 * tb * b[k] + q[k])
            res = fabs((hd2 - 2.0 * tb * b[k] - q[k]) / (g0 + gi))
            if res > ra:
                ra = res
            if fabs(b[k]) > rl:
                rl = fabs(b[k])
        return tb, fb, flim, ra, rl, T
    finally:
        free(b)
        free(q)
        free(fg)


def objective_many(double[::1] ts, const double[::1] x, const double[::1] y,
                   Py_ssize_t lo, Py_ssize_t hi):
    """Objective values at each entry of ``ts`` for the window lo..hi."""
    import numpy as np
    cdef int n = <int>(hi - lo - 1)
    cdef double x0 = x[lo], y0 = y[lo]
    cdef double ex = x[hi] - x0, ey = y[hi] - y0
    cdef double d = sqrt(ex * ex + ey * ey)
    cdef double ux = ex / d, uy = ey / d
    cdef double mx = x0 + 0.5 * ex, my = y0 + 0.5 * ey
    cdef double hd2 = 0.25 * d * d
    cdef double* b = <double*>malloc(n * sizeof(double))
    cdef double* q = <double*>malloc(n * sizeof(double))
    out = np.empty(ts.shape[0])
    cdef double[::1] ov = out
    cdef int k
    cdef Py_ssize_t j
    try:
        for k in range(n):
            b[k] = -uy * (mx - x[lo + 1 + k]) + ux * (my - y[lo + 1 + k])
            q[k] = (mx - x[lo + 1 + k]) ** 2 + (my - y[lo + 1 + k]) ** 2
        for j in range(ts.shape[0]):
            ov[j] = _objective(ts[j], hd2, b, q, n)
        return out
    finally:
        free(b)
        free(q)
