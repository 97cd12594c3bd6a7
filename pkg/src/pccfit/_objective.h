/* Objective of the constrained arc fit, shared by the Cython kernel. */
#ifndef PCCFIT_OBJECTIVE_H
#define PCCFIT_OBJECTIVE_H

#include <math.h>

static inline double pcc_objective(double t, double hd2, const double *b,
                                   const double *q, int n)
{
    const double g0 = sqrt(t * t + hd2);
    double s = 0.0, lo = INFINITY;
    int k;
#pragma omp simd reduction(+:s) reduction(min:lo)
    for (k = 0; k < n; k++) {
        double gi2 = t * t + 2.0 * t * b[k] + q[k];
        double r = (hd2 - 2.0 * t * b[k] - q[k]) / (g0 + sqrt(gi2 > 0.0 ? gi2 : 0.0));
        lo = gi2 < lo ? gi2 : lo;
        s += r * r;
    }
    /* a sample whose center sits on a data point is skipped */
    return lo < 1e-24 ? INFINITY : s;
}

#endif
