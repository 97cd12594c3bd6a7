"""Seeded random test instances shared by the tests and the freezing script."""

from __future__ import annotations

import math

import numpy as np


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def curvy_run(seed: int, n: int = 40, sigma: float = 0.03) -> np.ndarray:
    """Unit-step samples of a curve with three constant-curvature stretches, plus noise."""
    g = rng(seed)
    kappa = g.uniform(-0.15, 0.15, 3)
    cuts = np.sort(g.integers(5, n - 5, 2))
    heading = g.uniform(0, 2 * math.pi)
    p = g.uniform(-50, 50, 2)
    out = [p.copy()]
    for k in range(1, n):
        kap = kappa[np.searchsorted(cuts, k)]
        heading += kap
        p = p + np.array([math.cos(heading), math.sin(heading)])
        out.append(p.copy())
    pts = np.asarray(out)
    return pts + g.normal(0.0, sigma, pts.shape)


def noisy_arc(seed: int):
    """Interior points jittered around a random arc of sweep below a half turn."""
    g = rng(seed)
    n = int(g.integers(3, 31))
    r = g.uniform(5.0, 100.0)
    c = g.uniform(-50, 50, 2)
    a0 = g.uniform(0, 2 * math.pi)
    sweep = g.uniform(0.2, 0.9 * math.pi)
    ang = a0 + sweep * np.linspace(0.0, 1.0, n + 2)
    pts = c + r * np.column_stack([np.cos(ang), np.sin(ang)])
    pts[1:-1] += g.normal(0.0, 0.02 * r * sweep / n, (n, 2))
    return pts[0], pts[-1], pts[1:-1]


def box_instance(seed: int, lo: float = -100.0, hi: float = 100.0):
    """Endpoints and 3..30 interior points uniform in a square."""
    g = rng(seed)
    n = int(g.integers(3, 31))
    pts = g.uniform(lo, hi, (n + 2, 2))
    return pts[0], pts[-1], pts[1:-1]


def taubin_instance(seed: int):
    g = rng(seed)
    r = g.uniform(2.0, 30.0)
    c = g.uniform(-20, 20, 2)
    ang = g.uniform(0, 2 * math.pi) + np.sort(g.uniform(0, g.uniform(1.0, 2 * math.pi), 6))
    pts = c + r * np.column_stack([np.cos(ang), np.sin(ang)])
    return pts + g.normal(0.0, 0.05 * r, pts.shape)
