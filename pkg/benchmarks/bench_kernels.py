"""Time the compiled window-fit kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 300]

Reports the best-of-N time of three workloads per backend: single window
fits, the full M table of a scan, and a whole pentagon pipeline run.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pccfit import kernels
from pccfit.longest import build_m
from pccfit.pipeline import PipelineConfig, run_pipeline
from pccfit.synth import ScanConfig, generate_scan, pentagon


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(n_points: int):
    g = np.random.Generator(np.random.Philox(7))
    ang = np.linspace(0.0, 2.5, 32)
    arc = np.column_stack([40 * np.cos(ang), 40 * np.sin(ang)]) + g.normal(0, 0.05, (32, 2))
    x, y = np.ascontiguousarray(arc[:, 0]), np.ascontiguousarray(arc[:, 1])

    def windows():
        for _ in range(200):
            kernels.fit_window(x, y, 0, len(x) - 1)

    run = np.cumsum(g.normal(0, 1, (n_points, 2)) * 0.2 + np.array([1.0, 0.0]), axis=0)
    pts, _ = generate_scan(pentagon(), ScanConfig(step=1.0, jitter_sigma=0.05, seed=0))
    cfg = PipelineConfig(tolerances=(1.5, 1.0, 0.5), method="c0", closed=True)
    return {
        "200 window fits (32 pts)": windows,
        f"M table ({n_points} pts)": lambda: build_m(run, 0.5),
        "pentagon pipeline": lambda: run_pipeline(cfg, pts),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=300)
    a = ap.parse_args(argv)
    names = kernels.available()
    if "compiled" not in names:
        print("compiled kernels not built; timing the numpy fallback only")
    before = kernels.backend()
    rows = {}
    try:
        for name in names:
            kernels.set_backend(name)
            for label, fn in workloads(a.points).items():
                rows.setdefault(label, {})[name] = best_of(fn, a.repeat)
    finally:
        kernels.set_backend(before)
    width = max(len(k) for k in rows)
    print(f"{'workload':<{width}}  " + "  ".join(f"{n:>10}" for n in names) + "   speedup")
    for label, t in rows.items():
        speed = t["python"] / t["compiled"] if "compiled" in t else float("nan")
        print(f"{label:<{width}}  " + "  ".join(f"{t[n]:>9.4f}s" for n in names) + f"  {speed:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
