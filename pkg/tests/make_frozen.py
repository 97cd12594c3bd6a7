"""Regenerate tests/data/frozen.json from the reference oracles.

Run from the repository root:  python3 tests/make_frozen.py
The tests only read the frozen file; rerunning this is never part of a test.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

import datasets  # noqa: E402
import oracles  # noqa: E402

M_EPS = 0.1
M_SEEDS = range(20)
ARC_SEEDS = range(50)
TAUBIN_SEEDS = range(10)


def main():
    out = {"m_eps": M_EPS, "m_cases": [], "arc_cases": [], "taubin_cases": []}
    out["m_cases"].append({"name": "collinear", "eps": 0.1,
                           "points": [[float(i), 0.0] for i in range(6)],
                           "m": oracles.naive_m([[i, 0.0] for i in range(6)], 0.1)})
    circ = [[10 * np.cos(a), 10 * np.sin(a)] for a in np.linspace(0, 2.0, 8)]
    out["m_cases"].append({"name": "circle", "eps": 1e-6, "points": circ, "m": oracles.naive_m(circ, 1e-6)})
    for s in M_SEEDS:
        pts = datasets.curvy_run(s)
        out["m_cases"].append({"name": f"curvy-{s}", "eps": M_EPS, "points": pts.tolist(),
                               "m": oracles.naive_m(pts, M_EPS)})
        print("m", s, out["m_cases"][-1]["m"], flush=True)
    for s in ARC_SEEDS:
        p0, p1, inner = datasets.noisy_arc(s)
        t, f, T = oracles.grid_argmin(p0, p1, inner)
        out["arc_cases"].append({"seed": s, "t_grid": t, "f_grid": f, "bracket": T})
    for s in TAUBIN_SEEDS:
        pts = datasets.taubin_instance(s)
        c0 = pts.mean(axis=0)
        r0 = float(np.mean(np.hypot(*(pts - c0).T)))
        best, (cx, cy, r) = oracles.taubin_grid_min(pts, c0, r0, span=2.0 * r0 + 10.0)
        out["taubin_cases"].append({"seed": s, "f_min": best, "center": [cx, cy], "radius": r})
    path = Path(__file__).parent / "data" / "frozen.json"
    path.parent.mkdir(exist_ok=True)
    path.write_text(json.dumps(out, indent=1) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
