"""End-to-end driver: corners, per-section fitting, smoothing and result rows."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .c0 import build_spline_c0
from .corner import CornerParams, CornerReport, detect_corners, section_indices
from .errors import DuplicatePoints, TooFewPoints
from .geom import PccCurve, chain_segments
from .longest import GAP_POLICIES, build_spline, build_m, select_g, FitTables
from .lsq import WindowFitter
from .smoothing import EPS_GOOD_DEFAULT, METHODS as SMOOTHING, junction_cosines, smooth_curve

log = logging.getLogger(__name__)

FIT_METHODS = ("longest", "c0")


@dataclass
class PipelineConfig:
    tolerance: float = 0.5
    tolerances: tuple = ()
    method: str = "c0"
    gap_policy: str = "recurse"
    eps_good: float = EPS_GOOD_DEFAULT
    smoothing: str = "none"
    corner: CornerParams = field(default_factory=CornerParams)
    detect_corners: bool = True
    keep_corners: bool = False
    closed: bool = False
    input: str | None = None
    output: str | None = None

    def __post_init__(self):
        self.tolerances = tuple(float(t) for t in (self.tolerances or (self.tolerance,)))
        if not self.tolerance > 0.0 or any(not t > 0.0 for t in self.tolerances):
            raise ValueError("tolerances must be positive")
        if not 0.0 <= self.eps_good < 1.0:
            raise ValueError("eps_good must lie in [0, 1)")
        if self.method not in FIT_METHODS:
            raise ValueError(f"method must be one of {FIT_METHODS}")
        if self.gap_policy not in GAP_POLICIES:
            raise ValueError(f"gap_policy must be one of {GAP_POLICIES}")
        if self.smoothing not in SMOOTHING:
            raise ValueError(f"smoothing must be one of {SMOOTHING}")


@dataclass
class ResultRow:
    """One line of the result table.

    ``arcs``/``segments`` count pieces by the construction that produced them
    (an arc fit that came out straight is still an arc);
    ``straight`` is the number of pieces that are geometrically segments.
    """

    tolerance: float
    arcs: int
    segments: int
    bad_points: int
    straight: int = 0
    unfixable: int = 0

    def as_tuple(self) -> tuple:
        return (self.tolerance, self.arcs, self.segments, self.bad_points)


@dataclass
class PipelineResult:
    curve: PccCurve
    corners: CornerReport
    rows: list
    junctions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)


class _Section:
    def __init__(self, pts: np.ndarray, index: list):
        self.pts = pts
        self.index = index  # local -> global data index, None for attached corners
        self.fitter = None
        if len(pts) >= 4:
            try:
                self.fitter = WindowFitter(pts)
            except DuplicatePoints:
                self.fitter = None

    def fit(self, method: str, eps: float, gap_policy: str):
        notes = []
        if self.fitter is None:
            segs = chain_segments(self.pts, source="chain")
        else:
            try:
                if method == "c0":
                    b = build_spline_c0(self.pts, None, eps, self.fitter)
                else:
                    m = build_m(self.pts, eps, self.fitter)
                    b = build_spline(self.pts, FitTables(m, select_g(m), eps), gap_policy, fitter=self.fitter)
                segs, notes = list(b.curve.segs), b.notes
            except (TooFewPoints, DuplicatePoints) as exc:
                notes.append(str(exc))
                segs = chain_segments(self.pts, source="chain")
        return [self._remap(s) for s in segs], notes

    def _data_index(self, i, step):
        # attached corners carry no data index: use the nearest sample inside the section
        while 0 <= i < len(self.index) and self.index[i] is None:
            i += step
        return self.index[i] if 0 <= i < len(self.index) else None

    def _remap(self, s):
        f = None if s.first is None else self._data_index(s.first, 1)
        l = None if s.last is None else self._data_index(s.last, -1)
        return replace(s, first=f, last=l)


def _sections(points: np.ndarray, rep: CornerReport) -> list:
    n = len(points)
    out = []
    for j, sec in enumerate(rep.sections):
        pts = rep.section_points(points, j)
        idx = section_indices(sec, n)
        if not rep.corners and rep.closed:
            idx = idx + [idx[0]]
        loc = list(idx)
        if rep.corners:
            head = rep.closed or j > 0
            tail = rep.closed or j < len(rep.corners)
            if head:
                if np.allclose(points[loc[0]], pts[0], atol=1e-9, rtol=0):
                    loc = loc[1:]
                loc = [None] + loc
            if tail:
                if loc and loc[-1] is not None and np.allclose(points[loc[-1]], pts[-1], atol=1e-9, rtol=0):
                    loc = loc[:-1]
                loc = loc + [None]
        if len(loc) != len(pts):  # pragma: no cover - bookkeeping guard
            raise AssertionError("section index map out of sync")
        out.append(_Section(pts, loc))
    return out


def _no_corners(n: int, closed: bool) -> CornerReport:
    return CornerReport([], [], [(0, n - 1)], closed)


def count_row(curve: PccCurve, points, tol: float, unfixable: int = 0) -> ResultRow:
    arcs, segs = curve.construction_counts()
    bad = int(np.count_nonzero(curve.distance_to(points) > tol))
    return ResultRow(tol, arcs, segs, bad, curve.n_segments, unfixable)


def run_pipeline(config: PipelineConfig, points=None) -> PipelineResult:
    """Detect corners, fit each section per tolerance, smooth, and tabulate.

    ``points`` overrides ``config.input``.  One window fitter per section is
    shared by all tolerances, so refitting at a new tolerance only pays for
    windows not yet seen.
    """
    if points is None:
        from .io import read_points
        if config.input is None:
            raise ValueError("no input points")
        points = read_points(config.input)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    notes = []
    if config.detect_corners and n >= 5:
        rep = detect_corners(pts, config.corner, config.closed)
    else:
        rep = _no_corners(n, config.closed)
    sections = _sections(pts, rep)
    table = config.tolerances or (config.tolerance,)
    wanted = list(dict.fromkeys(table + (config.tolerance,)))
    curves, rows, junctions = {}, [], []
    for tol in wanted:
        segs = []
        for j, sec in enumerate(sections):
            pieces, sn = sec.fit(config.method, tol, config.gap_policy)
            segs.extend(pieces)
            notes.extend(f"tol {tol}, section {j}: {x}" for x in sn)
        curve = PccCurve(segs)
        curve.check_chained()
        sm = smooth_curve(curve, config.smoothing, tol, config.eps_good, points=pts,
                          keep=rep.corners if config.keep_corners else ())
        notes.extend(f"tol {tol}: {x}" for x in sm.notes)
        curves[tol] = sm.curve
        if tol == config.tolerance:
            junctions = sm.reports
        if tol in table:
            rows.append(count_row(sm.curve, pts, tol, len(sm.unfixable)))
    return PipelineResult(curves[config.tolerance], rep, rows, junctions, notes, curves)


def format_rows(rows) -> str:
    """Plain-text table in the column order tolerance, arcs, segments, bad points."""
    head = f"{'Tolerance':>9}  {'Arcs':>4}  {'Segments':>8}  {'Bad Points':>10}"
    body = [f"{r.tolerance:>9g}  {r.arcs:>4d}  {r.segments:>8d}  {r.bad_points:>10d}" for r in rows]
    return "\n".join([head] + body) + "\n"


def junction_summary(curve: PccCurve, eps_good: float = EPS_GOOD_DEFAULT) -> dict:
    cos = [c for _, c in junction_cosines(curve)]
    return {"junctions": len(cos), "bad": sum(1 for c in cos if c < eps_good)}
