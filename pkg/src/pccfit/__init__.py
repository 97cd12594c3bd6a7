"""Approximate planar scans with chains of circular arcs and segments, recovering sharp corners."""

from .biarc import (
    Biarc,
    RationalArcBezier,
    arc_to_bezier,
    best_ratio_biarc,
    biarc_admissible,
    biarc_admissible_angles,
    build_biarc,
    build_double_biarc,
    pcc_eval,
)
from .c0 import build_spline_c0, fit_c0, select_g_c0
from .corner import CornerParams, CornerReport, detect_corners, find_anchor_pairs, grow_taubin_arcs, improve_dataset
from .errors import PccError
from .geom import ArcSeg, Circle, Line, PccCurve, circle_through_three
from .io import read_curve, read_points, write_curve
from .kernels import available as available_backends, backend, set_backend
from .longest import FitTables, SplineBuild, build_m, build_spline, fit_longest, select_g
from .lsq import ChordFrame, WindowFitter, fit_arc, limit_f, minimize_f, objective_f, taubin_fit
from .pipeline import PipelineConfig, PipelineResult, ResultRow, run_pipeline
from .smoothing import JunctionReport, classify_junction, smooth_curve, smooth_with_biarc, smooth_with_fillet
from .synth import ScanConfig, ShapeSpec, generate_scan, pentagon, rounded_polygon

__version__ = "0.1.0"
