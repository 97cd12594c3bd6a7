"""Randomised invariants (hypothesis)."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from pccfit.biarc import arc_to_bezier, biarc_admissible, biarc_admissible_angles, build_biarc
from pccfit.c0 import select_g_c0
from pccfit.corner import CornerParams, anchor_mask, detect_corners, find_anchor_pairs, section_indices
from pccfit.errors import Inadmissible, NegativeBeta
from pccfit.geom import ArcSeg, Circle, circle_circle_intersection, circle_through_three, dot
from pccfit.longest import select_g, windows
from pccfit.lsq import ChordFrame, fit_arc, limit_f, minimize_f, objective_f, taubin_fit
from pccfit.synth import ScanConfig, generate_scan, regular_polygon

coord = st.floats(-100, 100, allow_nan=False)
point = st.tuples(coord, coord)
angle = st.floats(0, 2 * math.pi)
FAST = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def m_tables(draw, lo=5, hi=80):
    n = draw(st.integers(lo, hi))
    m = [draw(st.integers(3, n - i)) for i in range(n - 2)] + [0, 0]
    return np.array(m)


def well_separated(*pts, gap=1e-3):
    return all(math.dist(a, b) > gap for i, a in enumerate(pts) for b in pts[i + 1:])


# -- geometry -----------------------------------------------------------------

@FAST
@given(point, point, point)
def test_circle_through_three_permutation(a, b, c):
    assume(well_separated(a, b, c, gap=0.1))
    base = circle_through_three(a, b, c)
    for p in [(b, c, a), (c, a, b), (b, a, c)]:
        other = circle_through_three(*p)
        assert type(other) is type(base)
        if isinstance(base, Circle):
            assert math.dist(base.center, other.center) <= 1e-9 * max(1.0, base.radius)
            assert abs(base.radius - other.radius) <= 1e-9 * max(1.0, base.radius)


@FAST
@given(point, st.floats(0.5, 50), point, st.floats(0.5, 50))
def test_circle_intersection_swap(c1, r1, c2, r2):
    a = circle_circle_intersection(Circle(c1, r1), Circle(c2, r2))
    b = circle_circle_intersection(Circle(c2, r2), Circle(c1, r1))
    assert len(a) == len(b)
    for p, q in zip(sorted(a), sorted(b)):
        assert math.dist(p, q) <= 1e-7 * max(1.0, r1, r2)


@FAST
@given(point, st.floats(0.1, 100), angle, st.floats(0.05, 6.0), st.booleans())
def test_arc_tangent_orthogonal(c, r, a0, sweep, ccw):
    s = (c[0] + r * math.cos(a0), c[1] + r * math.sin(a0))
    a1 = a0 + (sweep if ccw else -sweep)
    e = (c[0] + r * math.cos(a1), c[1] + r * math.sin(a1))
    arc = ArcSeg.arc(s, e, c, ccw=ccw)
    rad = ((s[0] - c[0]) / r, (s[1] - c[1]) / r)
    assert abs(dot(arc.tangent_at("start"), rad)) <= 1e-12


# -- constrained fit ----------------------------------------------------------

@st.composite
def noisy_windows(draw):
    g = np.random.default_rng(draw(st.integers(0, 2 ** 32 - 1)))
    n = int(g.integers(3, 25))
    r = g.uniform(2, 200)
    a0, sw = g.uniform(0, 2 * math.pi), g.uniform(0.1, 3.0)
    ang = a0 + sw * np.linspace(0, 1, n + 2)
    pts = g.uniform(-50, 50, 2) + r * np.column_stack([np.cos(ang), np.sin(ang)])
    pts[1:-1] += g.normal(0, draw(st.sampled_from([0.0, 0.01, 0.2])), (n, 2))
    return pts


@FAST
@given(noisy_windows(), st.floats(-1e3, 1e3))
def test_radius_identity(pts, t):
    f = ChordFrame.from_points(pts[0], pts[-1])
    c = f.center(t)
    assert math.dist(c, f.p0) == pytest.approx(f.radius(t), rel=1e-12)


@FAST
@given(noisy_windows())
def test_fit_not_worse_than_chord_center_or_line(pts):
    f = ChordFrame.from_points(pts[0], pts[-1])
    fit = minimize_f(f, pts[1:-1])
    if not fit.is_segment:
        tol = 1e-12 * (1.0 + fit.f_star)
        assert fit.f_star <= objective_f(0.0, f, pts[1:-1]) + tol
        assert fit.f_star <= limit_f(f, pts[1:-1]) + tol


@FAST
@given(noisy_windows())
def test_fit_interpolates_endpoints(pts):
    arc = fit_arc(pts)
    assert math.dist(arc.start, tuple(pts[0])) <= 1e-9
    assert math.dist(arc.end, tuple(pts[-1])) <= 1e-9


@FAST
@given(noisy_windows(), angle, point)
def test_taubin_rigid_motion(pts, rot, shift):
    base = taubin_fit(pts)
    assume(isinstance(base, Circle))
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    moved = taubin_fit(pts @ R.T + np.asarray(shift))
    want = R @ np.asarray(base.center) + np.asarray(shift)
    scale = max(1.0, base.radius)
    assert math.dist(moved.center, tuple(want)) <= 1e-9 * scale * 10
    assert abs(moved.radius - base.radius) <= 1e-9 * scale * 10


# -- biarcs -------------------------------------------------------------------

@FAST
@given(point, angle, point, angle)
def test_biarc_g1_and_interpolation(ps, a, pe, b):
    assume(math.dist(ps, pe) > 1e-2)
    ts, te = (math.cos(a), math.sin(a)), (math.cos(b), math.sin(b))
    try:
        bi = build_biarc(ps, ts, pe, te)
    except (Inadmissible, NegativeBeta):
        return
    a1, a2 = bi.arcs
    assert math.dist(a1.start, ps) <= 1e-9 and math.dist(a2.end, pe) <= 1e-9
    assert dot(a1.tangent_at("start"), ts) >= 1 - 1e-12
    assert dot(a2.tangent_at("end"), te) >= 1 - 1e-12
    assert dot(a1.tangent_at("end"), a2.tangent_at("start")) >= 1 - 1e-12
    assert math.dist(bi.p3, bi.p1) == pytest.approx(bi.alpha + bi.beta, rel=1e-9, abs=1e-9)
    for arc in bi.arcs:
        if arc.is_arc:
            assert 0.0 <= arc.sweep < math.pi


@FAST
@given(point, angle, point, angle)
def test_admissibility_forms_agree(ps, a, pe, b):
    assume(math.dist(ps, pe) > 1e-2)
    ts, te = (math.cos(a), math.sin(a)), (math.cos(b), math.sin(b))
    assert biarc_admissible(ps, ts, pe, te) == biarc_admissible_angles(ps, ts, pe, te)


@FAST
@given(point, st.floats(0.5, 50), angle, st.floats(0.05, 3.0))
def test_bezier_weight(c, r, a0, sweep):
    p0 = (c[0] + r * math.cos(a0), c[1] + r * math.sin(a0))
    p2 = (c[0] + r * math.cos(a0 + sweep), c[1] + r * math.sin(a0 + sweep))
    # apex of the tangent lines
    h = r / math.cos(sweep / 2)
    p1 = (c[0] + h * math.cos(a0 + sweep / 2), c[1] + h * math.sin(a0 + sweep / 2))
    bz = arc_to_bezier(p0, p1, p2)
    assert bz.w1 == pytest.approx(math.cos(sweep / 2), abs=1e-9)


# -- window selection -----------------------------------------------------------

@settings(max_examples=500, deadline=None)
@given(m_tables())
def test_select_g_c0_chains(m):
    g = select_g_c0(m)
    w = windows(g)
    assert w and w[0][0] == 0
    for (s0, e0), (s1, e1) in zip(w, w[1:]):
        assert s1 == e0
    assert g[-1] == g[-2] == 0
    for k, v in enumerate(g):
        assert v == 0 or v >= 2


@settings(max_examples=500, deadline=None)
@given(m_tables())
def test_select_g_valid(m):
    g = select_g(m)
    assert g[-1] == g[-2] == 0
    for k, v in enumerate(g):
        assert v == 0 or 3 <= v <= m[k]
    w = windows(g)
    assert w
    for (s0, e0), (s1, e1) in zip(w, w[1:]):
        assert s1 >= e0


# -- corners and scans ----------------------------------------------------------

@st.composite
def jittered_polygons(draw):
    n = draw(st.integers(3, 8))
    side = draw(st.floats(30, 60))
    rot = draw(angle)
    sigma = draw(st.sampled_from([0.0, 0.01, 0.03]))
    seed = draw(st.integers(0, 10 ** 6))
    shape = regular_polygon(n, side, rotation=rot)
    return generate_scan(shape, ScanConfig(step=1.0, jitter_sigma=sigma, seed=seed))


@settings(max_examples=40, deadline=None)
@given(jittered_polygons())
def test_anchor_screening(scan):
    pts, _ = scan
    p = CornerParams()
    mask, cos = anchor_mask(pts, p, closed=True)
    for i in np.flatnonzero(mask):
        assert cos[i] >= -p.eps_turn
        assert circle_through_three(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]).radius < p.r_max
    for i, j in find_anchor_pairs(pts, p, closed=True):
        assert mask[i] or mask[j]


@settings(max_examples=40, deadline=None)
@given(jittered_polygons())
def test_sections_partition(scan):
    pts, _ = scan
    rep = detect_corners(pts, closed=True)
    idx = [i for sec in rep.sections for i in section_indices(sec, len(pts))]
    assert sorted(idx) == list(range(len(pts)))


@settings(max_examples=25, deadline=None)
@given(jittered_polygons(), st.floats(0.1, 10))
def test_corner_scale_equivariance(scan, s):
    pts, _ = scan
    a = detect_corners(pts, CornerParams(), closed=True)
    # every length parameter scales, including the straight-line cap
    base = CornerParams()
    b = detect_corners(pts * s, CornerParams(r_max=base.r_max * s, delta=base.delta * s,
                                             r_degenerate=base.r_degenerate * s), closed=True)
    assert a.anchors == b.anchors
    for p, q in zip(a.corners, b.corners):
        assert math.dist((s * p[0], s * p[1]), q) <= 1e-9 * s * max(1.0, math.hypot(*p))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.floats(30, 60), angle)
def test_convex_polygon_vertices_recovered(n, side, rot):
    # a vertex between two samples splits its turn over both; past 60 degrees
    # of exterior turn the default screen needs a looser eps_turn to see it
    params = CornerParams() if n <= 6 else CornerParams(eps_turn=0.95)
    shape = regular_polygon(n, side, rotation=rot)
    pts, truth = generate_scan(shape, ScanConfig(step=1.0, corner_exclusion=1.0))
    rep = detect_corners(pts, params, closed=True)
    assert len(rep.corners) == n
    for v in truth.vertices:
        assert min(math.dist(v, c) for c in rep.corners) <= 2.0


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 8), st.floats(30, 60), angle, st.floats(0.3, 2.0))
def test_constant_spacing(n, side, rot, step):
    shape = regular_polygon(n, side, rotation=rot)
    _, truth = generate_scan(shape, ScanConfig(step=step))
    ds = np.diff(truth.arclength)
    same_piece = np.diff(truth.piece_index) == 0
    assert np.allclose(ds[same_piece], step, rtol=0, atol=1e-9)
