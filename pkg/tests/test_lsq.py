import math

import numpy as np
import pytest

import datasets
import oracles
from pccfit.errors import CenterHitsPoint, DegenerateInput
from pccfit.geom import Circle, Line
from pccfit.lsq import (
    ChordFrame,
    WindowFitter,
    fit_arc,
    limit_f,
    minimize_f,
    objective_f,
    taubin_fit,
    taubin_objective,
)

FRAME = ChordFrame.from_points((0, 0), (2, 0))


def on_circle(center, r, angles):
    return [(center[0] + r * math.cos(a), center[1] + r * math.sin(a)) for a in angles]


def arc_interior():
    # circle through (0,0) and (2,0) with center (1, 0.5)
    r = math.hypot(1, 0.5)
    a0, a1 = math.atan2(-0.5, -1), math.atan2(-0.5, 1)
    angs = np.linspace(a0, a1 + 2 * math.pi, 9)[1:-1]
    return on_circle((1, 0.5), r, angs)


class TestFrame:
    def test_axes(self):
        f = ChordFrame.from_points((1, 1), (1, 4))
        assert f.d == 3.0 and f.u == (0.0, 1.0) and f.u_perp == (-1.0, 0.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            ChordFrame.from_points((1, 1), (1, 1))

    def test_radius_formula(self):
        assert FRAME.radius(0.5) == pytest.approx(math.hypot(1, 0.5), abs=1e-15)


class TestObjective:
    def test_center_on_interior_point(self):
        # center C(0) = (1,0) coincides with the interior point: R = 1, distance 0
        assert objective_f(0.0, FRAME, [(1, 0)]) == pytest.approx(1.0)

    def test_strict_flags_center_hit(self):
        with pytest.raises(CenterHitsPoint):
            objective_f(0.0, FRAME, [(1, 0)], strict=True)

    def test_exact_circle_zero(self):
        assert objective_f(0.5, FRAME, arc_interior()) == pytest.approx(0.0, abs=1e-24)

    def test_matches_textbook_formula(self):
        g = datasets.rng(3)
        for _ in range(50):
            p0, p1, inner = datasets.box_instance(int(g.integers(1 << 30)))
            t = g.uniform(-300, 300)
            fr = ChordFrame.from_points(p0, p1)
            want = oracles.naive_f(t, p0, p1, inner)
            assert objective_f(t, fr, inner) == pytest.approx(want, rel=1e-9, abs=1e-9)


class TestLimit:
    def test_on_chord_is_zero(self):
        assert limit_f(FRAME, [(0.5, 0), (1.3, 0)]) == 0.0

    def test_single_offset_point(self):
        assert limit_f(FRAME, [(1, 1)]) == pytest.approx(1.0)

    def test_numeric_limit(self):
        p0, p1, inner = datasets.box_instance(11)
        fr = ChordFrame.from_points(p0, p1)
        L = limit_f(fr, inner)
        # the gap to the limit decays like 1/t
        gaps = [abs(objective_f(s * t, fr, inner) - L) for t in (1e4, 1e5, 1e6) for s in (1, -1)]
        assert gaps[2] < gaps[0] / 5 and gaps[4] < gaps[2] / 5
        assert abs(objective_f(1e8, fr, inner) - L) <= 1e-3 * (1 + L)


class TestMinimize:
    def test_exact_circle(self, each_backend):
        fit = minimize_f(FRAME, arc_interior())
        assert fit.t_star == pytest.approx(0.5, abs=1e-9)
        assert fit.max_residual < 1e-9 and not fit.is_segment
        assert math.hypot(fit.center[0] - 1, fit.center[1] - 0.5) < 1e-9

    def test_collinear_is_segment(self, each_backend):
        fit = minimize_f(FRAME, [(0.5, 0), (1.0, 0), (1.5, 0)], epsilon=0.1)
        assert fit.is_segment and fit.max_residual == 0.0
        assert fit.to_piece().kind == "segment"

    def test_radius_invariant(self):
        p0, p1, inner = datasets.noisy_arc(4)
        fit = minimize_f(ChordFrame.from_points(p0, p1), inner)
        assert fit.radius == pytest.approx(math.hypot(fit.frame.d / 2, fit.t_star), rel=1e-12)
        res = np.abs(np.hypot(*(inner - np.asarray(fit.center)).T) - fit.radius)
        assert fit.max_residual == pytest.approx(res.max(), rel=1e-9, abs=1e-12)

    def test_against_frozen_grid(self, frozen):
        for case in frozen["arc_cases"][:10]:
            p0, p1, inner = datasets.noisy_arc(case["seed"])
            fit = minimize_f(ChordFrame.from_points(p0, p1), inner)
            assert fit.bracket == pytest.approx(case["bracket"], rel=1e-12)
            assert abs(fit.t_star - case["t_grid"]) <= 1e-4 * fit.frame.d
            assert fit.f_star <= case["f_grid"] + 1e-10

    def test_arc_side_follows_data(self):
        inner = on_circle((1, -0.5), math.hypot(1, 0.5), [math.pi / 2 - 0.3, math.pi / 2, math.pi / 2 + 0.3])
        piece = fit_arc([(0, 0), *inner[::-1], (2, 0)])
        # data above the chord, traversed left to right: clockwise
        assert piece.is_arc and piece.ccw is False
        assert piece.distance_to(inner).max() < 1e-9


class TestWindowFitter:
    def test_cached_and_tolerance_aware(self):
        pts = np.column_stack([np.arange(8.0), 0.01 * np.arange(8.0) ** 2])
        wf = WindowFitter(pts)
        a = wf.max_residual(0, 7, 0.5)
        assert (0, 7) in wf._raw
        assert wf.max_residual(0, 7, 0.5) == a
        assert wf.piece(0, 1, 0.5).kind == "segment"
        p = wf.piece(2, 6, 0.5, offset=10)
        assert (p.first, p.last) == (12, 16)


class TestTaubin:
    def test_exact_circle(self):
        pts = on_circle((0, 0), 1, np.linspace(0, 2, 7))
        c = taubin_fit(pts)
        assert isinstance(c, Circle)
        assert math.hypot(*c.center) < 1e-9 and c.radius == pytest.approx(1, abs=1e-9)

    def test_four_symmetric_points(self):
        c = taubin_fit([(1, 0), (-1, 0), (0, 1), (0, -1)])
        assert math.hypot(*c.center) < 1e-12 and c.radius == pytest.approx(1, abs=1e-12)

    def test_straight_data_gives_line(self):
        obj = taubin_fit([(0, 0), (1, 1), (2, 2), (3, 3)])
        assert isinstance(obj, Line)
        assert abs(abs(obj.direction[0]) - math.sqrt(0.5)) < 1e-12

    def test_too_few(self):
        with pytest.raises(DegenerateInput):
            taubin_fit([(0, 0), (1, 0), (1, 0)])

    def test_against_frozen_grid(self, frozen):
        for case in frozen["taubin_cases"]:
            pts = datasets.taubin_instance(case["seed"])
            c = taubin_fit(pts)
            assert abs(taubin_objective(pts, c.center, c.radius) - case["f_min"]) <= 1e-6
