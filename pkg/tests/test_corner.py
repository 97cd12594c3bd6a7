import math

import numpy as np
import pytest

from pccfit.corner import (
    CornerParams,
    detect_corners,
    find_anchor_pairs,
    grow_taubin_arcs,
    improve_dataset,
    locate_corner,
    turn_cosine,
)
from pccfit.errors import DuplicatePoints, InsufficientPoints, NoIntersection
from pccfit.geom import Circle, Line, dist
from pccfit.synth import ScanConfig, generate_scan, pentagon, polygon, rectilinear_decagon


def right_angle(n=10):
    # legs along -x and +y; the vertex (0, 0) itself is not sampled
    return np.array([(-float(k), 0.0) for k in range(n, 0, -1)] + [(0.0, float(k)) for k in range(1, n + 1)])


class TestTurnCosine:
    def test_straight(self):
        assert turn_cosine([(0, 0), (1, 0), (2, 0)], 1) == -1.0

    def test_right(self):
        assert turn_cosine([(1, 0), (0, 0), (0, 1)], 1) == pytest.approx(0.0, abs=1e-15)

    def test_reversal(self):
        assert turn_cosine([(1, 0), (0, 0), (2, 0)], 1) == 1.0

    def test_endpoint_needs_neighbour(self):
        with pytest.raises(IndexError):
            turn_cosine([(0, 0), (1, 0), (2, 0)], 0)
        assert turn_cosine([(0, 0), (1, 0), (1, 1)], 0, closed=True) == pytest.approx(math.sqrt(0.5))

    def test_duplicate(self):
        with pytest.raises(DuplicatePoints):
            turn_cosine([(0, 0), (0, 0), (1, 0)], 1)


class TestAnchors:
    def test_straight_line(self):
        pts = [(float(k), 0.0) for k in range(20)]
        assert find_anchor_pairs(pts) == []

    def test_gentle_arc(self):
        a = np.linspace(0, 1.5, 30)
        pts = 50 * np.column_stack([np.cos(a), np.sin(a)])
        assert find_anchor_pairs(pts) == []

    def test_right_angle_one_pair(self):
        pairs = find_anchor_pairs(right_angle())
        assert pairs == [(9, 10)]

    def test_rounded_right_angle_one_pair(self):
        # unit fillet centred at (-1, 1) with one sample at its midpoint
        h = math.sqrt(0.5)
        pts = ([(-float(k), 0.0) for k in range(8, 0, -1)] + [(-1 + h, 1 - h)]
               + [(0.0, float(k)) for k in range(1, 9)])
        pairs = find_anchor_pairs(pts)
        assert len(pairs) == 1 and 8 in pairs[0]

    def test_pair_rules(self):
        # asymmetric corner: P[i+1] turns more sharply than P[i-1]
        pts = np.array([(-3, 0), (-2, 0), (-1, 0), (-0.2, 0.1), (0.1, 1), (0.1, 2), (0.1, 3)], float)
        sharp = find_anchor_pairs(pts, CornerParams(pair_rule="sharper"))
        literal = find_anchor_pairs(pts, CornerParams(pair_rule="literal"))
        assert sharp == [(3, 4)]
        assert literal == [(2, 3)]

    def test_too_few(self):
        assert find_anchor_pairs([(0, 0), (1, 0), (1, 1), (0, 1)]) == []


class TestGrowth:
    def test_straight_legs_reach_limit(self):
        pts = right_angle(40)
        p = CornerParams(m_limit=12)
        k, h, lf, rf = grow_taubin_arcs(pts, (39, 40), p)
        assert max(k, h) >= p.m_limit - 1
        assert isinstance(lf, (Line, Circle)) and isinstance(rf, (Line, Circle))

    def test_near_end(self):
        with pytest.raises(InsufficientPoints):
            grow_taubin_arcs(right_angle(), (0, 1))

    def test_windows_within_delta(self):
        pts = right_angle(15)
        p = CornerParams(delta=0.05)
        k, h, lf, rf = grow_taubin_arcs(pts, (14, 15), p)
        from pccfit.geom import distance_to_object
        assert distance_to_object(pts[14 - k:15], lf).max() < p.delta
        assert distance_to_object(pts[15:15 + h], rf).max() < p.delta


class TestLocate:
    def test_lines(self):
        c = locate_corner(Line((0, 0), (1, 0)), Line((3, -1), (0, 1)), (2, 0))
        assert c == pytest.approx((3, 0))

    def test_nearest_of_two(self):
        c = locate_corner(Circle((0, 0), 1), Line((-5, 0), (1, 0)), (0.9, 0.2))
        assert c == pytest.approx((1, 0))

    def test_no_intersection(self):
        with pytest.raises(NoIntersection):
            locate_corner(Line((0, 0), (1, 0)), Line((0, 1), (1, 0)), (0, 0))


class TestDetect:
    def test_right_angle_corner(self):
        rep = detect_corners(right_angle())
        assert len(rep.corners) == 1
        assert dist(rep.corners[0], (0, 0)) < 1e-9
        assert rep.sections == [(0, 9), (10, 19)]
        sec0 = rep.section_points(right_angle(), 0)
        assert tuple(sec0[-1]) == pytest.approx((0, 0))

    def test_pentagon(self):
        shape = pentagon()
        pts, truth = generate_scan(shape, ScanConfig(step=1.0, corner_exclusion=1.0))
        rep = detect_corners(pts, closed=True)
        assert len(rep.corners) == 5
        for v in truth.vertices:
            assert min(dist(v, c) for c in rep.corners) < 0.5
        assert len(rep.sections) == 5

    def test_straight_polyline(self):
        pts = [(float(k), 0.01 * (k % 2)) for k in range(30)]
        rep = detect_corners(pts)
        assert rep.corners == [] and rep.sections == [(0, 29)]

    def test_insufficient(self):
        with pytest.raises(InsufficientPoints):
            detect_corners([(0, 0), (1, 0), (2, 0), (3, 0)])

    def test_eps_turn_monotone(self):
        shape = polygon(rectilinear_decagon() + [], closed=True)
        counts = []
        for seed in range(3):
            pts, _ = generate_scan(shape, ScanConfig(step=1.0, jitter_sigma=0.02, seed=seed))
            row = []
            for e in np.linspace(0.85, 0.9, 6):
                row.append(len(find_anchor_pairs(pts, CornerParams(eps_turn=float(e)), closed=True)))
            counts.append(row)
            assert all(a <= b for a, b in zip(row, row[1:]))

    def test_closed_corner_on_seam(self):
        pts, truth = generate_scan(polygon([(0, 0), (60, 0), (60, 60), (0, 60)]),
                                   ScanConfig(step=1.0, corner_exclusion=1.0))
        rep = detect_corners(pts, closed=True)
        assert len(rep.corners) == 4
        assert min(dist((0, 0), c) for c in rep.corners) < 1e-6


class TestImprove:
    def test_even_spacing_unchanged(self):
        pts = np.array([(float(k), 0.0) for k in range(10)])
        assert np.array_equal(improve_dataset(pts), pts)

    def test_gap_on_circle(self):
        a = np.r_[np.linspace(0, 0.5, 6), np.linspace(0.9, 1.4, 6)]
        pts = 10 * np.column_stack([np.cos(a), np.sin(a)])
        out = improve_dataset(pts)
        assert len(out) == len(pts) + 1
        assert np.hypot(*out[6]) == pytest.approx(10.0, abs=1e-9)

    def test_gap_near_end_uses_midpoint(self):
        pts = np.array([(0, 0), (5, 0), (6, 0), (7, 0), (8, 0)], float)
        out = improve_dataset(pts)
        assert tuple(out[1]) == (2.5, 0.0)
