import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anim_eval.geometry import (OBB, GeometryError, convex_hull, hungarian, min_area_obb, polygon_area,
                                polygon_iou, unwrap_angles)
from oracles import brute_assignment, raster_iou, random_convex_quad, rotating_rect_angles, sweep_min_area


def rotate(points, deg, about=(0.0, 0.0)):
    a = math.radians(deg)
    R = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    p = np.asarray(points, dtype=float) - about
    return p @ R.T + about


# ---------------------------------------------------------------- OBB

def test_unit_square_obb():
    box = min_area_obb([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert (box.cx, box.cy, box.w, box.h, box.theta) == pytest.approx((0.5, 0.5, 1, 1, 0))


def test_rotated_square_obb():
    sq = rotate([(0, 0), (1, 0), (1, 1), (0, 1)], 30, about=(0.5, 0.5))
    box = min_area_obb(sq)
    assert box.area == pytest.approx(1.0, abs=1e-6)
    assert (box.theta - 30 + 45) % 90 - 45 == pytest.approx(0, abs=1e-9)


def test_obb_corners_roundtrip():
    box = OBB(10, 20, 8, 4, 25)
    fit = min_area_obb(box.corners())
    assert (fit.cx, fit.cy, fit.w, fit.h, fit.theta) == pytest.approx((10, 20, 8, 4, 25))
    assert polygon_area(box.corners()) == pytest.approx(32)


def test_obb_canonical_angle_swaps_axes():
    # a box at 60 degrees is reported at -30 with w and h exchanged
    fit = min_area_obb(OBB(0, 0, 8, 4, 60).corners())
    assert fit.theta == pytest.approx(-30)
    assert (fit.w, fit.h) == pytest.approx((4, 8))


def test_obb_degenerate_inputs():
    assert min_area_obb([(3, 4)]).area == 0
    seg = min_area_obb([(0, 0), (2, 2), (1, 1)])
    # 45 degrees canonicalises to -45, so the long side lands on h
    assert seg.theta == -45
    assert (seg.w, seg.h) == pytest.approx((0, math.sqrt(8)))
    with pytest.raises(GeometryError):
        min_area_obb([])


def test_obb_sweep_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        pts = rng.uniform(0, 1, (200, 2))
        assert min_area_obb(pts).area <= sweep_min_area(pts) * (1 + 1e-6)


def test_obb_contains_points():
    rng = np.random.default_rng(2)
    pts = rng.normal(size=(100, 2))
    box = min_area_obb(pts)
    u, n = box.axes()
    d = pts - (box.cx, box.cy)
    assert np.all(np.abs(d @ u) <= box.w / 2 + 1e-9)
    assert np.all(np.abs(d @ n) <= box.h / 2 + 1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-180, 180))
def test_obb_area_rotation_invariant(seed, deg):
    pts = np.random.default_rng(seed).uniform(-5, 5, (30, 2))
    a0 = min_area_obb(pts).area
    a1 = min_area_obb(rotate(pts, deg)).area
    assert a1 == pytest.approx(a0, rel=1e-6)


def test_convex_hull_square_with_interior():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)]
    hull = convex_hull(pts)
    assert len(hull) == 4
    assert polygon_area(hull) == pytest.approx(4)


# ---------------------------------------------------------------- IoU

SQ = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)


def test_iou_identity_and_disjoint():
    assert polygon_iou(SQ, SQ) == 1.0
    assert polygon_iou(SQ, SQ + 5) == 0.0


def test_iou_half_overlap():
    assert polygon_iou(SQ, SQ + (0.5, 0)) == pytest.approx(1 / 3, abs=1e-9)


def test_iou_orientation_free():
    assert polygon_iou(SQ[::-1], SQ + (0.5, 0)) == pytest.approx(1 / 3, abs=1e-9)


def test_iou_rejects_nonconvex():
    arrow = [(0, 0), (2, 0), (1, 0.2), (1, 2)]
    with pytest.raises(GeometryError):
        polygon_iou(arrow, SQ)


def test_iou_raster_oracle_sample():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b = random_convex_quad(rng), random_convex_quad(rng)
        assert abs(polygon_iou(a, b) - raster_iou(a, b, 1000)) < 0.01


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_iou_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a, b = random_convex_quad(rng), random_convex_quad(rng)
    ab, ba = polygon_iou(a, b), polygon_iou(b, a)
    assert 0.0 <= ab <= 1.0
    assert ab == pytest.approx(ba, abs=1e-12)


def test_iou_vertex_rotation_is_identity():
    q = random_convex_quad(np.random.default_rng(4))
    assert polygon_iou(q, np.roll(q, 2, axis=0)) == pytest.approx(1.0, abs=1e-12)


def test_iou_scaled_obb_self():
    box = OBB(300, 400, 120, 40, 17)
    for s in (0.25, 1.0, 3.0):
        c = box.scaled(s).corners()
        assert polygon_iou(c, c) == pytest.approx(1.0)


# ---------------------------------------------------------------- hungarian

def test_hungarian_one_by_one():
    r = hungarian([[0.2]])
    assert r.matches == [(0, 0)] and r.total_cost == pytest.approx(0.2)


def test_hungarian_two_by_three():
    r = hungarian([[0.9, 0.1, 0.8], [0.2, 0.9, 0.9]])
    assert sorted(r.matches) == [(0, 1), (1, 0)]
    assert r.total_cost == pytest.approx(0.3)
    assert r.unmatched_cols == [2]


def test_hungarian_three_by_one_pads():
    r = hungarian([[0.7], [0.4], [0.9]], pad_cost=1.0)
    assert r.matches == [(1, 0)]
    assert r.unmatched_rows == [0, 2]
    assert r.total_cost == pytest.approx(0.4 + 2)


def test_hungarian_empty():
    r = hungarian(np.zeros((2, 0)))
    assert r.matches == [] and r.unmatched_rows == [0, 1] and r.total_cost == 2.0
    assert hungarian(np.zeros((0, 3))).unmatched_cols == [0, 1, 2]


def test_hungarian_rejects_nan():
    with pytest.raises(GeometryError):
        hungarian([[0.1, math.nan]])


def test_hungarian_lexicographic_ties():
    # every permutation costs the same; the identity is lexicographically first
    r = hungarian(np.full((4, 4), 0.5))
    assert r.matches == [(0, 0), (1, 1), (2, 2), (3, 3)]


def test_hungarian_tie_battery():
    rng = np.random.default_rng(5)
    for _ in range(150):
        R, C = rng.integers(1, 5, 2)
        cost = rng.choice([0.0, 0.5, 1.0], size=(R, C))
        matches, total = brute_assignment(cost)
        r = hungarian(cost)
        assert r.total_cost == pytest.approx(total, abs=1e-12)
        assert sorted(r.matches) == matches


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_hungarian_never_beaten(R, C, seed):
    cost = np.random.default_rng(seed).uniform(0, 1, (R, C))
    r = hungarian(cost)
    rows = [i for i, _ in r.matches]
    cols = [j for _, j in r.matches]
    assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)
    for k in range(min(R, C) + 1):
        for rs in itertools.combinations(range(R), k):
            for cs in itertools.permutations(range(C), k):
                alt = sum(cost[i, j] for i, j in zip(rs, cs)) + (R - k)
                assert r.total_cost <= alt + 1e-9


# ---------------------------------------------------------------- unwrap

def test_unwrap_rotating_rectangle():
    # a rectangle turning -20 degrees per frame, read in a [0, 90) convention
    assert unwrap_angles([10, 80, 60]) == pytest.approx([10, -10, -30])


def test_unwrap_constant_and_wrap():
    assert unwrap_angles([5, 5, 5]) == [5, 5, 5]
    assert unwrap_angles([0, 44, 88, 42]) == pytest.approx([0, 44, 88, 132])


def test_unwrap_simulated_rotation():
    raw = rotating_rect_angles(7.0, 60)
    out = unwrap_angles(raw)
    assert out[-1] - out[0] == pytest.approx(7.0 * 59)


def test_unwrap_half_period_edge():
    # a +45 step stays +45; a -45 step becomes +45
    assert unwrap_angles([0, 45]) == [0, 45]
    assert unwrap_angles([0, -45]) == [0, 45]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1000, 1000), min_size=2, max_size=40))
def test_unwrap_differences_in_half_open_band(series):
    d = np.diff(unwrap_angles(series))
    assert np.all(d > -45 - 1e-9) and np.all(d <= 45 + 1e-9)
    # each output differs from its input by a multiple of the period
    k = (np.asarray(unwrap_angles(series)) - np.asarray(series)) / 90
    assert np.allclose(k, np.round(k), atol=1e-6)
