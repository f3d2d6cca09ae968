import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pardelaunay.geometry import (
    DegenerateInputError,
    HatCoords,
    HatRect,
    Region,
    Scenario,
    ShapeSpec,
    breakpoints,
    classify_scenario,
    clockwise_perimeter_distance,
    from_square_space,
    gentle_edge,
    hat_coords,
    hat_norm,
    orient_pair,
    region_partition,
    scenario_frame,
    to_square_space,
)

aspects = st.floats(1.0, 10.0)
angles = st.floats(0.05, math.pi / 2)
coords = st.floats(-100, 100, allow_nan=False)


def test_shape_rejects_bad_parameters():
    for a, t in [(0.5, 1.0), (math.inf, 1.0), (2.0, 0.0), (2.0, 1e-7), (2.0, 2.0), (math.nan, 1.0)]:
        with pytest.raises(ValueError):
            ShapeSpec(a, t)
    ShapeSpec(1.0, math.pi / 2)


@given(aspects, angles)
def test_square_map_sends_sides_to_unit_axes(a, t):
    s = ShapeSpec(a, t)
    assert np.allclose(s.square_map @ s.short_vec, [1, 0], atol=1e-12)
    assert np.allclose(s.square_map @ s.long_vec, [0, 1], atol=1e-12)
    assert np.allclose(s.square_map @ s.inverse_map, np.eye(2), atol=1e-12)


def test_square_space_examples():
    assert np.allclose(to_square_space(ShapeSpec(2, math.pi / 2), [0, 2]), [0, 1])
    s = ShapeSpec(1, math.pi / 3)
    assert np.allclose(to_square_space(s, s.short_vec), [1, 0], atol=1e-12)
    assert np.allclose(to_square_space(ShapeSpec(2, math.pi / 3), [0, 0]), [0, 0])


@given(aspects, angles, coords, coords)
def test_square_space_round_trip(a, t, x, y):
    s = ShapeSpec(a, t)
    back = from_square_space(s, to_square_space(s, [x, y]))
    assert np.allclose(back, [x, y], rtol=1e-12, atol=1e-12)


def test_frame_table():
    s = ShapeSpec(2.0, 0.7)
    sn, c = math.sin(0.7), math.cos(0.7)
    expect = {
        Scenario.S1: ((0, -1), (sn, c), math.pi - 0.7, 0.5),
        Scenario.S2: ((sn, c), (0, -1), math.pi - 0.7, 2.0),
        Scenario.S3: ((sn, c), (0, 1), 0.7, 2.0),
        Scenario.S4: ((0, 1), (sn, c), 0.7, 0.5),
    }
    for sc, (xh, yh, th, L) in expect.items():
        f = scenario_frame(s, sc)
        assert np.allclose(f.xhat, xh) and np.allclose(f.yhat, yh)
        assert f.theta == pytest.approx(th) and f.L == pytest.approx(L)
        # theta is the counterclockwise angle from xhat to yhat
        ang = math.atan2(yh[1], yh[0]) - math.atan2(xh[1], xh[0])
        assert math.cos(ang) == pytest.approx(math.cos(th))


def test_classify_examples():
    f, hc = classify_scenario(ShapeSpec(1, math.pi / 2), (0, 0), (1, 0))
    assert f.scenario == Scenario.S2
    # oracle: solve b = xh*(1,0) + yh*(0,-1) by hand
    assert hc == pytest.approx((1.0, 0.0))
    assert classify_scenario(ShapeSpec(2, math.pi / 3), (0, 0), (0, 1))[0].scenario == Scenario.S4
    assert classify_scenario(ShapeSpec(2, math.pi / 2), (0, 0), (1, -5))[0].scenario == Scenario.S1


def test_classify_errors():
    s = ShapeSpec(2, 1.0)
    with pytest.raises(DegenerateInputError):
        classify_scenario(s, (1, 1), (1, 1))
    with pytest.raises(ValueError):
        classify_scenario(s, (1, 0), (0, 0))


def test_breakpoints_are_right_closed():
    s = ShapeSpec(2.0, 1.0)
    b1, b2, b3 = breakpoints(s)
    got = [classify_scenario(s, (0, 0), (1, v))[0].scenario for v in (b1, b2, b3)]
    assert got == [Scenario.S1, Scenario.S2, Scenario.S3]
    assert classify_scenario(s, (0, 0), (1, b3 + 1e-9))[0].scenario == Scenario.S4


@given(aspects, angles, coords, coords, coords, coords)
def test_hat_frame_properties(a, t, x1, y1, x2, y2):
    assume(abs(x1 - x2) + abs(y1 - y2) > 1e-6)
    s = ShapeSpec(a, t)
    p, q, _ = orient_pair((x1, y1), (x2, y2))
    f, hc = classify_scenario(s, p, q)
    scale = max(1.0, abs(hc.xh), abs(hc.yh))
    assert hc.xh > -1e-12 * scale and hc.yh >= -1e-9 * scale
    assert f.L * hc.xh >= hc.yh - 1e-9 * scale
    d = float(np.hypot(*(q - p)))
    assert hat_norm(f, hc) == pytest.approx(d, rel=1e-9, abs=1e-12)
    back = hc.xh * np.array(f.xhat) + hc.yh * np.array(f.yhat)
    assert np.allclose(back, q - p, rtol=1e-9, atol=1e-9 * scale)


def test_hat_norm_examples():
    s = ShapeSpec(2, math.pi / 3)
    f3 = scenario_frame(s, Scenario.S3)
    assert hat_norm(f3, (1, 1)) == pytest.approx(math.sqrt(3))
    f = scenario_frame(ShapeSpec(1, math.pi / 2), Scenario.S2)
    assert hat_norm(f, (3, 4)) == pytest.approx(5)
    for sc in Scenario:
        assert hat_norm(scenario_frame(s, sc), (2.5, 0)) == pytest.approx(2.5)


def test_frame_vectors_are_images_of_parallelogram_sides():
    s = ShapeSpec(3.0, 0.8)
    for sc in Scenario:
        f = scenario_frame(s, sc)
        for v in (f.xhat, f.yhat):
            img = to_square_space(s, v)
            # every hat axis is a side direction, so it maps onto a square axis
            assert min(abs(img[0]), abs(img[1])) < 1e-12


def test_gentle_edge():
    f2 = scenario_frame(ShapeSpec(2, 1.0), Scenario.S2)
    assert gentle_edge(f2, (0, 0), (1, 2))
    assert not gentle_edge(f2, (0, 0), (1, 2.1))
    f1 = scenario_frame(ShapeSpec(2, 1.0), Scenario.S1)
    assert f1.L == 0.5 and gentle_edge(f1, (0, 0), (4, 1))


def _rect(w, h, L=1.0):
    f = scenario_frame(ShapeSpec(max(L, 1 / L), math.pi / 2), Scenario.S2 if L >= 1 else Scenario.S1)
    return HatRect(f, HatCoords(0.0, 0.0), HatCoords(w, h))


def test_clockwise_perimeter_distance():
    unit = _rect(1, 1)
    assert clockwise_perimeter_distance(unit, (0, 1), (0, 0)) == pytest.approx(3)
    assert clockwise_perimeter_distance(unit, (0.3, 1), (0.3, 1)) == 0
    r = _rect(2, 4, L=2)
    assert clockwise_perimeter_distance(r, (0, 4), (2, 0)) == pytest.approx(2 + 4)
    assert r.perimeter == pytest.approx((2 + 2 * 2) * 2)
    with pytest.raises(ValueError):
        clockwise_perimeter_distance(r, (1, 1), (0, 0))


@given(st.floats(0, 1), st.floats(0, 1))
def test_perimeter_walks_are_complementary(s, t):
    r = _rect(1, 1)

    def on(p):
        q = 4 * p
        if q < 1:
            return (q, 1)
        if q < 2:
            return (1, 2 - q)
        if q < 3:
            return (3 - q, 0)
        return (0, q - 3)

    a, b = on(s), on(t)
    d1 = clockwise_perimeter_distance(r, a, b)
    d2 = clockwise_perimeter_distance(r, b, a)
    assert 0 <= d1 <= r.perimeter + 1e-12
    if d1 > 1e-9 and d2 > 1e-9:
        assert d1 + d2 == pytest.approx(r.perimeter)


def test_hatrect_rejects_unordered_corners():
    f = scenario_frame(ShapeSpec(1, 1.0), Scenario.S3)
    with pytest.raises(ValueError):
        HatRect(f, HatCoords(1, 0), HatCoords(0, 1))


def test_region_partition_examples():
    A = 2.0
    f3 = scenario_frame(ShapeSpec(A, 1.0), Scenario.S3)
    a, b = (0.0, 0.0), (4.0, 3.0)
    # exactly on the slope-A ray from a: the non-strict B side
    assert region_partition(f3, a, b, (1.0, 2.0), A) == Region.B
    assert region_partition(f3, a, (4.0, 0.0), (2.0, 0.0), A) == Region.B
    assert region_partition(f3, a, b, (0.0, 1.0), A) == Region.A
    assert region_partition(f3, a, b, (3.9, 0.0), A) == Region.C
    with pytest.raises(ValueError):
        region_partition(f3, a, b, (5.0, 1.0), A)


def test_region_partition_tall_scenarios_cover_box():
    A = 3.0
    f1 = scenario_frame(ShapeSpec(A, 1.0), Scenario.S1)
    a, b = (0.0, 0.0), (6.0, 1.0)
    seen = {region_partition(f1, a, b, (x, y), A) for x in np.linspace(0, 6, 13) for y in np.linspace(0, 1, 5)}
    assert seen <= set(Region)
