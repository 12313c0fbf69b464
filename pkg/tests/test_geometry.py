import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from maecsim.geometry import (
    Field,
    InvalidRadiusError,
    InvalidSectorError,
    Point,
    displace,
    opposite_sector,
    physical_hops,
    sector_center_angle,
    sector_of,
)

O = Point(0.0, 0.0)


def at_angle(theta, d=10.0):
    return Point(d * math.cos(theta), d * math.sin(theta))


@pytest.mark.parametrize("d, expected", [(0.0, 0), (10.0, 1), (20.0, 2), (20.000001, 3), (0.5, 1)])
def test_physical_hops_boundaries(d, expected):
    assert physical_hops(d, 10.0) == expected


@pytest.mark.parametrize("r", [0.0, -1.0])
def test_physical_hops_rejects_bad_radius(r):
    with pytest.raises(InvalidRadiusError):
        physical_hops(1.0, r)


@given(st.floats(1e-6, 1e6), st.floats(1e-3, 1e3))
def test_hop_interval(d, r):
    i = physical_hops(d, r)
    assert i == math.ceil(d / r)
    assert (i - 1) * r < d <= i * r or math.isclose(d, i * r) or math.isclose(d, (i - 1) * r)


@given(st.floats(0, 1e5), st.floats(0, 1e5), st.floats(1e-2, 1e3))
def test_hops_monotone(a, b, r):
    lo, hi = sorted((a, b))
    assert physical_hops(lo, r) <= physical_hops(hi, r)


def test_sector_examples():
    assert sector_of(O, at_angle(math.pi / 8)) == 1
    assert sector_of(O, at_angle(9 * math.pi / 8)) == 5
    assert sector_of(O, Point(1.0, 1.0)) == 2  # exactly pi/4
    assert sector_of(O, Point(1.0, 0.0)) == 1
    assert sector_of(O, Point(-1.0, 0.0)) == 5
    assert sector_of(O, Point(0.0, -1.0)) == 7
    assert sector_of(O, O) is None


@pytest.mark.parametrize("i", range(1, 9))
def test_sector_centers_classify_to_their_sector(i):
    assert sector_of(O, at_angle(sector_center_angle(i))) == i


coord = st.integers(-1000, 1000).map(float)


@given(coord, coord, coord, coord)
def test_reflection_differs_by_four(ox, oy, dx, dy):
    assume(dx or dy)
    o = Point(ox, oy)
    a = sector_of(o, Point(ox + dx, oy + dy))
    b = sector_of(o, Point(ox - dx, oy - dy))
    assert b == opposite_sector(a)
    assert (a - b) % 8 == 4


@given(coord, coord)
def test_sector_matches_polar_angle(dx, dy):
    assume(dx or dy)
    theta = math.atan2(dy, dx) % (2 * math.pi)
    expected = int(theta // (math.pi / 4)) + 1
    got = sector_of(O, Point(dx, dy))
    # atan2 rounding can only disagree exactly on a boundary ray
    on_ray = dx == 0 or dy == 0 or abs(dx) == abs(dy)
    assert got == expected or on_ray


def test_sector_center_angle_values():
    assert sector_center_angle(1) == pytest.approx(math.pi / 8)
    assert sector_center_angle(5) == pytest.approx(9 * math.pi / 8)
    assert sector_center_angle(4) == pytest.approx(7 * math.pi / 8)
    for bad in (0, 9, -1):
        with pytest.raises(InvalidSectorError):
            sector_center_angle(bad)


@pytest.mark.parametrize("i", range(1, 9))
def test_center_inside_span(i):
    a = sector_center_angle(i)
    assert (i - 1) * math.pi / 4 < a < i * math.pi / 4


def test_displace_examples():
    f = Field(10.0, 10.0)
    assert displace(O, 0.0, 5.0, f) == Point(5.0, 0.0)
    assert displace(Point(9.0, 9.0), math.pi / 4, 10.0, f) == Point(10.0, 10.0)
    assert displace(Point(5.0, 5.0), 1.234, 0.0, f) == Point(5.0, 5.0)


@given(st.floats(0, 100), st.floats(0, 50), st.floats(-10, 10), st.floats(0, 500))
def test_displace_stays_in_field(x, y, angle, dist):
    f = Field(100.0, 50.0)
    p = displace(Point(x, y), angle, dist, f)
    assert f.contains(p)


def test_field_validation():
    with pytest.raises(ValueError):
        Field(0.0, 1.0)
