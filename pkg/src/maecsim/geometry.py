"""Planar primitives: points, the field rectangle, octant sectors and physical hops."""

from __future__ import annotations

import math
from dataclasses import dataclass

SECTOR_WIDTH = math.pi / 4
TWO_PI = 2.0 * math.pi


class InvalidRadiusError(ValueError):
    pass


class InvalidSectorError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def dist(self, other: Point) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Field:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"field dimensions must be positive, got {self.width}x{self.height}")

    @property
    def center(self) -> Point:
        return Point(self.width / 2.0, self.height / 2.0)

    def contains(self, p: Point) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height

    def clamp(self, p: Point) -> Point:
        return Point(min(max(p.x, 0.0), self.width), min(max(p.y, 0.0), self.height))


def physical_hops(d: float, r: float) -> int:
    """Return i such that (i-1)*r < d <= i*r, or 0 when d == 0."""
    if not r > 0:
        raise InvalidRadiusError(f"communication radius must be positive, got {r}")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    if d == 0:
        return 0
    return max(1, math.ceil(d / r))


def normalize_angle(theta: float) -> float:
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    # fmod of a tiny negative can round back up to exactly 2*pi
    return 0.0 if theta >= TWO_PI else theta


def _upper_sector(dx: float, dy: float) -> int:
    # dy >= 0 here, so atan2 lies in [0, pi]; pi itself only for dy == 0, dx < 0 which callers exclude
    k = int(math.atan2(dy, dx) // SECTOR_WIDTH)
    return min(k, 3) + 1


def sector_of(origin: Point, target: Point) -> int | None:
    """Octant (1..8) of `target` seen from `origin`, counterclockwise from +x.

    Sector i covers polar angles [(i-1)*pi/4, i*pi/4). Coincident points give None.
    The lower half-plane is classified by reflecting into the upper one, so a
    point and its reflection through `origin` always land exactly 4 sectors apart.
    """
    dx = target.x - origin.x
    dy = target.y - origin.y
    if dx == 0 and dy == 0:
        return None
    if dy > 0 or (dy == 0 and dx > 0):
        return _upper_sector(dx, abs(dy))
    return _upper_sector(-dx, abs(dy)) + 4


def opposite_sector(i: int) -> int:
    _check_sector(i)
    return i + 4 if i <= 4 else i - 4


def _check_sector(i: int) -> None:
    if not (isinstance(i, int) and 1 <= i <= 8):
        raise InvalidSectorError(f"sector index must be in 1..8, got {i!r}")


def sector_center_angle(i: int) -> float:
    _check_sector(i)
    return (2 * i - 1) * math.pi / 8


def displace(p: Point, angle: float, dist: float, field: Field) -> Point:
    if dist < 0:
        raise ValueError(f"displacement must be non-negative, got {dist}")
    if dist == 0:
        return field.clamp(p)
    return field.clamp(Point(p.x + dist * math.cos(angle), p.y + dist * math.sin(angle)))


def bearing(origin: Point, target: Point) -> float:
    return normalize_angle(math.atan2(target.y - origin.y, target.x - origin.x))
