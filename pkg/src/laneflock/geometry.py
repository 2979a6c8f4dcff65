"""Planar vector/pose math in ISO 8855 vehicle coordinates.

x points forward (longitudinal), y points left (lateral).  Headings are
measured counter-clockwise from the x-axis and kept in (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = theta % TWO_PI
    if r > math.pi:
        r -= TWO_PI
    return r


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Vec2 components: ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def rotated(self, theta: float) -> "Vec2":
        c, s = math.cos(theta), math.sin(theta)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


ZERO = Vec2(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class Pose:
    position: Vec2
    heading: float

    def __post_init__(self):
        if not math.isfinite(self.heading):
            raise ValueError("non-finite heading")
        object.__setattr__(self, "heading", normalize_angle(self.heading))


@dataclass(frozen=True, slots=True)
class FovEllipse:
    """Anisotropic perception region: long semi-axis along the heading."""

    semi_axis_long: float
    semi_axis_lat: float

    def __post_init__(self):
        if not (self.semi_axis_long > 0.0 and self.semi_axis_lat > 0.0):
            raise ValueError("ellipse semi-axes must be positive")
        if self.semi_axis_long < self.semi_axis_lat:
            raise ValueError("long semi-axis must be >= lateral semi-axis")


class FrameShift:
    """Rigid re-expression of coordinates from one ego frame into another.

    Both frames are given as world poses; `point` maps position coordinates,
    `vector` maps free vectors (velocities), which only rotate.
    """

    __slots__ = ("_c", "_s", "_tx", "_ty")

    def __init__(self, old_frame: Pose, new_frame: Pose):
        dtheta = old_frame.heading - new_frame.heading
        self._c, self._s = math.cos(dtheta), math.sin(dtheta)
        # world offset of the old origin, expressed in the new frame
        dx = old_frame.position.x - new_frame.position.x
        dy = old_frame.position.y - new_frame.position.y
        cn, sn = math.cos(new_frame.heading), math.sin(new_frame.heading)
        self._tx = cn * dx + sn * dy
        self._ty = -sn * dx + cn * dy

    def point(self, p: Vec2) -> Vec2:
        return Vec2(self._c * p.x - self._s * p.y + self._tx,
                    self._s * p.x + self._c * p.y + self._ty)

    def vector(self, v: Vec2) -> Vec2:
        return Vec2(self._c * v.x - self._s * v.y,
                    self._s * v.x + self._c * v.y)

    def comoving_point(self, p: Vec2) -> Vec2:
        """Map coordinates of an object that follows the road's curvature.

        When the ego turns along an arc, the frame rotation it induces is
        exactly the road's own change of direction.  An object that keeps
        its lane keeps its coordinates under the pure-translation map; the
        full rigid map `point` would instead shear it sideways by its
        longitudinal distance times the turned angle every cycle.
        """
        return Vec2(p.x + self._c * self._tx + self._s * self._ty,
                    p.y - self._s * self._tx + self._c * self._ty)

    def rotation(self) -> float:
        """Frame rotation angle (old heading minus new heading)."""
        return math.atan2(self._s, self._c)


def heading_of(velocity: Vec2) -> float:
    """Heading of a velocity vector; the zero vector maps to 0 (forward)."""
    if velocity.x == 0.0 and velocity.y == 0.0:
        return 0.0
    return normalize_angle(math.atan2(velocity.y, velocity.x))


def contains_local(dx: float, dy: float, cos_h: float, sin_h: float,
                   a: float, b: float) -> bool:
    """Ellipse membership of the offset (dx, dy) rotated into the observer frame.

    Shared by `ellipse_contains` and the flocking hot path so both evaluate
    the exact same arithmetic.
    """
    lx = cos_h * dx + sin_h * dy
    ly = -sin_h * dx + cos_h * dy
    return (lx / a) ** 2 + (ly / b) ** 2 <= 1.0


def ellipse_contains(observer_pos: Vec2, observer_heading: float,
                     ellipse: FovEllipse, other_pos: Vec2) -> bool:
    """True iff `other_pos` lies within the observer's field-of-view ellipse.

    The boundary is included: membership is the closed condition
    (dx/a)^2 + (dy/b)^2 <= 1 in the observer-aligned frame.
    """
    return contains_local(
        other_pos.x - observer_pos.x,
        other_pos.y - observer_pos.y,
        math.cos(observer_heading),
        math.sin(observer_heading),
        ellipse.semi_axis_long,
        ellipse.semi_axis_lat,
    )
