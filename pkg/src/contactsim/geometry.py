"""Frames, rotations, shape definitions and containment predicates.

Vectors are plain tuples of floats (length 2 or 3); rotations are either a
planar angle in radians or a unit quaternion (w, x, y, z).  The planar
rotation matrix maps world coordinates into the body frame; the
world-from-body map is its transpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

Vec2 = Tuple[float, float]
Vec3 = Tuple[float, float, float]
Vec = Tuple[float, ...]
Quat = Tuple[float, float, float, float]
Mat3 = Tuple[Vec3, Vec3, Vec3]

# Distance below which closest-point directions are treated as degenerate.
EPS_DEGENERATE = 1e-9


# ---------------------------------------------------------------------------
# small vector helpers (dimension-generic where useful, 2D/3D fast paths)

def add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(a: Vec, s: float) -> Vec:
    return tuple(x * s for x in a)


def dot(a: Vec, b: Vec) -> float:
    return sum(x * y for x, y in zip(a, b))


def norm(a: Vec) -> float:
    return math.sqrt(sum(x * x for x in a))


def distance(a: Vec, b: Vec) -> float:
    return norm(sub(a, b))


def normalize(a: Vec) -> Vec:
    n = norm(a)
    if n < EPS_DEGENERATE:
        raise ValueError(f"cannot normalize near-zero vector {a}")
    return scale(a, 1.0 / n)


def perp(a: Vec2) -> Vec2:
    """Rotate a planar vector by +90 degrees (the out-of-plane cross a3 x a)."""
    return (-a[1], a[0])


def cross3(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def cross2(a: Vec2, b: Vec2) -> float:
    """Out-of-plane component of the planar cross product."""
    return a[0] * b[1] - a[1] * b[0]


# ---------------------------------------------------------------------------
# planar rotations

def rotation_matrix(theta: float) -> Mat3:
    """3x3 body-from-world rotation for a planar orientation angle.

    Row layout: (cos, sin, 0), (-sin, cos, 0), (0, 0, 1).  Applying it to a
    world vector yields that vector's coordinates in the rotated frame.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    return ((c, s, 0.0), (-s, c, 0.0), (0.0, 0.0, 1.0))


def rot2_apply(theta: float, v: Vec2) -> Vec2:
    """Body-frame coordinates of a world vector (2D fast path)."""
    c = math.cos(theta)
    s = math.sin(theta)
    return (c * v[0] + s * v[1], -s * v[0] + c * v[1])


def rot2_apply_t(theta: float, v: Vec2) -> Vec2:
    """World coordinates of a body-frame vector (transpose map)."""
    c = math.cos(theta)
    s = math.sin(theta)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def relative_center(r_a: Vec2, theta1: float, r_b: Vec2) -> Vec2:
    """Position of a second body's center expressed in the first body's frame."""
    return rot2_apply(theta1, (r_b[0] - r_a[0], r_b[1] - r_a[1]))


# ---------------------------------------------------------------------------
# quaternions (w, x, y, z), used for 3D orientation

def quat_normalize(q: Quat) -> Quat:
    n = math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    if n == 0.0:
        return (1.0, 0.0, 0.0, 0.0)
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def quat_multiply(a: Quat, b: Quat) -> Quat:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_from_angle_z(theta: float) -> Quat:
    h = 0.5 * theta
    return (math.cos(h), 0.0, 0.0, math.sin(h))


def quat_to_matrix(q: Quat) -> Mat3:
    """World-from-body rotation matrix of a unit quaternion."""
    w, x, y, z = q
    xx, yy, zz = x * x, y * y, z * z
    xy, xz, yz = x * y, x * z, y * z
    wx, wy, wz = w * x, w * y, w * z
    return (
        (1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)),
        (2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)),
        (2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)),
    )


def mat3_vec(m: Mat3, v: Vec3) -> Vec3:
    return (
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    )


def mat3_t_vec(m: Mat3, v: Vec3) -> Vec3:
    return (
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    )


def mat3_inverse(m: Mat3) -> Mat3:
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0.0:
        raise ValueError("singular 3x3 matrix")
    inv = 1.0 / det
    return (
        ((e * i - f * h) * inv, (c * h - b * i) * inv, (b * f - c * e) * inv),
        ((f * g - d * i) * inv, (a * i - c * g) * inv, (c * d - a * f) * inv),
        ((d * h - e * g) * inv, (b * g - a * h) * inv, (a * e - b * d) * inv),
    )


def quat_rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate a body-frame vector into world coordinates."""
    return mat3_vec(quat_to_matrix(q), v)


def quat_rotate_inv(q: Quat, v: Vec3) -> Vec3:
    """Express a world vector in the body frame."""
    return mat3_t_vec(quat_to_matrix(q), v)


# ---------------------------------------------------------------------------
# containment predicates (closed sets: boundary points count as contained)

def contains_point_rect(p: Vec2, c1: float, c2: float) -> bool:
    """Point-in-rectangle test for a point already expressed in the body frame."""
    return abs(p[0]) <= c1 and abs(p[1]) <= c2


def contains_point_circle(p: Vec, center: Vec, radius: float) -> bool:
    return distance(p, center) <= radius


# ---------------------------------------------------------------------------
# shapes

def _check_positive(name: str, value: float) -> None:
    if not (value > 0.0 and math.isfinite(value)):
        raise ValueError(f"{name} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class Circle:
    radius: float

    def __post_init__(self):
        _check_positive("radius", self.radius)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class Rectangle:
    half_length: float  # extent along the body a1 axis
    half_width: float   # extent along the body a2 axis

    def __post_init__(self):
        _check_positive("half_length", self.half_length)
        _check_positive("half_width", self.half_width)
        object.__setattr__(self, "half_length", float(self.half_length))
        object.__setattr__(self, "half_width", float(self.half_width))


@dataclass(frozen=True)
class Sphere:
    radius: float

    def __post_init__(self):
        _check_positive("radius", self.radius)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class Cuboid:
    half_extents: Vec3

    def __post_init__(self):
        if len(self.half_extents) != 3:
            raise ValueError("cuboid needs three half-extents")
        for v in self.half_extents:
            _check_positive("half_extent", v)
        object.__setattr__(self, "half_extents", tuple(float(v) for v in self.half_extents))


Shape = Union[Circle, Rectangle, Sphere, Cuboid]


# ---------------------------------------------------------------------------
# rigid-body state

@dataclass(frozen=True)
class BodyState:
    """Pose and velocity of one rigid body.

    2D bodies use a scalar angle, scalar angular velocity and scalar inertia;
    3D bodies use a unit quaternion (w, x, y, z), a 3-vector angular velocity
    and a 3x3 inertia tensor given as nested tuples.  Static bodies are
    treated as having infinite mass and inertia by the integrator.
    """

    position: Vec
    orientation: Union[float, Quat]
    velocity: Vec
    angular_velocity: Union[float, Vec3]
    mass: float
    inertia: Union[float, Mat3]
    static: bool = False

    def __post_init__(self):
        if len(self.position) not in (2, 3):
            raise ValueError("position must be a 2- or 3-vector")
        if len(self.velocity) != len(self.position):
            raise ValueError("velocity dimension must match position")
        _check_positive("mass", self.mass)
        if self.dim == 3:
            q = self.orientation
            if not (isinstance(q, tuple) and len(q) == 4):
                raise ValueError("3D orientation must be a quaternion tuple")
            if abs(norm(q) - 1.0) > 1e-9:
                raise ValueError("quaternion must be normalized")

    @property
    def dim(self) -> int:
        return len(self.position)


def body2d(position: Vec2, angle: float = 0.0, velocity: Vec2 = (0.0, 0.0),
           angular_velocity: float = 0.0, mass: float = 1.0,
           inertia: float = 1.0, static: bool = False) -> BodyState:
    return BodyState(tuple(position), float(angle), tuple(velocity),
                     float(angular_velocity), mass, inertia, static)


def body3d(position: Vec3, orientation: Quat = (1.0, 0.0, 0.0, 0.0),
           velocity: Vec3 = (0.0, 0.0, 0.0),
           angular_velocity: Vec3 = (0.0, 0.0, 0.0), mass: float = 1.0,
           inertia: Union[float, Mat3] = 1.0, static: bool = False) -> BodyState:
    if isinstance(inertia, (int, float)):
        i = float(inertia)
        inertia = ((i, 0.0, 0.0), (0.0, i, 0.0), (0.0, 0.0, i))
    return BodyState(tuple(position), tuple(orientation), tuple(velocity),
                     tuple(angular_velocity), mass, inertia, static)


# moment-of-inertia helpers for the built-in shapes (solid, uniform density)

def disc_inertia(mass: float, radius: float) -> float:
    return 0.5 * mass * radius * radius


def rect_inertia(mass: float, half_length: float, half_width: float) -> float:
    return mass * (half_length * half_length + half_width * half_width) / 3.0


def sphere_inertia(mass: float, radius: float) -> float:
    return 0.4 * mass * radius * radius


def cuboid_inertia(mass: float, half_extents: Vec3) -> Mat3:
    cx, cy, cz = half_extents
    return (
        (mass * (cy * cy + cz * cz) / 3.0, 0.0, 0.0),
        (0.0, mass * (cx * cx + cz * cz) / 3.0, 0.0),
        (0.0, 0.0, mass * (cx * cx + cy * cy) / 3.0),
    )
