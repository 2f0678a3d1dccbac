"""Closed-form / separating-axis narrow-phase detection.

Supports the four shape pairings of the engine: rectangle-circle,
circle-circle, rectangle-rectangle (2D) and cuboid-sphere (3D).  All
rectangle-circle quantities are computed in the rectangle's body frame; the
returned ContactInfo additionally carries world-frame anchors and directions
for the resolver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .contact import ContactInfo
from .errors import DegenerateCenter
from .geometry import (
    EPS_DEGENERATE,
    BodyState,
    Circle,
    Cuboid,
    Rectangle,
    Sphere,
    Vec2,
    Vec3,
    add,
    cross3,
    distance,
    dot,
    normalize,
    perp,
    quat_rotate,
    quat_rotate_inv,
    relative_center,
    rot2_apply,
    rot2_apply_t,
    scale,
    sub,
)

# Tolerance for the diagonal tie between the two inside-region depth gaps.
EPS_TIE = 1e-12


def _sgn(x: float) -> float:
    """Sign with sgn(0) = +1, making the region case tables total."""
    return 1.0 if x >= 0.0 else -1.0


class Region(Enum):
    CORNER_OUTSIDE = "corner-outside"
    TOP_BOTTOM_OUTSIDE = "top-bottom-outside"
    LEFT_RIGHT_OUTSIDE = "left-right-outside"
    INSIDE_NEAR_LR = "inside-near-left-right"
    INSIDE_NEAR_TB = "inside-near-top-bottom"
    INSIDE_DIAGONAL = "inside-diagonal"


@dataclass(frozen=True)
class RegionClass:
    """Signed side distances of a point from a rectangle and the region they select."""

    alpha: float
    beta: float
    region: Region


def region_classify(q: Vec2, c1: float, c2: float) -> RegionClass:
    """Classify where a point lies relative to a centered rectangle.

    alpha and beta are the distances of the point beyond the rectangle's
    sides (negative inside).  The inside diagonal case uses a tie tolerance
    since exact float equality is measure-zero.
    """
    alpha = abs(q[0]) - c1
    beta = abs(q[1]) - c2
    if alpha >= 0.0 and beta >= 0.0:
        region = Region.CORNER_OUTSIDE
    elif alpha < 0.0 and beta >= 0.0:
        region = Region.TOP_BOTTOM_OUTSIDE
    elif alpha >= 0.0 and beta < 0.0:
        region = Region.LEFT_RIGHT_OUTSIDE
    elif abs(alpha - beta) < EPS_TIE:
        region = Region.INSIDE_DIAGONAL
    elif alpha > beta:
        region = Region.INSIDE_NEAR_LR
    else:
        region = Region.INSIDE_NEAR_TB
    return RegionClass(alpha, beta, region)


def rect_mdp(q: Vec2, c1: float, c2: float) -> Vec2:
    """Boundary point of the rectangle closest to q, per the region case table."""
    region = region_classify(q, c1, c2).region
    if region in (Region.CORNER_OUTSIDE, Region.INSIDE_DIAGONAL):
        return (_sgn(q[0]) * c1, _sgn(q[1]) * c2)
    if region in (Region.TOP_BOTTOM_OUTSIDE, Region.INSIDE_NEAR_TB):
        return (q[0], _sgn(q[1]) * c2)
    # left/right outside, or inside nearer the left/right edges
    return (_sgn(q[0]) * c1, q[1])


def circle_mdp(p_tilde: Vec2, q: Vec2, radius: float) -> Vec2:
    """Point of a circle centered at q closest to the rectangle point p_tilde."""
    d = distance(p_tilde, q)
    if d < EPS_DEGENERATE:
        raise DegenerateCenter(
            "circle center lies on the rectangle boundary; direction undefined"
        )
    u = scale(sub(p_tilde, q), 1.0 / d)
    return add(q, scale(u, radius))


def proximity_and_rho(p_tilde: Vec2, q: Vec2, radius: float) -> tuple[float, float]:
    """Proximity and interpenetration of a circle against a rectangle point."""
    d = distance(p_tilde, q)
    if d < EPS_DEGENERATE:
        raise DegenerateCenter(
            "circle center lies on the rectangle boundary; direction undefined"
        )
    phi = d - radius
    rho = 0.0 if phi > 0.0 else -phi
    return phi, rho


def rect_circle_normal(q: Vec2, c1: float, c2: float) -> tuple[Vec2, Vec2]:
    """Unit contact normal and tangent of the rectangle surface facing q.

    The corner and diagonal cases produce non-unit raw components and are
    normalized before use; the tangent is the +90 degree rotation of the
    normal (out-of-plane axis cross normal).
    """
    region = region_classify(q, c1, c2).region
    if region == Region.CORNER_OUTSIDE:
        raw = (_sgn(q[0]) * c1, _sgn(q[1]) * c2)
    elif region in (Region.TOP_BOTTOM_OUTSIDE, Region.INSIDE_NEAR_TB):
        raw = (0.0, _sgn(q[1]))
    elif region in (Region.LEFT_RIGHT_OUTSIDE, Region.INSIDE_NEAR_LR):
        raw = (_sgn(q[0]), 0.0)
    else:
        raw = (_sgn(q[0]), _sgn(q[1]))
    n = normalize(raw)
    return n, perp(n)


def detect_rect_circle(state_a: BodyState, rect: Rectangle,
                       state_b: BodyState, circle: Circle) -> ContactInfo:
    """Narrow-phase query between a rectangle (body A) and a circle (body B)."""
    c1, c2 = rect.half_length, rect.half_width
    radius = circle.radius
    theta = state_a.orientation
    q = relative_center(state_a.position, theta, state_b.position)

    p_tilde = rect_mdp(q, c1, c2)
    n_local, t_local = rect_circle_normal(q, c1, c2)

    d = distance(p_tilde, q)
    if d < EPS_DEGENERATE:
        # center on the rectangle boundary: fall back to the case-table normal
        u = n_local
    else:
        u = scale(sub(p_tilde, q), 1.0 / d)
    phi = d - radius
    rho = 0.0 if phi > 0.0 else -phi
    q_tilde = add(q, scale(u, radius))
    q_m = scale(u, radius)

    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=p_tilde,
        q_tilde=q_tilde,
        anchor_a=rot2_apply_t(theta, p_tilde),
        anchor_b=rot2_apply_t(theta, q_m),
        normal=rot2_apply_t(theta, n_local),
        tangent=rot2_apply_t(theta, t_local),
    )


def detect_circle_circle(state_a: BodyState, circle_a: Circle,
                         state_b: BodyState, circle_b: Circle) -> ContactInfo:
    """Narrow-phase query between two circles; a single center-line test."""
    ra, rb = circle_a.radius, circle_b.radius
    d_vec = sub(state_b.position, state_a.position)
    d = math.hypot(d_vec[0], d_vec[1])
    if d < EPS_DEGENERATE:
        # concentric fallback: pick a fixed direction, full overlap depth
        u = (1.0, 0.0)
        phi = d - ra - rb
        rho = ra + rb
    else:
        u = scale(d_vec, 1.0 / d)
        phi = d - ra - rb
        rho = 0.0 if phi > 0.0 else -phi

    anchor_a = scale(u, ra)
    anchor_b = scale(u, -rb)
    theta = state_a.orientation
    contact_b_from_a = add(d_vec, anchor_b)
    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=rot2_apply(theta, anchor_a),
        q_tilde=rot2_apply(theta, contact_b_from_a),
        anchor_a=anchor_a,
        anchor_b=anchor_b,
        normal=u,
        tangent=perp(u),
    )


def _rect_axes_world(theta: float) -> tuple[Vec2, Vec2]:
    c = math.cos(theta)
    s = math.sin(theta)
    return (c, s), (-s, c)


def _support_max(axes: tuple[Vec2, Vec2], extents: tuple[float, float],
                 direction: Vec2) -> Vec2:
    """Center-to-vertex offset maximizing the projection onto direction.

    Ties (an axis orthogonal to the direction) resolve through the sign rule
    applied to the axis-direction dot product, keeping the choice total and
    deterministic; the minimizing variant below uses the same convention.
    """
    u1, u2 = axes
    c1, c2 = extents
    return add(scale(u1, c1 * _sgn(dot(u1, direction))),
               scale(u2, c2 * _sgn(dot(u2, direction))))


def _support_min(axes: tuple[Vec2, Vec2], extents: tuple[float, float],
                 direction: Vec2) -> Vec2:
    """Center-to-vertex offset minimizing the projection onto direction."""
    u1, u2 = axes
    c1, c2 = extents
    return add(scale(u1, -c1 * _sgn(dot(u1, direction))),
               scale(u2, -c2 * _sgn(dot(u2, direction))))


def detect_rect_rect(state_a: BodyState, rect_a: Rectangle,
                     state_b: BodyState, rect_b: Rectangle) -> ContactInfo:
    """Separating-axis query between two oriented rectangles.

    Tests the four candidate axes (two edge normals per body).  On overlap
    the minimum translation vector is the axis of least overlap, oriented
    from A to B, and the single contact point is the deepest support vertex
    of the body penetrating the other's face.
    """
    axes_a = _rect_axes_world(state_a.orientation)
    axes_b = _rect_axes_world(state_b.orientation)
    ext_a = (rect_a.half_length, rect_a.half_width)
    ext_b = (rect_b.half_length, rect_b.half_width)
    d_vec = sub(state_b.position, state_a.position)

    candidates = [(axes_a[0], 0), (axes_a[1], 0), (axes_b[0], 1), (axes_b[1], 1)]
    min_overlap = math.inf
    best_axis: Vec2 = (1.0, 0.0)
    best_owner = 0
    max_gap = -math.inf
    gap_axis: Vec2 = (1.0, 0.0)

    for axis, owner in candidates:
        rad_a = ext_a[0] * abs(dot(axes_a[0], axis)) + ext_a[1] * abs(dot(axes_a[1], axis))
        rad_b = ext_b[0] * abs(dot(axes_b[0], axis)) + ext_b[1] * abs(dot(axes_b[1], axis))
        separation = abs(dot(d_vec, axis))
        overlap = rad_a + rad_b - separation
        if -overlap > max_gap:
            max_gap = -overlap
            gap_axis = axis
        if overlap < min_overlap:
            min_overlap = overlap
            best_axis = axis
            best_owner = owner

    theta = state_a.orientation
    if min_overlap <= 0.0:
        # separated: the largest per-axis gap is a lower bound on distance
        n = gap_axis if dot(d_vec, gap_axis) >= 0.0 else scale(gap_axis, -1.0)
        support_a = _support_max(axes_a, ext_a, n)
        support_b = _support_min(axes_b, ext_b, n)
        return ContactInfo(
            colliding=False,
            phi=max_gap,
            rho=0.0,
            p_tilde=rot2_apply(theta, support_a),
            q_tilde=rot2_apply(theta, add(d_vec, support_b)),
            anchor_a=support_a,
            anchor_b=support_b,
            normal=n,
            tangent=perp(n),
            phi_approx=True,
        )

    n = best_axis if dot(d_vec, best_axis) >= 0.0 else scale(best_axis, -1.0)
    if best_owner == 0:
        # B's vertex penetrates A's face: deepest support of B against the normal
        contact_world_offset = add(state_b.position,
                                   _support_min(axes_b, ext_b, n))
    else:
        # A's vertex penetrates B's face
        contact_world_offset = add(state_a.position,
                                   _support_max(axes_a, ext_a, n))
    anchor_a = sub(contact_world_offset, state_a.position)
    anchor_b = sub(contact_world_offset, state_b.position)
    contact_local = rot2_apply(theta, anchor_a)
    return ContactInfo(
        colliding=True,
        phi=-min_overlap,
        rho=min_overlap,
        p_tilde=contact_local,
        q_tilde=contact_local,
        anchor_a=anchor_a,
        anchor_b=anchor_b,
        normal=n,
        tangent=perp(n),
    )


# face scan order for the center-inside cuboid branch: +a1, -a1, +a2, -a2, +a3, -a3
_CUBOID_FACES: tuple[tuple[int, float], ...] = (
    (0, 1.0), (0, -1.0), (1, 1.0), (1, -1.0), (2, 1.0), (2, -1.0),
)


def detect_sphere_cuboid(state_a: BodyState, cuboid: Cuboid,
                         state_b: BodyState, sphere: Sphere) -> ContactInfo:
    """Closest-point query between a cuboid (body A) and a sphere (body B).

    The closest cuboid point is the per-axis clamp of the sphere center in
    the cuboid frame.  A center on or inside the cuboid takes the inside
    branch: the penetration is the radius plus the distance to the nearest
    face, with ties broken in a fixed face order.
    """
    ext = cuboid.half_extents
    radius = sphere.radius
    quat = state_a.orientation
    q = quat_rotate_inv(quat, sub(state_b.position, state_a.position))
    clamped = tuple(max(-e, min(e, x)) for x, e in zip(q, ext))
    d = distance(q, clamped)

    if d < EPS_DEGENERATE:
        # center inside (or on the surface): nearest face, fixed tie-break order
        best = math.inf
        n_local: Vec3 = (1.0, 0.0, 0.0)
        for axis, sign in _CUBOID_FACES:
            face_dist = ext[axis] - sign * q[axis]
            if face_dist < best:
                best = face_dist
                n_local = tuple(sign if i == axis else 0.0 for i in range(3))
        phi = d - radius
        rho = radius + best
        u = n_local
        p_tilde = add(q, scale(n_local, best))
    else:
        phi = d - radius
        rho = 0.0 if phi > 0.0 else -phi
        u = scale(sub(clamped, q), 1.0 / d)  # center toward cuboid
        n_local = scale(u, -1.0)
        p_tilde = clamped

    q_tilde = add(q, scale(u, radius))
    q_m = scale(u, radius)
    normal = quat_rotate(quat, n_local)
    tangent = _tangent_3d(quat, normal)
    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=p_tilde,
        q_tilde=q_tilde,
        anchor_a=quat_rotate(quat, p_tilde),
        anchor_b=quat_rotate(quat, q_m),
        normal=normal,
        tangent=tangent,
    )


def _tangent_3d(quat, normal: Vec3) -> Vec3:
    """Deterministic unit tangent: body a3 cross normal, else a1 cross normal."""
    a3 = quat_rotate(quat, (0.0, 0.0, 1.0))
    t = cross3(a3, normal)
    if math.sqrt(dot(t, t)) < EPS_DEGENERATE:
        a1 = quat_rotate(quat, (1.0, 0.0, 0.0))
        t = cross3(a1, normal)
    return normalize(t)
