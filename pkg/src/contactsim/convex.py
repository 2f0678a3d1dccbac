"""Narrow-phase detection as a convex minimum-distance program.

The minimum-distance pair between the two convex sets is found by
alternating exact Euclidean projections (clamp onto a box, radial scaling
onto a ball), which converges for convex sets without any external solver.
Interpenetration is recovered through the fictitious-radius construction:
the second body is shrunk by a margin ``b`` (radius reduction for
circles/spheres, half-extent erosion for rectangles), so the solver keeps a
positive surrogate separation while the true shapes overlap by up to ``b``.
Deeper penetrations cannot be measured and are reported as saturated.

The general quadratic-program form behind this (minimize a quadratic cost
subject to linear and norm inequality constraints) is documented here only;
the solver addresses the concrete box/ball instances directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .contact import ContactInfo
from .errors import DegenerateDirection, NotConverged, UnsupportedPair
from .geometry import (
    EPS_DEGENERATE,
    BodyState,
    Circle,
    Cuboid,
    Quat,
    Rectangle,
    Sphere,
    Vec,
    Vec2,
    add,
    cross3,
    distance,
    norm,
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
from .sat import rect_circle_normal

_ACTIVE_SET_EPS = 1e-7  # slack for deciding which eroded-box constraints bind


@dataclass
class SolverSettings:
    """Tuning knobs for the alternating-projection solver.

    ``shrink_margin`` is the difference b between the true and fictitious
    radius (or half-extent); ``None`` selects the per-pair default of half
    the second body's radius or smallest half-extent.
    """

    tol: float = 1e-10
    max_iters: int = 10_000
    shrink_margin: Optional[float] = None
    record_history: bool = False

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.shrink_margin is not None and not self.shrink_margin > 0.0:
            raise ValueError("shrink_margin must be positive")


@dataclass(frozen=True)
class SolverResult:
    """Converged minimum-distance pair and the surrogate separation."""

    p_tilde: Vec
    q_star: Vec
    phi_star: float
    iterations: int
    converged: bool
    history: Optional[tuple] = None


@dataclass
class PairContext:
    """Warm-start cache owned by a single simulation stepper, one per pair."""

    last_q_star: Optional[Vec] = None
    last_pose: Optional[tuple] = None
    last_normal: Optional[Vec] = None
    last_iterations: int = 0


def _clamp_box(p: Vec, half_extents: Sequence[float]) -> Vec:
    return tuple(max(-e, min(e, x)) for x, e in zip(p, half_extents))


def project_onto_rectangle(p: Vec2, c1: float, c2: float) -> Vec2:
    """Exact Euclidean projection onto a centered axis-aligned rectangle."""
    return _clamp_box(p, (c1, c2))


def project_onto_ball(p: Vec, center: Vec, radius: float) -> Vec:
    """Exact Euclidean projection onto a ball.

    A point coinciding with the center has no unique projection direction;
    that degenerate case maps to the surface point along the first axis.
    """
    d = distance(p, center)
    if d < EPS_DEGENERATE:
        offset = tuple(radius if i == 0 else 0.0 for i in range(len(center)))
        return add(center, offset)
    if d <= radius:
        return p
    return add(center, scale(sub(p, center), radius / d))


def _alternating_projections(
    project_first: Callable[[Vec], Vec],
    project_second: Callable[[Vec], Vec],
    start: Vec,
    settings: SolverSettings,
    distance_stall: bool = False,
) -> SolverResult:
    """Alternate exact projections until both iterates stall below tol.

    The pair distance is Fejer-monotone (each exact projection cannot
    increase it), so the displacement test terminates for convex sets;
    disjoint sets yield the unique minimum-distance pair, intersecting sets
    a common point at distance zero.

    ``distance_stall`` additionally accepts convergence once the pair
    distance itself stops improving.  Two boxes with nearly parallel faces
    have a near-flat set of minimizers: the iterates keep creeping along the
    faces (displacement above tol) long after the distance has converged, so
    the flat-flat driver stops on distance stagnation instead.  Strictly
    convex sets (balls) never need this and keep the pure displacement test.
    """
    history = [] if settings.record_history else None
    q = start
    p_prev: Optional[Vec] = None
    q_prev = q
    d_prev = math.inf
    displacement = math.inf
    for iteration in range(1, settings.max_iters + 1):
        p = project_first(q_prev)
        q = project_second(p)
        d = distance(p, q)
        if history is not None:
            history.append(d)
        if p_prev is not None:
            displacement = max(distance(p, p_prev), distance(q, q_prev))
            stalled = distance_stall and abs(d_prev - d) < settings.tol
            if displacement < settings.tol or stalled:
                return SolverResult(
                    p_tilde=p,
                    q_star=q,
                    phi_star=d,
                    iterations=iteration,
                    converged=True,
                    history=tuple(history) if history is not None else None,
                )
        p_prev, q_prev, d_prev = p, q, d
    raise NotConverged(settings.max_iters, displacement)


def min_distance_pair(
    half_extents: Sequence[float],
    center: Vec,
    radius: float,
    settings: Optional[SolverSettings] = None,
    initial: Optional[Vec] = None,
) -> SolverResult:
    """Minimum-distance pair between a centered box and a ball.

    Works in any dimension matching ``half_extents``.  The default starting
    iterate is the projection of the box center onto the ball; ``initial``
    overrides it for warm starts.
    """
    settings = settings or SolverSettings()
    ext = tuple(float(e) for e in half_extents)
    origin = tuple(0.0 for _ in ext)
    start = initial if initial is not None else project_onto_ball(origin, center, radius)
    return _alternating_projections(
        lambda q: _clamp_box(q, ext),
        lambda p: project_onto_ball(p, center, radius),
        start,
        settings,
    )


def rho_from_surrogate(phi_star: float, b: float) -> tuple[float, bool]:
    """Recover interpenetration from the surrogate separation.

    Zero surrogate separation means the fictitious shapes touch and the true
    penetration exceeds the measurable range; the result clamps to ``b`` and
    is flagged saturated.
    """
    if phi_star > b:
        return 0.0, False
    if phi_star > 0.0:
        return b - phi_star, False
    return b, True


def normal_tangent(p_tilde: Vec, q_star: Vec) -> tuple[Vec, Vec]:
    """Contact normal from the minimum-distance pair, plus a unit tangent.

    The normal points from the first body's point toward the second's.  In
    2D the tangent is the +90 degree rotation of the normal; in 3D it is the
    out-of-plane axis crossed with the normal (first axis when parallel).
    """
    d = distance(p_tilde, q_star)
    if d < EPS_DEGENERATE:
        raise DegenerateDirection("minimum-distance points coincide")
    n = scale(sub(q_star, p_tilde), 1.0 / d)
    if len(n) == 2:
        return n, perp(n)
    t = cross3((0.0, 0.0, 1.0), n)
    if norm(t) < EPS_DEGENERATE:
        t = cross3((1.0, 0.0, 0.0), n)
    return n, normalize(t)


# ---------------------------------------------------------------------------
# full detection entry point

def detect_convex(state_a: BodyState, shape_a, state_b: BodyState, shape_b,
                  settings: Optional[SolverSettings] = None,
                  context: Optional[PairContext] = None) -> ContactInfo:
    """Convex-program narrow phase for the four supported shape pairings."""
    settings = settings or SolverSettings()
    if isinstance(shape_a, Rectangle) and isinstance(shape_b, Circle):
        return _convex_rect_circle(state_a, shape_a, state_b, shape_b, settings, context)
    if isinstance(shape_a, Circle) and isinstance(shape_b, Circle):
        return _convex_circle_circle(state_a, shape_a, state_b, shape_b, settings, context)
    if isinstance(shape_a, Rectangle) and isinstance(shape_b, Rectangle):
        return _convex_rect_rect(state_a, shape_a, state_b, shape_b, settings, context)
    if isinstance(shape_a, Cuboid) and isinstance(shape_b, Sphere):
        return _convex_cuboid_sphere(state_a, shape_a, state_b, shape_b, settings, context)
    raise UnsupportedPair(
        f"convex backend does not support {type(shape_a).__name__}-"
        f"{type(shape_b).__name__}"
    )


def _resolve_margin(settings: SolverSettings, limit: float, what: str) -> float:
    b = settings.shrink_margin if settings.shrink_margin is not None else 0.5 * limit
    if not 0.0 < b < limit:
        raise ValueError(f"shrink margin must lie in (0, {limit}) for {what}, got {b}")
    return b


def _pose_delta(pose_now: tuple, pose_then: tuple) -> float:
    total = 0.0
    for now, then in zip(pose_now, pose_then):
        if isinstance(now, tuple):
            total += distance(now, then)
        else:
            total += abs(now - then)
    return total


def _warm_start(context: Optional[PairContext], pose: tuple, b: float) -> Optional[Vec]:
    if context is None or context.last_q_star is None or context.last_pose is None:
        return None
    if _pose_delta(pose, context.last_pose) < 10.0 * b:
        return context.last_q_star
    return None


def _remember(context: Optional[PairContext], pose: tuple, q_star: Vec,
              normal_world: Vec, iterations: int) -> None:
    if context is None:
        return
    context.last_q_star = q_star
    context.last_pose = pose
    context.last_normal = normal_world
    context.last_iterations = iterations


def _convex_rect_circle(state_a: BodyState, rect: Rectangle, state_b: BodyState,
                        circle: Circle, settings: SolverSettings,
                        context: Optional[PairContext]) -> ContactInfo:
    c1, c2 = rect.half_length, rect.half_width
    radius = circle.radius
    b = _resolve_margin(settings, radius, "circle shrink")
    theta = state_a.orientation
    q = relative_center(state_a.position, theta, state_b.position)
    pose = (state_a.position, theta, state_b.position)

    result = min_distance_pair((c1, c2), q, radius - b, settings,
                               initial=_warm_start(context, pose, b))
    rho, saturated = rho_from_surrogate(result.phi_star, b)
    phi = result.phi_star - b
    try:
        n_local, t_local = normal_tangent(result.p_tilde, result.q_star)
    except DegenerateDirection:
        n_local, t_local = rect_circle_normal(q, c1, c2)

    # minimum-distance point and force anchor on the true (unshrunk) circle
    d = distance(result.p_tilde, q)
    u = scale(sub(result.p_tilde, q), 1.0 / d) if d >= EPS_DEGENERATE else n_local
    q_tilde = add(q, scale(u, radius))
    q_m = scale(u, radius)

    normal_world = rot2_apply_t(theta, n_local)
    _remember(context, pose, result.q_star, normal_world, result.iterations)
    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=result.p_tilde,
        q_tilde=q_tilde,
        anchor_a=rot2_apply_t(theta, result.p_tilde),
        anchor_b=rot2_apply_t(theta, q_m),
        normal=normal_world,
        tangent=rot2_apply_t(theta, t_local),
        saturated=saturated,
    )


def _convex_circle_circle(state_a: BodyState, circle_a: Circle, state_b: BodyState,
                          circle_b: Circle, settings: SolverSettings,
                          context: Optional[PairContext]) -> ContactInfo:
    ra, rb = circle_a.radius, circle_b.radius
    b = _resolve_margin(settings, rb, "circle shrink")
    theta = state_a.orientation
    q = relative_center(state_a.position, theta, state_b.position)
    pose = (state_a.position, theta, state_b.position)
    origin = (0.0, 0.0)
    rb_star = rb - b

    start = _warm_start(context, pose, b)
    if start is None:
        start = project_onto_ball(origin, q, rb_star)
    result = _alternating_projections(
        lambda y: project_onto_ball(y, origin, ra),
        lambda p: project_onto_ball(p, q, rb_star),
        start,
        settings,
    )
    rho, saturated = rho_from_surrogate(result.phi_star, b)
    phi = result.phi_star - b
    try:
        n_local, t_local = normal_tangent(result.p_tilde, result.q_star)
    except DegenerateDirection:
        d_centers = norm(q)
        n_local = scale(q, 1.0 / d_centers) if d_centers >= EPS_DEGENERATE else (1.0, 0.0)
        t_local = perp(n_local)

    d = distance(result.p_tilde, q)
    u = scale(sub(result.p_tilde, q), 1.0 / d) if d >= EPS_DEGENERATE else scale(n_local, -1.0)
    q_tilde = add(q, scale(u, rb))
    q_m = scale(u, rb)

    normal_world = rot2_apply_t(theta, n_local)
    _remember(context, pose, result.q_star, normal_world, result.iterations)
    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=result.p_tilde,
        q_tilde=q_tilde,
        anchor_a=rot2_apply_t(theta, result.p_tilde),
        anchor_b=rot2_apply_t(theta, q_m),
        normal=normal_world,
        tangent=rot2_apply_t(theta, t_local),
        saturated=saturated,
    )


def _convex_rect_rect(state_a: BodyState, rect_a: Rectangle, state_b: BodyState,
                      rect_b: Rectangle, settings: SolverSettings,
                      context: Optional[PairContext]) -> ContactInfo:
    ext_a = (rect_a.half_length, rect_a.half_width)
    ext_b = (rect_b.half_length, rect_b.half_width)
    b = _resolve_margin(settings, min(ext_b), "rectangle erosion")
    ext_b_eroded = (ext_b[0] - b, ext_b[1] - b)
    theta_a = state_a.orientation
    theta_b = state_b.orientation
    pose = (state_a.position, theta_a, state_b.position, theta_b)

    r_a, r_b = state_a.position, state_b.position

    def to_frame_b(p: Vec2) -> Vec2:
        world = add(r_a, rot2_apply_t(theta_a, p))
        return rot2_apply(theta_b, sub(world, r_b))

    def from_frame_b(y: Vec2) -> Vec2:
        world = add(r_b, rot2_apply_t(theta_b, y))
        return rot2_apply(theta_a, sub(world, r_a))

    def project_b(p: Vec2) -> Vec2:
        return from_frame_b(_clamp_box(to_frame_b(p), ext_b_eroded))

    start = _warm_start(context, pose, b)
    if start is None:
        start = project_b((0.0, 0.0))
    result = _alternating_projections(
        lambda y: _clamp_box(y, ext_a),
        project_b,
        start,
        settings,
        distance_stall=True,
    )
    rho, saturated = rho_from_surrogate(result.phi_star, b)
    phi = result.phi_star - b
    try:
        n_local, t_local = normal_tangent(result.p_tilde, result.q_star)
    except DegenerateDirection:
        if context is not None and context.last_normal is not None:
            n_local = rot2_apply(theta_a, context.last_normal)
        else:
            d_centers = distance(r_b, r_a)
            n_local = (rot2_apply(theta_a, scale(sub(r_b, r_a), 1.0 / d_centers))
                       if d_centers >= EPS_DEGENERATE else (1.0, 0.0))
        t_local = perp(n_local)

    # push the eroded-box solution out to the true surface along its active
    # constraints (exact for face and corner contacts)
    y_raw = to_frame_b(result.q_star)
    active_q = sum(1 for i in range(2)
                   if abs(y_raw[i]) >= ext_b_eroded[i] - _ACTIVE_SET_EPS)
    active_p = sum(1 for i in range(2)
                   if abs(result.p_tilde[i]) >= ext_a[i] - _ACTIVE_SET_EPS)
    y = y_raw
    if not saturated:
        y = tuple(
            math.copysign(ext_b[i], y_raw[i])
            if abs(y_raw[i]) >= ext_b_eroded[i] - _ACTIVE_SET_EPS else y_raw[i]
            for i in range(2)
        )
    q_tilde = from_frame_b(y)
    q_center = rot2_apply(theta_a, sub(r_b, r_a))
    q_m = sub(q_tilde, q_center)

    colliding = rho > 0.0
    if colliding:
        # single contact point, mirroring the closed-form backend: the first
        # body's vertex when its solution sits on a corner, otherwise the
        # second body's recovered surface point
        contact_local = result.p_tilde if (active_p >= 2 and active_q < 2) \
            else q_tilde
        anchor_a = rot2_apply_t(theta_a, contact_local)
        anchor_b = rot2_apply_t(theta_a, sub(contact_local, q_center))
    else:
        anchor_a = rot2_apply_t(theta_a, result.p_tilde)
        anchor_b = rot2_apply_t(theta_a, q_m)

    normal_world = rot2_apply_t(theta_a, n_local)
    _remember(context, pose, result.q_star, normal_world, result.iterations)
    return ContactInfo(
        colliding=colliding,
        phi=phi,
        rho=rho,
        p_tilde=result.p_tilde,
        q_tilde=q_tilde,
        anchor_a=anchor_a,
        anchor_b=anchor_b,
        normal=normal_world,
        tangent=rot2_apply_t(theta_a, t_local),
        saturated=saturated,
        phi_approx=True,
    )


def _inside_face_normal(q: Vec, half_extents: Sequence[float]) -> Vec:
    """Outward normal of the nearest face for an interior point (fixed tie order)."""
    best = math.inf
    best_axis = 0
    best_sign = 1.0
    for axis in range(len(half_extents)):
        for sign in (1.0, -1.0):
            face_dist = half_extents[axis] - sign * q[axis]
            if face_dist < best:
                best = face_dist
                best_axis = axis
                best_sign = sign
    return tuple(best_sign if i == best_axis else 0.0 for i in range(len(half_extents)))


def _convex_cuboid_sphere(state_a: BodyState, cuboid: Cuboid, state_b: BodyState,
                          sphere: Sphere, settings: SolverSettings,
                          context: Optional[PairContext]) -> ContactInfo:
    ext = cuboid.half_extents
    radius = sphere.radius
    b = _resolve_margin(settings, radius, "sphere shrink")
    quat: Quat = state_a.orientation
    q = quat_rotate_inv(quat, sub(state_b.position, state_a.position))
    pose = (state_a.position, quat, state_b.position)

    result = min_distance_pair(ext, q, radius - b, settings,
                               initial=_warm_start(context, pose, b))
    rho, saturated = rho_from_surrogate(result.phi_star, b)
    phi = result.phi_star - b
    try:
        n_local, t_local = normal_tangent(result.p_tilde, result.q_star)
    except DegenerateDirection:
        clamped = _clamp_box(q, ext)
        d = distance(q, clamped)
        if d >= EPS_DEGENERATE:
            n_local = scale(sub(q, clamped), 1.0 / d)
        else:
            n_local = _inside_face_normal(q, ext)
        t = cross3((0.0, 0.0, 1.0), n_local)
        t_local = normalize(t) if norm(t) >= EPS_DEGENERATE else \
            normalize(cross3((1.0, 0.0, 0.0), n_local))

    d = distance(result.p_tilde, q)
    u = scale(sub(result.p_tilde, q), 1.0 / d) if d >= EPS_DEGENERATE else n_local
    q_tilde = add(q, scale(u, radius))
    q_m = scale(u, radius)

    normal_world = quat_rotate(quat, n_local)
    _remember(context, pose, result.q_star, normal_world, result.iterations)
    return ContactInfo(
        colliding=rho > 0.0,
        phi=phi,
        rho=rho,
        p_tilde=result.p_tilde,
        q_tilde=q_tilde,
        anchor_a=quat_rotate(quat, result.p_tilde),
        anchor_b=quat_rotate(quat, q_m),
        normal=normal_world,
        tangent=quat_rotate(quat, t_local),
        saturated=saturated,
    )
