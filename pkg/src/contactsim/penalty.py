"""Elastic-plastic penalty contact forces and their center-of-mass wrenches.

The normal force combines a cubic stiffness term with velocity-dependent
damping; the tangential force is a friction force smoothed by a sigmoid of
the sliding velocity.  Forces are converted to an equivalent force-moment
system at each body's center of mass so the integrator never needs the
contact point itself.

Sign conventions: the contact normal points from body A toward body B, so a
negative normal relative velocity means approach.  With that convention the
damping factor exceeds one during approach, dissipating energy on impact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .geometry import Vec, Vec3, cross2, cross3, dot


@dataclass(frozen=True)
class MaterialParams:
    """Contact material constants.

    stiffness:  N/m^3, multiplies the cubed penetration depth
    damping:    s/m, scales the normal-velocity correction
    friction:   dimensionless Coulomb-like coefficient
    v_scale:    m/s, sliding-velocity scale of the friction sigmoid
    """

    stiffness: float = 1e5
    damping: float = 0.2
    friction: float = 0.3
    v_scale: float = 0.01

    def __post_init__(self):
        if not self.stiffness > 0.0:
            raise ValueError("stiffness must be positive")
        if self.damping < 0.0:
            raise ValueError("damping must be nonnegative")
        if self.friction < 0.0:
            raise ValueError("friction must be nonnegative")
        if not self.v_scale > 0.0:
            raise ValueError("v_scale must be positive")


@dataclass(frozen=True)
class ContactKinematics:
    """Relative velocity of the contact points, split along normal and tangent."""

    v_normal: float
    v_tangent: float


@dataclass(frozen=True)
class BodyWrench:
    """Force at the center of mass plus the equivalent moment."""

    force: Vec
    moment: Union[float, Vec3]


def _omega_cross(angular_velocity: Union[float, Vec3], r: Vec) -> Vec:
    if isinstance(angular_velocity, tuple):
        return cross3(angular_velocity, r)
    w = angular_velocity
    return (-w * r[1], w * r[0])


def relative_velocity_at_contact(state_a, anchor_a: Vec, state_b, anchor_b: Vec,
                                 normal: Vec, tangent: Vec) -> ContactKinematics:
    """Velocity of B's contact point relative to A's, in the contact basis.

    Anchors and directions must be world-frame; anchors run from each body's
    center to its contact point.  A negative normal component means the
    bodies are approaching.
    """
    va = state_a.velocity
    vb = state_b.velocity
    spin_a = _omega_cross(state_a.angular_velocity, anchor_a)
    spin_b = _omega_cross(state_b.angular_velocity, anchor_b)
    v_rel = tuple((vb[i] + spin_b[i]) - (va[i] + spin_a[i]) for i in range(len(va)))
    return ContactKinematics(dot(v_rel, normal), dot(v_rel, tangent))


def contact_force(rho: float, kin: ContactKinematics,
                  mat: MaterialParams) -> tuple[float, float]:
    """Normal and tangential force magnitudes for a penetration depth.

    The normal force is clamped at zero when fast separation would make the
    damped spring attractive.  The friction sigmoid 2/(1+exp(-v/vs)) - 1 is
    evaluated as tanh(v/(2 vs)), which is the same function without overflow
    for large sliding speeds.
    """
    if rho < 0.0:
        raise ValueError("penetration depth must be nonnegative")
    f_n = mat.stiffness * rho ** 3 * (1.0 - mat.damping * kin.v_normal)
    if f_n < 0.0:
        f_n = 0.0
    f_t = -mat.friction * f_n * math.tanh(kin.v_tangent / (2.0 * mat.v_scale))
    return f_n, f_t


def wrench_on_bodies(f_n: float, f_t: float, normal: Vec, tangent: Vec,
                     anchor_a: Vec, anchor_b: Vec) -> tuple[BodyWrench, BodyWrench]:
    """Equal-and-opposite center-of-mass wrenches for one contact.

    Body B receives the composed force (positive normal force pushes the
    bodies apart), body A its exact negation; moments are the cross products
    of each anchor with the force acting on that body.
    """
    force_b = tuple(f_n * n + f_t * t for n, t in zip(normal, tangent))
    force_a = tuple(-c for c in force_b)
    if len(force_b) == 2:
        moment_b = cross2(anchor_b, force_b)
        moment_a = cross2(anchor_a, force_a)
    else:
        moment_b = cross3(anchor_b, force_b)
        moment_a = cross3(anchor_a, force_a)
    return BodyWrench(force_a, moment_a), BodyWrench(force_b, moment_b)
