"""Fixed-step rigid-body simulator: detection, resolution, state update.

Each step runs the selected narrow-phase backend over all body pairs, feeds
colliding contacts through the penalty resolver, accumulates the resulting
center-of-mass wrenches in body order (fixed summation order keeps runs
bit-deterministic) and advances the states with a semi-implicit Euler step:
velocities first, then positions with the updated velocities.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from . import convex, sat
from .contact import ContactInfo
from .errors import UnsupportedPair
from .geometry import (
    BodyState,
    Circle,
    Cuboid,
    Mat3,
    Rectangle,
    Shape,
    Sphere,
    Vec,
    mat3_inverse,
    mat3_vec,
    quat_multiply,
    quat_normalize,
)
from .penalty import (
    BodyWrench,
    MaterialParams,
    contact_force,
    relative_velocity_at_contact,
    wrench_on_bodies,
)
from .scenarios import build_scenario

logger = logging.getLogger("contactsim.simulate")


class Backend(Enum):
    SAT = "sat"
    CO = "co"


@dataclass
class SimConfig:
    """Run parameters.

    ``gravity``, ``duration`` and ``material`` of None keep the scenario
    defaults (a bare run_world falls back to 2 s and default materials).
    """

    dt: float = 1e-3
    duration: Optional[float] = None
    backend: Backend = Backend.SAT
    gravity: Optional[Vec] = None
    solver: convex.SolverSettings = field(default_factory=convex.SolverSettings)
    material: Optional[MaterialParams] = None
    pair_materials: Dict[Tuple[int, int], MaterialParams] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.backend, str):
            self.backend = Backend(self.backend)
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if self.duration is not None and self.duration < self.dt:
            raise ValueError("duration must be at least one step")


@dataclass(frozen=True)
class ContactEvent:
    """One resolved contact at force-application resolution."""

    t: float
    pair: Tuple[int, int]
    phi: float
    rho: float
    f_normal: float
    f_tangent: float
    saturated: bool


@dataclass(frozen=True)
class PairDiagnostic:
    """Narrow-phase result for one pair, with resolver forces when colliding."""

    pair: Tuple[int, int]
    info: ContactInfo
    f_normal: float = 0.0
    f_tangent: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed body states plus the contact-event log of one run."""

    samples: Tuple[Tuple[float, Tuple[BodyState, ...]], ...]
    events: Tuple[ContactEvent, ...]
    shapes: Tuple[Shape, ...]

    @property
    def dim(self) -> int:
        return self.samples[0][1][0].dim if self.samples else 2


_DETECTORS_SAT = {
    (Rectangle, Circle): sat.detect_rect_circle,
    (Circle, Circle): sat.detect_circle_circle,
    (Rectangle, Rectangle): sat.detect_rect_rect,
    (Cuboid, Sphere): sat.detect_sphere_cuboid,
}

# pairings where the canonical detector order is reversed relative to (i, j)
_SWAPPED = {(Circle, Rectangle): (Rectangle, Circle),
            (Sphere, Cuboid): (Cuboid, Sphere)}


def _detect_pair(backend: Backend, state_a: BodyState, shape_a: Shape,
                 state_b: BodyState, shape_b: Shape,
                 solver: convex.SolverSettings,
                 context: Optional[convex.PairContext]) -> ContactInfo:
    key = (type(shape_a), type(shape_b))
    swapped = key in _SWAPPED
    if swapped:
        state_a, state_b = state_b, state_a
        shape_a, shape_b = shape_b, shape_a
        key = (type(shape_a), type(shape_b))
    if key not in _DETECTORS_SAT:
        raise UnsupportedPair(
            f"no narrow phase for {key[0].__name__}-{key[1].__name__}"
        )
    if backend is Backend.SAT:
        info = _DETECTORS_SAT[key](state_a, shape_a, state_b, shape_b)
    else:
        info = convex.detect_convex(state_a, shape_a, state_b, shape_b,
                                    solver, context)
    return info.flipped() if swapped else info


def collision_response(states, shapes, config: SimConfig,
                       contexts: Optional[Dict] = None
                       ) -> Tuple[List[Optional[BodyWrench]], List[PairDiagnostic]]:
    """Detect and resolve every pair; returns per-body wrenches and diagnostics.

    Non-colliding pairs contribute no wrench but their proximity is kept in
    the diagnostics.  Wrenches accumulate per body in pair order.
    """
    n = len(states)
    forces = [None] * n
    moments = [None] * n
    diagnostics: List[PairDiagnostic] = []
    for i in range(n):
        for j in range(i + 1, n):
            context = None
            if contexts is not None and config.backend is Backend.CO:
                context = contexts.setdefault((i, j), convex.PairContext())
            info = _detect_pair(config.backend, states[i], shapes[i],
                                states[j], shapes[j], config.solver, context)
            if not info.colliding:
                diagnostics.append(PairDiagnostic((i, j), info))
                continue
            material = config.pair_materials.get((i, j)) or config.material \
                or MaterialParams()
            kin = relative_velocity_at_contact(states[i], info.anchor_a,
                                               states[j], info.anchor_b,
                                               info.normal, info.tangent)
            f_n, f_t = contact_force(info.rho, kin, material)
            wrench_i, wrench_j = wrench_on_bodies(f_n, f_t, info.normal,
                                                  info.tangent, info.anchor_a,
                                                  info.anchor_b)
            for index, wrench in ((i, wrench_i), (j, wrench_j)):
                if forces[index] is None:
                    forces[index] = wrench.force
                    moments[index] = wrench.moment
                else:
                    forces[index] = tuple(a + b for a, b in
                                          zip(forces[index], wrench.force))
                    if isinstance(wrench.moment, tuple):
                        moments[index] = tuple(a + b for a, b in
                                               zip(moments[index], wrench.moment))
                    else:
                        moments[index] = moments[index] + wrench.moment
            diagnostics.append(PairDiagnostic((i, j), info, f_n, f_t))
    wrenches: List[Optional[BodyWrench]] = [
        BodyWrench(forces[k], moments[k]) if forces[k] is not None else None
        for k in range(n)
    ]
    return wrenches, diagnostics


def _integrate(states, wrenches, config: SimConfig, gravity: Vec):
    """Semi-implicit Euler update: velocities first, then poses."""
    dt = config.dt
    new_states = []
    for state, wrench in zip(states, wrenches):
        if state.static:
            new_states.append(state)
            continue
        dim = state.dim
        force = wrench.force if wrench is not None else (0.0,) * dim
        inv_m = 1.0 / state.mass
        velocity = tuple(state.velocity[k] + dt * (force[k] * inv_m + gravity[k])
                         for k in range(dim))
        if dim == 2:
            moment = wrench.moment if wrench is not None else 0.0
            omega = state.angular_velocity + dt * moment / state.inertia
            position = tuple(state.position[k] + dt * velocity[k] for k in range(2))
            orientation = state.orientation + dt * omega
        else:
            moment = wrench.moment if wrench is not None else (0.0, 0.0, 0.0)
            inv_inertia: Mat3 = mat3_inverse(state.inertia)
            alpha = mat3_vec(inv_inertia, moment)
            omega = tuple(state.angular_velocity[k] + dt * alpha[k] for k in range(3))
            position = tuple(state.position[k] + dt * velocity[k] for k in range(3))
            spin = quat_multiply((0.0,) + omega, state.orientation)
            orientation = quat_normalize(tuple(
                state.orientation[k] + dt * 0.5 * spin[k] for k in range(4)
            ))
        new_states.append(replace(state, position=position, orientation=orientation,
                                  velocity=velocity, angular_velocity=omega))
    return new_states


def step(states, shapes, config: SimConfig, gravity: Optional[Vec] = None,
         contexts: Optional[Dict] = None):
    """One full detection-resolution-integration step; returns new states."""
    if gravity is None:
        gravity = config.gravity if config.gravity is not None \
            else (0.0,) * states[0].dim
    wrenches, _ = collision_response(states, shapes, config, contexts)
    return _integrate(states, wrenches, config, gravity)


def run_world(states, shapes, config: SimConfig, gravity: Vec
              ) -> Tuple[Trajectory, float]:
    """Run the stepping loop; returns the trajectory and the loop wall time.

    The timer covers detection, resolution and integration only, not world
    construction or any export.
    """
    dt = config.dt
    duration = config.duration if config.duration is not None else 2.0
    n_steps = max(1, round(duration / dt))
    states = list(states)
    contexts: Dict = {}
    samples = [(0.0, tuple(states))]
    events: List[ContactEvent] = []
    saturation_seen = False

    t_start = time.perf_counter()
    for k in range(n_steps):
        t = k * dt
        wrenches, diagnostics = collision_response(states, shapes, config, contexts)
        for diag in diagnostics:
            if diag.info.colliding:
                events.append(ContactEvent(t, diag.pair, diag.info.phi,
                                           diag.info.rho, diag.f_normal,
                                           diag.f_tangent, diag.info.saturated))
                if diag.info.saturated and not saturation_seen:
                    saturation_seen = True
                    logger.warning(
                        "penetration exceeded the measurable range at t=%.6f "
                        "for pair %s; depth clamped to the shrink margin",
                        t, diag.pair)
        states = _integrate(states, wrenches, config, gravity)
        samples.append(((k + 1) * dt, tuple(states)))
    elapsed = time.perf_counter() - t_start

    return Trajectory(tuple(samples), tuple(events), tuple(shapes)), elapsed


def run_scenario(name: str, config: Optional[SimConfig] = None,
                 overrides: Optional[Mapping] = None) -> Trajectory:
    """Run a registry scenario to completion under the given config."""
    trajectory, _ = run_scenario_timed(name, config, overrides)
    return trajectory


def run_scenario_timed(name: str, config: Optional[SimConfig] = None,
                       overrides: Optional[Mapping] = None
                       ) -> Tuple[Trajectory, float]:
    """Like run_scenario but also returns the stepping-loop wall time."""
    scenario = build_scenario(name, overrides)
    config = config or SimConfig()
    effective = replace(config)
    if effective.material is None:
        effective.material = scenario.material
    if effective.duration is None:
        effective.duration = scenario.duration
    gravity = config.gravity if config.gravity is not None else scenario.gravity
    return run_world(scenario.bodies, scenario.shapes, effective, gravity)


def kinetic_energy(states) -> float:
    """Total kinetic energy (translational plus rotational) of the bodies."""
    total = 0.0
    for state in states:
        if state.static:
            continue
        total += 0.5 * state.mass * sum(v * v for v in state.velocity)
        if state.dim == 2:
            total += 0.5 * state.inertia * state.angular_velocity ** 2
        else:
            w = state.angular_velocity
            iw = mat3_vec(state.inertia, w)
            total += 0.5 * (w[0] * iw[0] + w[1] * iw[1] + w[2] * iw[2])
    return total


def linear_momentum(states) -> Vec:
    """Total linear momentum of the non-static bodies."""
    dim = states[0].dim
    total = [0.0] * dim
    for state in states:
        if state.static:
            continue
        for k in range(dim):
            total[k] += state.mass * state.velocity[k]
    return tuple(total)
