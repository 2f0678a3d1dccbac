import math

import numpy as np
import pytest

from contactsim.convex import (
    PairContext,
    SolverSettings,
    detect_convex,
    min_distance_pair,
    normal_tangent,
    project_onto_ball,
    project_onto_rectangle,
    rho_from_surrogate,
)
from contactsim.errors import DegenerateDirection, NotConverged, UnsupportedPair
from contactsim.geometry import (
    Circle,
    Cuboid,
    Rectangle,
    Sphere,
    body2d,
    body3d,
    contains_point_rect,
    relative_center,
)
from contactsim.sat import (
    detect_circle_circle,
    detect_rect_circle,
    detect_rect_rect,
    detect_sphere_cuboid,
)

SQRT2 = math.sqrt(2.0)


class TestProjections:
    def test_rectangle_corner_clamp(self):
        assert project_onto_rectangle((3.0, 2.0), 1.0, 1.0) == (1.0, 1.0)

    def test_rectangle_identity_inside(self):
        assert project_onto_rectangle((0.5, -0.5), 1.0, 1.0) == (0.5, -0.5)

    def test_rectangle_edge_clamp(self):
        assert project_onto_rectangle((0.0, -5.0), 2.0, 1.0) == (0.0, -1.0)

    def test_rectangle_idempotent_sweep(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            c1, c2 = rng.uniform(0.2, 2.0, 2)
            p = tuple(rng.uniform(-4, 4, 2))
            once = project_onto_rectangle(p, c1, c2)
            assert project_onto_rectangle(once, c1, c2) == once

    def test_ball_outside(self):
        assert project_onto_ball((1.0, 0.0), (3.0, 0.0), 0.5) == (2.5, 0.0)

    def test_ball_identity_inside(self):
        assert project_onto_ball((2.9, 0.1), (3.0, 0.0), 0.5) == (2.9, 0.1)

    def test_ball_center_degenerate_rule(self):
        assert project_onto_ball((3.0, 0.0), (3.0, 0.0), 0.5) == (3.5, 0.0)

    def test_ball_projection_lands_on_ball(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            center = tuple(rng.uniform(-2, 2, 2))
            radius = rng.uniform(0.2, 1.5)
            p = tuple(rng.uniform(-4, 4, 2))
            once = project_onto_ball(p, center, radius)
            assert math.dist(once, center) <= radius + 1e-12
            twice = project_onto_ball(once, center, radius)
            assert math.dist(once, twice) < 1e-12


class TestMinDistancePair:
    def test_collinear_by_hand(self):
        res = min_distance_pair((1.0, 1.0), (3.0, 0.0), 0.5)
        assert res.converged
        assert np.allclose(res.p_tilde, (1.0, 0.0), atol=1e-9)
        assert np.allclose(res.q_star, (2.5, 0.0), atol=1e-9)
        assert math.isclose(res.phi_star, 1.5, abs_tol=1e-9)

    def test_corner_case_matches_closed_form(self):
        res = min_distance_pair((1.0, 1.0), (2.0, 2.0), 0.5)
        # closed form on the shrunk circle: corner distance sqrt(2) minus radius
        assert math.isclose(res.phi_star, SQRT2 - 0.5, abs_tol=1e-8)
        assert np.allclose(res.p_tilde, (1.0, 1.0), atol=1e-7)

    def test_intersecting_sets_reach_zero(self):
        res = min_distance_pair((1.0, 1.0), (1.2, 0.0), 0.5)
        assert res.converged
        assert res.phi_star == 0.0
        assert np.allclose(res.p_tilde, res.q_star)

    def test_feasibility_on_convergence_sweep(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            c1, c2 = rng.uniform(0.3, 2.0, 2)
            center = tuple(rng.uniform(-4, 4, 2))
            radius = rng.uniform(0.1, 1.0)
            res = min_distance_pair((c1, c2), center, radius)
            assert res.converged
            assert abs(res.p_tilde[0]) <= c1 + 1e-12
            assert abs(res.p_tilde[1]) <= c2 + 1e-12
            assert math.dist(res.q_star, center) <= radius + 1e-12

    def test_pair_distance_is_fejer_monotone(self):
        rng = np.random.default_rng(13)
        settings = SolverSettings(record_history=True)
        for _ in range(200):
            c1, c2 = rng.uniform(0.3, 2.0, 2)
            center = tuple(rng.uniform(-4, 4, 2))
            radius = rng.uniform(0.1, 1.0)
            res = min_distance_pair((c1, c2), center, radius, settings)
            history = res.history
            for before, after in zip(history, history[1:]):
                assert after <= before + 1e-12 * (1.0 + before)

    def test_not_converged_raises_with_budget_of_one(self):
        with pytest.raises(NotConverged) as excinfo:
            min_distance_pair((1.0, 1.0), (3.0, 0.5), 0.5,
                              SolverSettings(max_iters=1))
        assert excinfo.value.iterations == 1

    def test_three_dimensional_box(self):
        res = min_distance_pair((1.0, 1.0, 1.0), (3.0, 0.0, 0.0), 0.5)
        assert np.allclose(res.p_tilde, (1.0, 0.0, 0.0), atol=1e-9)
        assert math.isclose(res.phi_star, 1.5, abs_tol=1e-9)

    def test_stationarity_certificate_sweep(self):
        # at the optimum the normal must lie in the cone of the active
        # rectangle constraints: zero along inactive axes, outward along
        # active ones
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 300:
            c1, c2 = rng.uniform(0.3, 2.0, 2)
            center = tuple(rng.uniform(-4, 4, 2))
            radius = rng.uniform(0.1, 1.0)
            res = min_distance_pair((c1, c2), center, radius)
            if res.phi_star < 1e-3:
                continue
            checked += 1
            n, _ = normal_tangent(res.p_tilde, res.q_star)
            for axis, extent in ((0, c1), (1, c2)):
                if abs(res.p_tilde[axis]) < extent - 1e-7:
                    assert abs(n[axis]) < 1e-6
                else:
                    assert n[axis] * math.copysign(1.0, res.p_tilde[axis]) > -1e-9


class TestRhoFromSurrogate:
    def test_no_contact(self):
        assert rho_from_surrogate(0.7, 0.5) == (0.0, False)

    def test_recovery_branch(self):
        rho, saturated = rho_from_surrogate(0.3, 0.5)
        assert math.isclose(rho, 0.2, abs_tol=1e-15)
        assert not saturated

    def test_saturation_clamp(self):
        assert rho_from_surrogate(0.0, 0.5) == (0.5, True)

    def test_continuity_at_margin(self):
        eps = 1e-12
        below, _ = rho_from_surrogate(0.5 - eps, 0.5)
        above, _ = rho_from_surrogate(0.5 + eps, 0.5)
        assert abs(below - 0.0) < 1e-11 and above == 0.0

    def test_monotone_nonincreasing(self):
        values = [rho_from_surrogate(phi, 0.5)[0]
                  for phi in np.linspace(0.0, 1.0, 1000)]
        assert all(a >= b - 1e-15 for a, b in zip(values, values[1:]))


class TestNormalTangent:
    def test_axis_aligned(self):
        n, t = normal_tangent((1.0, 0.0), (2.5, 0.0))
        assert n == (1.0, 0.0) and t == (0.0, 1.0)

    def test_diagonal(self):
        n, _ = normal_tangent((1.0, 1.0), (2.0, 2.0))
        assert np.allclose(n, (1.0 / SQRT2, 1.0 / SQRT2))

    def test_coincident_points_raise(self):
        with pytest.raises(DegenerateDirection):
            normal_tangent((1.0, 1.0), (1.0, 1.0))

    def test_three_dimensional_tangent(self):
        n, t = normal_tangent((0.0, 0.0, 0.0), (0.0, 0.0, 2.0))
        assert n == (0.0, 0.0, 1.0)
        assert math.isclose(np.linalg.norm(t), 1.0, abs_tol=1e-12)
        assert abs(np.dot(n, t)) < 1e-12


class TestDetectConvex:
    def test_matches_closed_form_when_separated(self):
        settings = SolverSettings(shrink_margin=0.5)
        info = detect_convex(body2d((0.0, 0.0)), Rectangle(1.0, 1.0),
                             body2d((3.0, 0.0)), Circle(1.0), settings)
        reference = detect_rect_circle(body2d((0.0, 0.0)), Rectangle(1.0, 1.0),
                                       body2d((3.0, 0.0)), Circle(1.0))
        assert not info.colliding
        assert math.isclose(info.phi, reference.phi, abs_tol=1e-9)
        assert np.allclose(info.p_tilde, reference.p_tilde, atol=1e-8)
        assert np.allclose(info.q_tilde, reference.q_tilde, atol=1e-8)

    def test_penetration_recovery_by_hand(self):
        settings = SolverSettings(shrink_margin=0.5)
        info = detect_convex(body2d((0.0, 0.0)), Rectangle(1.0, 1.0),
                             body2d((1.8, 0.0)), Circle(1.0), settings)
        assert info.colliding
        assert math.isclose(info.rho, 0.2, abs_tol=1e-9)
        assert math.isclose(info.phi, -0.2, abs_tol=1e-9)
        assert not info.saturated

    def test_sphere_cuboid_at_margin_saturates(self):
        settings = SolverSettings(shrink_margin=0.5)
        info = detect_convex(body3d((0.0, 0.0, 0.0)), Cuboid((1.0, 1.0, 1.0)),
                             body3d((1.5, 0.0, 0.0)), Sphere(1.0), settings)
        assert math.isclose(info.rho, 0.5, abs_tol=1e-12)
        assert info.saturated
        assert info.normal == (1.0, 0.0, 0.0)

    def test_margin_must_stay_below_radius(self):
        with pytest.raises(ValueError):
            detect_convex(body2d((0.0, 0.0)), Rectangle(1.0, 1.0),
                          body2d((3.0, 0.0)), Circle(1.0),
                          SolverSettings(shrink_margin=1.0))

    def test_unsupported_pairing(self):
        with pytest.raises(UnsupportedPair):
            detect_convex(body2d((0.0, 0.0)), Circle(1.0),
                          body2d((1.0, 0.0)), Rectangle(1.0, 1.0))

    def test_backend_agreement_rect_circle_sweep(self):
        rng = np.random.default_rng(23)
        settings = SolverSettings()
        checked = 0
        while checked < 1000:
            c1, c2 = rng.uniform(0.3, 1.5, 2)
            radius = rng.uniform(0.3, 1.2)
            b = radius / 2.0
            theta = rng.uniform(-math.pi, math.pi)
            state_a = body2d(tuple(rng.uniform(-1, 1, 2)), angle=theta)
            state_b = body2d(tuple(np.array(state_a.position) +
                                   rng.uniform(-3.5, 3.5, 2)))
            rect, circle = Rectangle(c1, c2), Circle(radius)
            sat_info = detect_rect_circle(state_a, rect, state_b, circle)
            # the fictitious circle must stay clearly disjoint: center outside
            # the rectangle and a surrogate gap large enough that the pinned
            # iteration budget applies (the projection rate degrades as the
            # gap vanishes)
            q_local = relative_center(state_a.position, theta, state_b.position)
            if contains_point_rect(q_local, c1, c2) or sat_info.phi + b < 1e-3:
                continue
            checked += 1
            co_info = detect_convex(state_a, rect, state_b, circle, settings)
            assert abs(co_info.rho - sat_info.rho) <= 1e-9
            assert abs(co_info.phi - sat_info.phi) <= 1e-9
            assert np.allclose(co_info.p_tilde, sat_info.p_tilde, atol=1e-6)
            assert np.allclose(co_info.q_tilde, sat_info.q_tilde, atol=1e-6)

    def test_backend_agreement_circle_circle(self):
        rng = np.random.default_rng(29)
        checked = 0
        while checked < 300:
            ra, rb = rng.uniform(0.3, 1.2, 2)
            state_a = body2d(tuple(rng.uniform(-1, 1, 2)))
            state_b = body2d(tuple(np.array(state_a.position) +
                                   rng.uniform(-3, 3, 2)))
            sat_info = detect_circle_circle(state_a, Circle(ra), state_b, Circle(rb))
            if sat_info.phi + rb / 2.0 < 1e-3:
                continue
            checked += 1
            co_info = detect_convex(state_a, Circle(ra), state_b, Circle(rb))
            assert abs(co_info.rho - sat_info.rho) <= 1e-9
            assert abs(co_info.phi - sat_info.phi) <= 1e-9
            assert np.allclose(co_info.anchor_a, sat_info.anchor_a, atol=1e-6)
            assert np.allclose(co_info.anchor_b, sat_info.anchor_b, atol=1e-6)

    def test_backend_agreement_sphere_cuboid(self):
        rng = np.random.default_rng(31)
        checked = 0
        while checked < 300:
            ext = tuple(rng.uniform(0.3, 1.2, 3))
            radius = rng.uniform(0.3, 1.0)
            state_a = body3d((0.0, 0.0, 0.0))
            state_b = body3d(tuple(rng.uniform(-3, 3, 3)))
            cuboid, sphere = Cuboid(ext), Sphere(radius)
            sat_info = detect_sphere_cuboid(state_a, cuboid, state_b, sphere)
            inside = all(abs(state_b.position[i]) <= ext[i] for i in range(3))
            if inside or sat_info.phi + radius / 2.0 < 1e-3:
                continue
            checked += 1
            co_info = detect_convex(state_a, cuboid, state_b, sphere)
            assert abs(co_info.rho - sat_info.rho) <= 1e-9
            assert abs(co_info.phi - sat_info.phi) <= 1e-9

    def test_rect_rect_parallel_faces_match_closed_form(self):
        # face-on geometry from the benchmark scenario: erosion recovery is
        # exact along the translation axis and both backends pick the same
        # leading corner
        state_a = body2d((0.0, 0.0))
        state_b = body2d((0.76, 0.3))
        rect_a, rect_b = Rectangle(0.4, 0.6), Rectangle(0.4, 0.3)
        sat_info = detect_rect_rect(state_a, rect_a, state_b, rect_b)
        co_info = detect_convex(state_a, rect_a, state_b, rect_b)
        assert sat_info.colliding and co_info.colliding
        assert abs(co_info.rho - sat_info.rho) <= 1e-9
        assert np.allclose(co_info.anchor_a, sat_info.anchor_a, atol=1e-7)
        assert np.allclose(co_info.anchor_b, sat_info.anchor_b, atol=1e-7)
        assert np.allclose(co_info.normal, sat_info.normal, atol=1e-9)

    def test_rect_rect_corner_contact_is_documented_approximation(self):
        # a rotated corner contact inflates the surrogate gap by up to
        # b * (|n.u1| + |n.u2| - 1); the depth may differ by that much
        state_a = body2d((0.0, 0.0))
        state_b = body2d((0.95, 0.0), angle=math.pi / 4)
        rect_a, rect_b = Rectangle(0.5, 0.5), Rectangle(0.4, 0.4)
        settings = SolverSettings(shrink_margin=0.1)
        sat_info = detect_rect_rect(state_a, rect_a, state_b, rect_b)
        co_info = detect_convex(state_a, rect_a, state_b, rect_b, settings)
        assert sat_info.colliding
        bound = 0.1 * (SQRT2 - 1.0) + 1e-6
        assert abs(co_info.rho - sat_info.rho) <= bound
        assert co_info.phi_approx

    def test_warm_start_reduces_iterations(self):
        context = PairContext()
        state_a = body2d((0.0, 0.0))
        rect, circle = Rectangle(1.0, 1.0), Circle(0.8)
        detect_convex(state_a, rect, body2d((2.4, 0.9)), circle, context=context)
        cold_iterations = context.last_iterations
        detect_convex(state_a, rect, body2d((2.4005, 0.9003)), circle,
                      context=context)
        assert context.last_iterations <= cold_iterations
        assert context.last_iterations < 20

    def test_saturated_rect_circle_uses_case_table_normal(self):
        settings = SolverSettings(shrink_margin=0.4)
        info = detect_convex(body2d((0.0, 0.0)), Rectangle(1.0, 1.0),
                             body2d((0.9, 0.0)), Circle(0.5), settings)
        assert info.saturated
        assert math.isclose(info.rho, 0.4, abs_tol=1e-12)
        assert info.normal == (1.0, 0.0)
