import math

import numpy as np
import pytest

from limachor.coefficients import CouplingVector, solve_couplings
from limachor.kinematics import (
    ChoreoConfig,
    CurveParams,
    analytic_accel,
    body_state,
    curve_point,
    eom_residual,
    initial_state,
    make_config,
    sample_trajectory,
    state_at,
    trajectory_csv,
)
from util import admissible_pairs


class TestCurveParams:
    def test_rejects_zero_amplitudes(self):
        with pytest.raises(ValueError):
            CurveParams(0.0, 1.0, 2)
        with pytest.raises(ValueError):
            CurveParams(1.0, 0.0, 2)

    @pytest.mark.parametrize("p", [-1, 0, 1])
    def test_rejects_degenerate_p(self, p):
        with pytest.raises(ValueError):
            CurveParams(1.0, 1.0, p)

    def test_config_needs_four_bodies(self):
        with pytest.raises(ValueError):
            ChoreoConfig(CurveParams(1.0, 1.0, 2), 3)


class TestCurvePoint:
    def test_at_zero(self):
        assert curve_point(CurveParams(1.2, 1.0, 2), 0.0) == \
            pytest.approx([2.2, 0.0])

    @pytest.mark.parametrize("t", [2 * math.pi / 3, 4 * math.pi / 3])
    def test_self_intersection_of_equal_amplitude_curve(self, t):
        # a = b, p = 2: the curve crosses itself at (-a, 0).
        assert curve_point(CurveParams(1.0, 1.0, 2), t) == \
            pytest.approx([-1.0, 0.0], abs=1e-15)


class TestBodyState:
    def test_coincident_bodies_at_equal_amplitudes(self):
        config = make_config(6, 2, 1.0, 1.0)
        pos2, _ = body_state(config, 2, 0.0)
        pos4, _ = body_state(config, 4, 0.0)
        assert pos2 == pytest.approx([-1.0, 0.0], abs=1e-15)
        assert pos4 == pytest.approx([-1.0, 0.0], abs=1e-15)

    def test_body_zero_at_time_zero(self):
        config = make_config(5, 3, 0.7, -0.4)
        pos, vel = body_state(config, 0, 0.0)
        assert pos == pytest.approx([0.7 - 0.4, 0.0])
        assert vel == pytest.approx([0.0, 0.7 + 3 * (-0.4)])

    def test_index_bounds(self):
        config = make_config(4, 2)
        with pytest.raises(IndexError):
            body_state(config, 4, 0.0)
        with pytest.raises(IndexError):
            body_state(config, -1, 0.0)

    def test_choreography_shift_identity(self):
        config = make_config(7, 3, 1.1, 0.6)
        for k in range(7):
            for t in (0.0, 0.421, 3.9):
                direct, _ = body_state(config, k, t)
                shifted, _ = body_state(config, 0, t + (math.tau * k) / 7)
                assert direct == pytest.approx(shifted, abs=1e-12)


class TestInitialState:
    def test_four_body_positions(self):
        state = initial_state(make_config(4, 2, 1.0, 0.5))
        expected = np.array([[1.5, 0.0], [-0.5, 1.0], [-0.5, 0.0], [-0.5, -1.0]])
        assert state.positions == pytest.approx(expected, abs=1e-15)

    def test_center_of_mass_at_origin_when_p_not_multiple_of_n(self):
        for p, n in admissible_pairs(7, 12):
            state = initial_state(make_config(n, p, 1.2, 0.7))
            assert np.linalg.norm(state.positions.sum(axis=0)) <= 1e-10 * n
            assert np.linalg.norm(state.velocities.sum(axis=0)) <= 1e-10 * n

    def test_first_moment_rotates_when_n_divides_p(self):
        # p a multiple of N: the first moment is a rotating vector of
        # norm |b| N, nowhere near constant.
        config = make_config(6, 6, 1.0, 0.8)
        g0 = initial_state(config).positions.sum(axis=0)
        variation = max(
            float(np.linalg.norm(state_at(config, t).positions.sum(axis=0) - g0))
            for t in np.linspace(0.0, math.tau, 32, endpoint=False))
        assert variation > 0.1 * 0.8 * 6


class TestAnalyticAccel:
    def test_at_time_zero(self):
        config = make_config(4, 2, 1.0, 0.5)
        assert analytic_accel(config, 0, 0.0) == pytest.approx([-3.0, 0.0])

    def test_matches_finite_difference_of_velocity(self):
        config = make_config(4, 2, 1.0, 0.5)
        h = 1e-5
        for t in (0.0, 1.3, 4.0):
            _, v_plus = body_state(config, 0, t + h)
            _, v_minus = body_state(config, 0, t - h)
            fd = (v_plus - v_minus) / (2 * h)
            assert analytic_accel(config, 0, t) == pytest.approx(fd, abs=1e-8)

    def test_derivative_consistency_across_parameter_ranges(self):
        h = 1e-5
        for p in (-12, -5, -2, 2, 3, 7, 12):
            for a, b in ((1.2, 1.0), (10.0, 10.0), (-3.0, 0.5)):
                config = make_config(8, p, a, b)
                # Centered-difference truncation grows like the third
                # derivative; budget for it on top of the 1e-7 floor.
                tol_v = 1e-7 + (h * h / 6) * (abs(a) + abs(p) ** 3 * abs(b))
                tol_a = 1e-7 + (h * h / 6) * (abs(a) + abs(p) ** 4 * abs(b))
                for t in (0.0, 0.9, 2.7):
                    p_plus, v_plus = body_state(config, 1, t + h)
                    p_minus, v_minus = body_state(config, 1, t - h)
                    _, vel = body_state(config, 1, t)
                    assert vel == pytest.approx(
                        (p_plus - p_minus) / (2 * h), abs=tol_v)
                    assert analytic_accel(config, 1, t) == pytest.approx(
                        (v_plus - v_minus) / (2 * h), abs=tol_a)

    def test_large_time_angle_reduction_keeps_periodicity(self):
        config = make_config(4, 2, 1.2, 1.0)
        t_big = 2.0e6 * math.pi  # even multiple of pi: same phase as t = 0
        pos_big, _ = body_state(config, 0, t_big)
        pos_ref, _ = body_state(config, 0, 0.0)
        assert pos_big == pytest.approx(pos_ref, abs=1e-8)


class TestEomResidual:
    def test_certifies_four_body_solution(self):
        config = make_config(4, 2, 1.2, 1.0)
        assert eom_residual(config, solve_couplings(4, 2)) < 1e-12

    def test_amplitudes_are_irrelevant(self):
        couplings = solve_couplings(6, 2, [0.0])
        assert eom_residual(make_config(6, 2, 1.0, 2.0), couplings) < 1e-12

    def test_equal_couplings_are_not_a_solution(self):
        config = make_config(6, 2, 1.2, 1.0)
        assert eom_residual(config, CouplingVector(6, [1.0, 1.0, 1.0])) > 0.1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            eom_residual(make_config(6, 2), CouplingVector(4, [1.0, -0.5]))

    def test_custom_grid(self):
        config = make_config(4, 2, 1.2, 1.0)
        assert eom_residual(config, solve_couplings(4, 2), [0.0, 2.0]) < 1e-12


class TestSampleTrajectory:
    def test_endpoints_and_spacing(self):
        traj = sample_trajectory(make_config(4, 2), 0.0, math.tau, 3)
        assert traj.times() == pytest.approx([0.0, math.pi, math.tau])

    def test_open_right_grid(self):
        traj = sample_trajectory(make_config(4, 2), 0.0, math.tau, 4,
                                 include_end=False)
        assert traj.times() == pytest.approx(
            [0.0, math.tau / 4, math.tau / 2, 3 * math.tau / 4])

    def test_periodicity(self):
        config = make_config(5, 2, 0.9, 0.4)
        for t in (0.0, 1.1, 3.7):
            now = state_at(config, t)
            later = state_at(config, t + math.tau)
            assert now.positions == pytest.approx(later.positions, abs=1e-12)
            assert now.velocities == pytest.approx(later.velocities, abs=1e-12)

    def test_bad_ranges(self):
        config = make_config(4, 2)
        with pytest.raises(ValueError):
            sample_trajectory(config, 1.0, 1.0, 5)
        with pytest.raises(ValueError):
            sample_trajectory(config, 0.0, 1.0, 1)


class TestTrajectoryCsv:
    def test_layout_and_roundtrip(self):
        config = make_config(4, 2, 1.2, 1.0)
        traj = sample_trajectory(config, 0.0, 1.0, 3)
        lines = trajectory_csv(traj).strip().split("\n")
        assert lines[0] == "t,body,x,y,vx,vy"
        assert len(lines) == 1 + 3 * 4
        # Rows ordered by t then body, floats round-trip exactly.
        t0, body, x, *_ = lines[1].split(",")
        assert float(t0) == 0.0 and body == "0"
        assert float(x) == traj.samples[0].positions[0, 0]
        last = lines[-1].split(",")
        assert float(last[0]) == 1.0 and last[1] == "3"
