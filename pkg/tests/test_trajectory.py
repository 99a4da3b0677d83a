import numpy as np
import pytest

from dualarm.trajectory import MotionLimits, plan_joint_trajectory


def single_joint_limits(v_max, a_max):
    return MotionLimits(vel_max=np.full(5, v_max), acc_max=np.full(5, a_max))


def finite_difference_peaks(traj):
    """Max |velocity| and |acceleration| of the sampled path by finite
    differences, evaluated against interval midpoints."""
    t = traj.times
    q = traj.positions
    dt = np.diff(t)
    v = np.diff(q, axis=0) / dt[:, None]
    mid = (t[:-1] + t[1:]) / 2.0
    a = np.diff(v, axis=0) / np.diff(mid)[:, None]
    return np.max(np.abs(v), axis=0), (np.max(np.abs(a), axis=0) if len(a) else np.zeros(q.shape[1]))


class TestDegenerateCases:
    def test_zero_displacement_single_point(self, limits):
        q = np.array([0.1, -0.2, 0.3, 0.0, 1.0])
        traj = plan_joint_trajectory(q, q.copy(), limits)
        assert traj.duration == 0.0
        assert traj.times.shape == (1,)
        assert np.allclose(traj.positions[0], q)
        assert np.allclose(traj.velocities[0], 0.0)

    def test_rejects_nonpositive_dt(self, limits):
        with pytest.raises(ValueError):
            plan_joint_trajectory(np.zeros(5), np.ones(5), limits, dt=0.0)

    def test_limits_must_be_positive(self):
        with pytest.raises(ValueError):
            MotionLimits(vel_max=np.zeros(5), acc_max=np.ones(5))


class TestProfileTiming:
    def test_triangular_duration(self):
        # 1 rad at a_max=0.1 never reaches v_max=2 (peak sqrt(0.1)=0.316),
        # so the profile is triangular: T = 2*sqrt(delta/a) = 6.3246 s.
        limits = single_joint_limits(2.0, 0.1)
        start, goal = np.zeros(5), np.zeros(5)
        goal[0] = 1.0
        traj = plan_joint_trajectory(start, goal, limits)
        assert traj.duration == pytest.approx(2.0 * np.sqrt(1.0 / 0.1), rel=1e-12)
        # samples may straddle the apex; the peak is within one accel step
        v_peak = np.max(np.abs(traj.velocities[:, 0]))
        assert np.sqrt(0.1) - 0.1 * 0.01 <= v_peak <= np.sqrt(0.1) + 1e-12

    def test_trapezoidal_duration(self):
        # 100 rad at v=1.73, a=0.1: T = 100/1.73 + 1.73/0.1 = 75.1035 s.
        limits = single_joint_limits(1.73, 0.1)
        start, goal = np.zeros(5), np.zeros(5)
        goal[0] = 100.0
        traj = plan_joint_trajectory(start, goal, limits)
        assert traj.duration == pytest.approx(100.0 / 1.73 + 1.73 / 0.1, rel=1e-12)
        assert np.max(np.abs(traj.velocities[:, 0])) == pytest.approx(1.73, rel=1e-9)

    def test_numeric_integration_cross_check(self):
        # Integrating the sampled velocity recovers the displacement.
        limits = single_joint_limits(1.73, 0.1)
        start = np.zeros(5)
        goal = np.array([3.0, -2.0, 0.5, 0.0, 1.4])
        traj = plan_joint_trajectory(start, goal, limits)
        integrated = np.trapezoid(traj.velocities, traj.times, axis=0)
        assert integrated == pytest.approx(goal - start, abs=1e-4)


class TestEndpointExactness:
    def test_endpoints_exact(self, limits):
        rng = np.random.default_rng(0)
        for _ in range(50):
            start = rng.uniform(-2, 2, 5)
            goal = rng.uniform(-2, 2, 5)
            traj = plan_joint_trajectory(start, goal, limits)
            assert np.array_equal(traj.positions[0], start)
            assert np.array_equal(traj.positions[-1], goal)
            assert np.all(traj.velocities[-1] == 0.0)
            assert traj.times[0] == 0.0

    def test_times_strictly_increasing(self, limits):
        traj = plan_joint_trajectory(np.zeros(5), np.ones(5), limits, dt=0.01)
        assert np.all(np.diff(traj.times) > 0)


class TestLimitRespect:
    def test_random_plans_stay_within_limits(self, limits):
        rng = np.random.default_rng(123)
        for _ in range(200):
            start = rng.uniform(-3, 3, 5)
            goal = rng.uniform(-3, 3, 5)
            traj = plan_joint_trajectory(start, goal, limits, dt=0.01)
            v_peak, a_peak = finite_difference_peaks(traj)
            assert np.all(v_peak <= limits.vel_max + 1e-9)
            assert np.all(a_peak <= limits.acc_max * (1 + 1e-6))
            assert np.all(np.abs(traj.velocities) <= limits.vel_max[None, :] + 1e-12)

    def test_unimodal_speed_profile(self, limits):
        rng = np.random.default_rng(5)
        for _ in range(50):
            start = rng.uniform(-2, 2, 5)
            goal = rng.uniform(-2, 2, 5)
            traj = plan_joint_trajectory(start, goal, limits, dt=0.01)
            speeds = np.abs(traj.velocities)
            for j in range(5):
                s = speeds[:, j]
                peak = np.argmax(s)
                assert np.all(np.diff(s[: peak + 1]) >= -1e-12)
                assert np.all(np.diff(s[peak:]) <= 1e-12)


class TestSynchrony:
    def test_all_joints_share_duration(self, limits):
        start = np.zeros(5)
        goal = np.array([2.0, 0.1, -1.5, 0.02, 0.7])
        traj = plan_joint_trajectory(start, goal, limits, dt=0.01)
        # every joint is exactly at its goal at T and nowhere earlier except
        # by monotone approach
        assert np.allclose(traj.positions[-1], goal)
        # a short joint scaled to the shared duration moves slower than its
        # own minimum-time profile would
        solo = plan_joint_trajectory(start[:1] * 0, goal[np.argmin(np.abs(goal))] * np.ones(1),
                                     MotionLimits(vel_max=limits.vel_max[:1],
                                                  acc_max=limits.acc_max[:1]), dt=0.01)
        assert solo.duration <= traj.duration

    def test_motion_ends_simultaneously(self, limits):
        start = np.zeros(5)
        goal = np.array([2.0, 0.1, -1.5, 0.02, 0.7])
        traj = plan_joint_trajectory(start, goal, limits, dt=0.01)
        moving = np.abs(goal - start) > 0
        # at 99% of the duration every moving joint is still short of goal
        q_late = traj.sample(0.99 * traj.duration)
        gap = np.abs(q_late - goal)
        assert np.all(gap[moving] > 0)


class TestSampling:
    def test_sample_interpolates_and_clamps(self, limits):
        traj = plan_joint_trajectory(np.zeros(5), np.ones(5), limits, dt=0.01)
        assert np.allclose(traj.sample(-1.0), np.zeros(5))
        assert np.allclose(traj.sample(traj.duration + 5), np.ones(5))
        i = len(traj.times) // 2
        t_mid = (traj.times[i] + traj.times[i + 1]) / 2
        expected = (traj.positions[i] + traj.positions[i + 1]) / 2
        assert np.allclose(traj.sample(t_mid), expected)

    def test_dt_grid_plus_exact_endpoint(self, limits):
        traj = plan_joint_trajectory(np.zeros(5), np.full(5, 0.37), limits, dt=0.01)
        steps = np.diff(traj.times)
        assert np.all(steps[:-1] == pytest.approx(0.01, abs=1e-12))
        assert steps[-1] <= 0.01 + 1e-12
