"""Time-parameterized joint motion under velocity and acceleration limits.

Each joint follows a trapezoidal speed profile (degenerating to triangular
for short moves).  The slowest joint's minimum time sets a shared duration
and the remaining joints are time-dilated to finish together, which keeps
every joint inside its own limits.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_DT = 0.01


@dataclass
class MotionLimits:
    """Per-joint speed (rad/s) and acceleration (rad/s^2) bounds."""

    vel_max: np.ndarray
    acc_max: np.ndarray

    def __post_init__(self):
        self.vel_max = np.broadcast_to(np.asarray(self.vel_max, dtype=float), (5,)).copy()
        self.acc_max = np.broadcast_to(np.asarray(self.acc_max, dtype=float), (5,)).copy()
        if np.any(self.vel_max <= 0) or np.any(self.acc_max <= 0):
            raise ValueError("all velocity and acceleration limits must be > 0")


@dataclass
class _JointProfile:
    """Minimum-time trapezoid for one joint, evaluated under time dilation."""

    start: float
    delta: float        # signed displacement
    accel: float        # unscaled acceleration magnitude
    t_acc: float        # unscaled ramp duration
    t_cruise: float     # unscaled cruise duration
    scale: float        # >= 1, dilation onto the shared duration

    @property
    def t_total(self):
        return 2.0 * self.t_acc + self.t_cruise

    def eval(self, t):
        """Position offset and velocity at shared time t."""
        tau = min(max(t / self.scale, 0.0), self.t_total)
        v_peak = self.accel * self.t_acc
        if tau < self.t_acc:
            pos = 0.5 * self.accel * tau * tau
            vel = self.accel * tau
        elif tau < self.t_acc + self.t_cruise:
            pos = 0.5 * self.accel * self.t_acc ** 2 + v_peak * (tau - self.t_acc)
            vel = v_peak
        else:
            remaining = self.t_total - tau
            pos = abs(self.delta) - 0.5 * self.accel * remaining * remaining
            vel = self.accel * remaining
        sign = np.sign(self.delta)
        return sign * pos, sign * vel / self.scale


@dataclass
class Trajectory:
    """Sampled joint motion: times (n,), positions (n,5), velocities (n,5).

    Times rise strictly from 0; the first sample equals the start, the last
    equals the goal with zero velocity.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray

    @property
    def duration(self):
        return float(self.times[-1])

    def sample(self, t):
        """Joint vector at time t by linear interpolation of the samples,
        clamped to the endpoints."""
        t = float(np.clip(t, 0.0, self.duration))
        return np.array([
            np.interp(t, self.times, self.positions[:, j])
            for j in range(self.positions.shape[1])
        ])

    def done(self, t):
        return t >= self.duration


def _min_time_profile(delta, v_max, a_max):
    """(accel, t_acc, t_cruise) of the minimum-time profile for |delta|."""
    dist = abs(delta)
    if dist == 0.0:
        return a_max, 0.0, 0.0
    v_tri = np.sqrt(dist * a_max)
    if v_tri <= v_max:
        t_acc = np.sqrt(dist / a_max)
        return a_max, t_acc, 0.0
    t_acc = v_max / a_max
    t_cruise = dist / v_max - t_acc
    return a_max, t_acc, t_cruise


def plan_joint_trajectory(q_start, q_goal, limits, dt=DEFAULT_DT):
    """Plan a synchronized trapezoidal move from ``q_start`` to ``q_goal``.

    Samples every ``dt`` seconds plus the exact endpoint.  Zero displacement
    yields a single-point trajectory of duration 0.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    q_start = np.asarray(q_start, dtype=float)
    q_goal = np.asarray(q_goal, dtype=float)
    if q_start.shape != q_goal.shape:
        raise ValueError("start and goal joint vectors must have the same shape")

    deltas = q_goal - q_start
    profiles = []
    for j, delta in enumerate(deltas):
        accel, t_acc, t_cruise = _min_time_profile(delta, limits.vel_max[j], limits.acc_max[j])
        profiles.append(_JointProfile(q_start[j], delta, accel, t_acc, t_cruise, 1.0))

    duration = max(p.t_total for p in profiles)
    if duration == 0.0:
        return Trajectory(
            times=np.zeros(1),
            positions=q_start[None, :].copy(),
            velocities=np.zeros((1, q_start.size)),
        )

    for p in profiles:
        if p.t_total > 0.0:
            p.scale = duration / p.t_total

    n_whole = int(np.floor(duration / dt + 1e-12))
    times = list(np.arange(n_whole + 1) * dt)
    if duration - times[-1] > 1e-12:
        times.append(duration)
    else:
        times[-1] = duration
    times = np.asarray(times)

    positions = np.empty((times.size, q_start.size))
    velocities = np.empty_like(positions)
    for i, t in enumerate(times):
        for j, p in enumerate(profiles):
            offset, vel = p.eval(t)
            positions[i, j] = p.start + offset
            velocities[i, j] = vel

    # The endpoints are exact by construction of the profiles; pin them
    # anyway so downstream equality checks never see round-off.
    positions[0] = q_start
    positions[-1] = q_goal
    velocities[-1] = 0.0
    return Trajectory(times=times, positions=positions, velocities=velocities)
