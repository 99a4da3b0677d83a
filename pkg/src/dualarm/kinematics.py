"""Analytic forward and inverse kinematics for a 5-DOF serial arm.

The arm is modeled as a standard Denavit-Hartenberg chain of five revolute
joints followed by a fixed tool extension along the final z axis.  The
reference geometry (see ``data/arms``) is a yaw base, two planar links, a
wrist pitch and a wrist roll, which admits a closed-form inverse solution
with an elbow-up/elbow-down branch pair.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import Transform, rotation_geodesic, wrap_angle

ELBOW_UP = "elbow_up"
ELBOW_DOWN = "elbow_down"

# Targets whose wrist axis projects this close to the base axis have an
# undefined base yaw.
SINGULAR_RADIUS = 1e-12

# Slack accepted on the elbow arccos argument before declaring a target
# unreachable (absorbs round-off for boundary poses).
ARCCOS_SLACK = 1e-9


class KinematicsError(Exception):
    pass


class UnreachableError(KinematicsError):
    """Target lies outside the arm's reachable workspace."""


class SingularError(KinematicsError):
    """Base yaw is undefined: target x and y vanish in the arm frame."""


@dataclass(frozen=True)
class DHRow:
    """One Denavit-Hartenberg row: link length a (m), twist alpha (rad),
    offset d (m) and a fixed joint-angle offset (rad)."""

    a: float
    alpha: float
    d: float
    theta_offset: float = 0.0

    def __post_init__(self):
        if self.a < 0:
            raise ValueError(f"link length a must be >= 0, got {self.a}")
        for name in ("alpha", "theta_offset"):
            value = getattr(self, name)
            if not (-np.pi < value <= np.pi):
                raise ValueError(f"{name} must lie in (-pi, pi], got {value}")


@dataclass
class ArmModel:
    """Five DH rows plus a tool extension, joint limits and a mount pose.

    ``mount`` is the pose of the arm base expressed in the robot frame, so
    robot-frame poses are ``mount @ (arm-frame pose)``.
    """

    rows: tuple
    tool_offset: float
    joint_limits: np.ndarray
    mount: Transform = field(default_factory=Transform.identity)
    name: str = "arm"

    def __post_init__(self):
        self.rows = tuple(self.rows)
        if len(self.rows) != 5:
            raise ValueError(f"arm model needs exactly 5 DH rows, got {len(self.rows)}")
        self.joint_limits = np.asarray(self.joint_limits, dtype=float)
        if self.joint_limits.shape != (5, 2):
            raise ValueError("joint_limits must be a 5x2 array of [min, max]")
        if np.any(self.joint_limits[:, 0] >= self.joint_limits[:, 1]):
            raise ValueError("each joint limit must satisfy min < max")
        if self.rows[1].a + self.rows[2].a + self.tool_offset <= 0:
            raise ValueError("arm has no reach: a2 + a3 + tool_offset must be > 0")

    def home(self):
        return np.zeros(5)


def link_transform(row, theta):
    """Standard DH link transform Rot_z(theta+offset) Trans_z(d) Trans_x(a) Rot_x(alpha)."""
    ct, st = np.cos(theta + row.theta_offset), np.sin(theta + row.theta_offset)
    ca, sa = np.cos(row.alpha), np.sin(row.alpha)
    m = np.array([
        [ct, -st * ca, st * sa, row.a * ct],
        [st, ct * ca, -ct * sa, row.a * st],
        [0.0, sa, ca, row.d],
        [0.0, 0.0, 0.0, 1.0],
    ])
    return Transform(m, validate=False)


def _chain_matrices(arm, q):
    """Cumulative robot-frame transforms after the mount and each joint."""
    mats = [arm.mount.matrix]
    current = arm.mount.matrix
    for row, theta in zip(arm.rows, q):
        current = current @ link_transform(row, theta).matrix
        mats.append(current)
    return mats


def forward_kinematics(arm, q):
    """Pose of the gripper tip in the robot frame for joint vector ``q``.

    Out-of-limit angles still evaluate; validity is a separate check
    (``within_limits``).
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (5,):
        raise ValueError(f"joint vector must have 5 angles, got shape {q.shape}")
    tip = _chain_matrices(arm, q)[-1].copy()
    tip[:3, 3] += tip[:3, 2] * arm.tool_offset
    return Transform(tip, validate=False)


def link_points(arm, q):
    """Robot-frame positions of mount, shoulder, elbow, wrist and tool tip.

    Convenience for rendering; the wrist pitch and roll share an origin so
    a single wrist point is reported.
    """
    mats = _chain_matrices(arm, np.asarray(q, dtype=float))
    tip = mats[-1][:3, 3] + mats[-1][:3, 2] * arm.tool_offset
    return np.array([
        mats[0][:3, 3],  # mount
        mats[1][:3, 3],  # shoulder (top of the base riser)
        mats[2][:3, 3],  # elbow
        mats[3][:3, 3],  # wrist
        tip,
    ])


def within_limits(arm, q):
    """True iff every joint angle lies in its closed [min, max] interval."""
    q = np.asarray(q, dtype=float)
    return bool(np.all(q >= arm.joint_limits[:, 0]) and np.all(q <= arm.joint_limits[:, 1]))


@dataclass
class IKSolution:
    q: np.ndarray
    branch: str
    position_residual: float
    rotation_residual: float
    valid: bool


@dataclass
class IKSolutionSet:
    """Closed-form solutions for one target pose.

    Solutions outside the joint limits are kept but flagged ``valid=False``;
    an empty list means the pose's orientation is not realizable by this
    5-DOF chain.
    """

    solutions: list

    def valid_solutions(self):
        return [s for s in self.solutions if s.valid]

    def best(self, reference=None):
        """Deterministic pick: valid before invalid, elbow-up before
        elbow-down, then (optionally) nearest to a reference joint vector."""
        if not self.solutions:
            return None

        def key(sol):
            distance = float(np.linalg.norm(sol.q - reference)) if reference is not None else 0.0
            return (not sol.valid, distance, sol.branch != ELBOW_UP)

        return min(self.solutions, key=key)


def inverse_kinematics(arm, target, position_tol=1e-6, rotation_tol=1e-6):
    """All closed-form joint solutions reaching ``target`` (robot frame).

    Returns both elbow branches; each returned solution's forward pose
    matches the target within ``position_tol`` m and ``rotation_tol`` rad
    (solutions violating that residual are dropped, which happens when the
    requested orientation is outside the chain's 5-DOF family).

    Raises ``UnreachableError`` when the elbow arccos argument exceeds 1 and
    ``SingularError`` when the base yaw is undefined (x = y = 0).
    """
    local = arm.mount.inverse() @ target
    px, py, pz = local.translation
    ix, iy, iz = local.rotation[:, 0]
    kx, ky, kz = local.rotation[:, 2]

    a2, a3 = arm.rows[1].a, arm.rows[2].a
    d, d_e = arm.rows[0].d, arm.tool_offset

    if abs(px) < SINGULAR_RADIUS and abs(py) < SINGULAR_RADIUS:
        raise SingularError("base yaw undefined: target x = y = 0 in the arm frame")
    theta1 = np.arctan2(py, px)
    c1, s1 = np.cos(theta1), np.sin(theta1)

    # Wrist pitch sum from the approach axis: its arm-frame components are
    # (-c1*s234, -s1*s234, c234).
    s234 = -(kx * c1 + ky * s1)
    c234 = kz
    theta234 = np.arctan2(s234, c234)

    # Planar (radial, vertical) wrist coordinates after removing the tool.
    m = px * c1 + py * s1 + d_e * s234
    n = pz - d - d_e * c234

    cos3 = (m * m + n * n - a2 * a2 - a3 * a3) / (2.0 * a2 * a3)
    if abs(cos3) > 1.0 + ARCCOS_SLACK:
        raise UnreachableError(
            f"target out of reach: elbow cosine {cos3:.6f} outside [-1, 1]")
    cos3 = float(np.clip(cos3, -1.0, 1.0))

    # Wrist roll from the tool x axis, resolved against the frame reached
    # after yaw and pitch: sin = iy*c1 - ix*s1, cos = (ix*c1 + iy*s1)*c234 + iz*s234.
    sin5 = iy * c1 - ix * s1
    cos5 = (ix * c1 + iy * s1) * c234 + iz * s234
    theta5 = np.arctan2(sin5, cos5)

    solutions = []
    for branch, theta3 in ((ELBOW_DOWN, np.arccos(cos3)), (ELBOW_UP, -np.arccos(cos3))):
        s3 = np.sin(theta3)
        theta2 = np.arctan2(n * (a2 + a3 * cos3) - m * a3 * s3,
                            n * a3 * s3 + m * (a2 + a3 * cos3))
        theta4 = theta234 - theta2 - theta3
        q = wrap_angle(np.array([theta1, theta2, theta3, theta4, theta5]))
        pose = forward_kinematics(arm, q)
        dp = float(np.linalg.norm(pose.translation - target.translation))
        dr = rotation_geodesic(pose.rotation, target.rotation)
        if dp <= position_tol and dr <= rotation_tol:
            solutions.append(IKSolution(
                q=q,
                branch=branch,
                position_residual=dp,
                rotation_residual=dr,
                valid=within_limits(arm, q),
            ))
    return IKSolutionSet(solutions=solutions)
