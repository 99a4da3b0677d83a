"""Kinematic world model of the dual-arm robot and its scene.

Arms follow planned trajectories exactly (no dynamics); an optional
zero-mean Gaussian perturbation of the terminal joint angles emulates
actuator and measurement error.  Pick actions are scored by the Euclidean
distance between the requested and the achieved gripper position, reported
in centimeters, with a 10-measurement protocol producing a per-trial table
plus the arithmetic mean.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

from . import kinematics
from .geometry import Transform
from .perception import Point3, FrameMismatchError, ROBOT_FRAME
from .trajectory import plan_joint_trajectory

LEFT = "left"
RIGHT = "right"
SIDES = (LEFT, RIGHT)

GRIPPER_OPEN = "open"
GRIPPER_CLOSED = "closed"


class SimulatorError(Exception):
    pass


class BothUnreachableError(SimulatorError):
    """Neither arm has a valid in-limit solution for the target."""


class NoIKSolutionError(SimulatorError):
    """The designated arm cannot reach the target within its joint limits."""


class UnknownObjectError(SimulatorError):
    pass


@dataclass
class NoiseConfig:
    """Zero-mean Gaussian joint noise injected when a trajectory finishes."""

    enabled: bool = False
    joint_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.joint_sigma < 0:
            raise ValueError("joint_sigma must be >= 0")


@dataclass
class SceneObject:
    id: str
    label: str
    position: Point3
    held_by: str = None


@dataclass
class _ActiveTrajectory:
    trajectory: object
    start_time: float


@dataclass
class ArmState:
    side: str
    q: np.ndarray
    gripper: str = GRIPPER_OPEN
    active: _ActiveTrajectory = None

    def moving(self):
        return self.active is not None


@dataclass
class WorldState:
    """Simulated time, both arm states, scene objects and the noise source.

    Mutated only through ``step`` and the pick operations; the random
    generator is owned here so identical seeds replay identically.
    """

    models: dict
    arms: dict
    noise: NoiseConfig
    time: float = 0.0
    objects: dict = field(default_factory=dict)
    rng: np.random.Generator = None

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.noise.seed)

    @classmethod
    def create(cls, models, noise=None):
        noise = noise or NoiseConfig()
        arms = {side: ArmState(side=side, q=models[side].home()) for side in SIDES}
        return cls(models=models, arms=arms, noise=noise)

    def tool_position(self, side):
        pose = kinematics.forward_kinematics(self.models[side], self.arms[side].q)
        return Point3.of(pose.translation, ROBOT_FRAME)

    def spawn_object(self, obj_id, label, position):
        if obj_id in self.objects:
            raise ValueError(f"object id {obj_id!r} already exists")
        self.objects[obj_id] = SceneObject(id=obj_id, label=label, position=position)
        return self.objects[obj_id]

    def remove_object(self, obj_id):
        self.objects.pop(obj_id, None)

    def reset_arms(self):
        """Instantly return both arms home with open grippers; held objects
        are released in place."""
        for side in SIDES:
            arm = self.arms[side]
            arm.q = self.models[side].home()
            arm.gripper = GRIPPER_OPEN
            arm.active = None
        for obj in self.objects.values():
            obj.held_by = None


def position_error(desired, achieved):
    """Euclidean distance between two same-frame points, in centimeters."""
    if desired.frame != achieved.frame:
        raise FrameMismatchError(
            f"cannot compare points in frames {desired.frame!r} and {achieved.frame!r}")
    return float(np.linalg.norm(desired.array - achieved.array)) * 100.0


def approach_pose(target):
    """Gripper-down pose at a robot-frame point: tool z points along -z and
    the tool x axis is chosen radially so the wrist yaw stays neutral."""
    yaw = np.arctan2(target.y, target.x)
    c, s = np.cos(yaw), np.sin(yaw)
    m = np.eye(4)
    m[:3, 0] = (-c, -s, 0.0)
    m[:3, 1] = (-s, c, 0.0)
    m[:3, 2] = (0.0, 0.0, -1.0)
    m[:3, 3] = target.array
    return Transform(m, validate=False)


def _solve_grasp(model, target):
    """Best valid IK solution for a gripper-down grasp (elbow-up preferred),
    or None when the target is unreachable within limits."""
    try:
        solutions = kinematics.inverse_kinematics(model, approach_pose(target))
    except kinematics.KinematicsError:
        return None
    valid = solutions.valid_solutions()
    if not valid:
        return None
    return min(valid, key=lambda s: s.branch != kinematics.ELBOW_UP)


def select_arm(world, target):
    """Choose the executing arm: the one whose mount is nearer the target in
    y, falling back to the other if it has no valid solution; tie goes right.

    Raises BothUnreachableError when neither arm can reach the target.
    """
    if target.frame != ROBOT_FRAME:
        raise FrameMismatchError("select_arm expects a robot-frame target")
    gaps = {side: abs(target.y - world.models[side].mount.translation[1]) for side in SIDES}
    order = [RIGHT, LEFT] if gaps[RIGHT] <= gaps[LEFT] else [LEFT, RIGHT]
    for side in order:
        if _solve_grasp(world.models[side], target) is not None:
            return side
    raise BothUnreachableError(
        f"no arm can reach ({target.x:.3f}, {target.y:.3f}, {target.z:.3f})")


@dataclass
class PickReport:
    desired: Point3
    achieved: Point3
    error_cm: float
    arm: str
    elapsed: float


@dataclass
class _PickPlan:
    side: str
    desired: Point3
    object_id: str
    goal_q: np.ndarray
    start_time: float


def step(world, dt):
    """Advance simulated time by dt: arms track their active trajectories by
    interpolation, finished trajectories retire (with terminal noise if
    enabled) and held objects follow their gripper."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    world.time += dt
    for side in SIDES:
        arm = world.arms[side]
        if arm.active is None:
            continue
        elapsed = world.time - arm.active.start_time
        traj = arm.active.trajectory
        if traj.done(elapsed):
            arm.q = traj.positions[-1].copy()
            if world.noise.enabled and world.noise.joint_sigma > 0:
                noisy = arm.q + world.rng.normal(0.0, world.noise.joint_sigma, arm.q.size)
                limits = world.models[side].joint_limits
                arm.q = np.clip(noisy, limits[:, 0], limits[:, 1])
            arm.active = None
        else:
            arm.q = traj.sample(elapsed)
    for obj in world.objects.values():
        if obj.held_by is not None:
            obj.position = world.tool_position(obj.held_by)


def start_pick(world, target, object_id, limits, dt, side=None):
    """Validate a pick, choose the arm, solve IK and start the trajectory.

    Returns the in-flight plan for ``finish_pick``.  With an explicit
    ``side`` an infeasible target raises NoIKSolutionError; otherwise arm
    selection raises BothUnreachableError when no arm qualifies.
    """
    if object_id not in world.objects:
        raise UnknownObjectError(f"no object with id {object_id!r}")
    obj = world.objects[object_id]
    if obj.held_by is not None:
        raise SimulatorError(f"object {object_id!r} is already held by {obj.held_by}")

    if side is None:
        side = select_arm(world, target)
        solution = _solve_grasp(world.models[side], target)
    else:
        solution = _solve_grasp(world.models[side], target)
        if solution is None:
            raise NoIKSolutionError(
                f"{side} arm has no in-limit solution for "
                f"({target.x:.3f}, {target.y:.3f}, {target.z:.3f})")

    arm = world.arms[side]
    traj = plan_joint_trajectory(arm.q, solution.q, limits, dt)
    arm.active = _ActiveTrajectory(trajectory=traj, start_time=world.time)
    return _PickPlan(side=side, desired=target, object_id=object_id,
                     goal_q=solution.q, start_time=world.time)


def finish_pick(world, plan):
    """Close the gripper on a completed trajectory and score the pick."""
    arm = world.arms[plan.side]
    if arm.active is not None:
        raise SimulatorError("trajectory still active; step the world to completion first")
    arm.gripper = GRIPPER_CLOSED
    achieved = world.tool_position(plan.side)
    obj = world.objects[plan.object_id]
    obj.held_by = plan.side
    obj.position = achieved
    return PickReport(
        desired=plan.desired,
        achieved=achieved,
        error_cm=position_error(plan.desired, achieved),
        arm=plan.side,
        elapsed=world.time - plan.start_time,
    )


def execute_pick(world, target, object_id, limits, dt=0.01, side=None, pacing=None):
    """Run a full pick synchronously: select arm, plan, step to completion,
    close the gripper and report the positional error."""
    plan = start_pick(world, target, object_id, limits, dt, side=side)
    arm = world.arms[plan.side]
    while arm.active is not None:
        step(world, dt)
        if pacing is not None:
            pacing()
    return finish_pick(world, plan)


@dataclass
class TrialResult:
    """Outcome of the n-trial pick protocol: per-trial errors (cm) with
    failures marked, plus the arithmetic mean over successful trials."""

    errors: list
    failures: list
    reports: list

    @property
    def mean_cm(self):
        values = [e for e in self.errors if e is not None]
        return float(np.mean(values)) if values else float("nan")


def run_trial_protocol(world, targets, limits, dt=0.01):
    """Execute one independent pick per target (the standard protocol uses
    10) and tabulate the errors.

    Arms reset home between trials; the noise stream is shared across trials
    so a fixed seed reproduces the whole table.  Failed trials are recorded,
    not retried.
    """
    errors, failures, reports = [], [], []
    for i, target in enumerate(targets):
        world.reset_arms()
        obj_id = f"trial_{i + 1}"
        world.spawn_object(obj_id, label="trial-target", position=target)
        try:
            report = execute_pick(world, target, obj_id, limits, dt)
            errors.append(report.error_cm)
            failures.append(None)
            reports.append(report)
        except SimulatorError as exc:
            errors.append(None)
            failures.append(f"{type(exc).__name__}: {exc}")
            reports.append(None)
        finally:
            world.remove_object(obj_id)
    return TrialResult(errors=errors, failures=failures, reports=reports)


def snapshot_world(world, history=()):
    """Plain-dict view of the world for serialization and streaming."""
    arms = {}
    for side in SIDES:
        arm = world.arms[side]
        model = world.models[side]
        arms[side] = {
            "q": [float(v) for v in arm.q],
            "gripper": arm.gripper,
            "moving": arm.moving(),
            "links": [[float(v) for v in p] for p in kinematics.link_points(model, arm.q)],
            "tool": [float(v) for v in world.tool_position(side).array],
        }
    objects = [
        {
            "id": obj.id,
            "label": obj.label,
            "position": [obj.position.x, obj.position.y, obj.position.z],
            "held_by": obj.held_by,
        }
        for obj in world.objects.values()
    ]
    return {
        "time": world.time,
        "arms": arms,
        "objects": objects,
        "history": list(copy.deepcopy(history)),
    }
