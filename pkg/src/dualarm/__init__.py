"""Dual-arm manipulator control stack.

Analytic 5-DOF kinematics, trapezoidal joint trajectories, pinhole
perception geometry, TF-IDF command matching, a kinematic dual-arm
simulator and a gateway (CLI + network service) composing them into a
voice-command pick pipeline.
"""

from .geometry import Transform, wrap_angle
from .kinematics import (
    ArmModel,
    DHRow,
    IKSolution,
    IKSolutionSet,
    SingularError,
    UnreachableError,
    forward_kinematics,
    inverse_kinematics,
    link_transform,
    within_limits,
)
from .matching import (
    Action,
    CommandEntry,
    CommandLexicon,
    MatchResult,
    NoMatchError,
    build_index,
    cosine_similarity,
    match_command,
    tokenize,
    vectorize,
)
from .perception import (
    CameraExtrinsics,
    CameraIntrinsics,
    Detection,
    Point3,
    back_project,
    camera_to_robot,
    detection_to_grasp_target,
    project,
)
from .simulator import (
    BothUnreachableError,
    NoIKSolutionError,
    NoiseConfig,
    PickReport,
    SceneObject,
    WorldState,
    execute_pick,
    position_error,
    run_trial_protocol,
    select_arm,
    step,
)
from .trajectory import MotionLimits, Trajectory, plan_joint_trajectory

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ArmModel",
    "BothUnreachableError",
    "CameraExtrinsics",
    "CameraIntrinsics",
    "CommandEntry",
    "CommandLexicon",
    "DHRow",
    "Detection",
    "IKSolution",
    "IKSolutionSet",
    "MatchResult",
    "MotionLimits",
    "NoIKSolutionError",
    "NoMatchError",
    "NoiseConfig",
    "PickReport",
    "Point3",
    "SceneObject",
    "SingularError",
    "Trajectory",
    "Transform",
    "UnreachableError",
    "WorldState",
    "back_project",
    "build_index",
    "camera_to_robot",
    "cosine_similarity",
    "detection_to_grasp_target",
    "execute_pick",
    "forward_kinematics",
    "inverse_kinematics",
    "link_transform",
    "match_command",
    "plan_joint_trajectory",
    "position_error",
    "project",
    "run_trial_protocol",
    "select_arm",
    "step",
    "tokenize",
    "vectorize",
    "within_limits",
    "wrap_angle",
]
