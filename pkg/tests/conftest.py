import numpy as np
import pytest

from dualarm.geometry import Transform
from dualarm.kinematics import ArmModel, DHRow
from dualarm.trajectory import MotionLimits

REFERENCE_LIMITS = np.array([
    [-np.pi, np.pi],
    [-2.1, 2.1],
    [-2.62, 2.62],
    [-2.62, 2.62],
    [-np.pi, np.pi],
])


def make_reference_arm(mount_y=0.0, name="arm"):
    """The shipped reference geometry: 0.35 m upper/forearm links, 0.10 m
    base riser, 0.08 m tool, shoulder-to-tip reach 0.78 m."""
    rows = (
        DHRow(a=0.0, alpha=np.pi / 2, d=0.10),
        DHRow(a=0.35, alpha=0.0, d=0.0),
        DHRow(a=0.35, alpha=0.0, d=0.0),
        DHRow(a=0.0, alpha=-np.pi / 2, d=0.0),
        DHRow(a=0.0, alpha=0.0, d=0.0),
    )
    mount = Transform.from_xyz_rpy(0.0, mount_y, 0.0, 0.0, 0.0, 0.0)
    return ArmModel(rows=rows, tool_offset=0.08, joint_limits=REFERENCE_LIMITS.copy(),
                    mount=mount, name=name)


@pytest.fixture
def arm():
    return make_reference_arm()


@pytest.fixture
def left_arm():
    return make_reference_arm(mount_y=0.11, name="left")


@pytest.fixture
def right_arm():
    return make_reference_arm(mount_y=-0.11, name="right")


@pytest.fixture
def limits():
    return MotionLimits(vel_max=[1.73, 1.73, 1.73, 2.56, 2.56],
                        acc_max=[0.1, 0.1, 0.1, 0.1, 0.1])


def sample_in_limit_q(model, rng, n=1):
    lo, hi = model.joint_limits[:, 0], model.joint_limits[:, 1]
    qs = rng.uniform(lo, hi, size=(n, 5))
    return qs[0] if n == 1 else qs
