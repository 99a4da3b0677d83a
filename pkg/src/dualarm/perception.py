"""Pinhole projection, depth back-projection and camera-to-robot transfer.

A detected object (pixel center + measured depth) becomes a grasp target in
the robot frame: back-project through the intrinsics, then apply the rigid
camera-to-robot extrinsics.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import ORTHONORMAL_TOL

CAMERA_FRAME = "camera"
ROBOT_FRAME = "robot"


class PerceptionError(Exception):
    pass


class BehindCameraError(PerceptionError):
    """Point has non-positive depth along the optical axis."""


class NonPositiveDepthError(PerceptionError):
    """Measured depth must be strictly positive."""


class FrameMismatchError(PerceptionError):
    """Operation received a point tagged with the wrong coordinate frame."""


@dataclass(frozen=True)
class Point3:
    """A 3D point tagged with its coordinate frame ('camera' or 'robot')."""

    x: float
    y: float
    z: float
    frame: str = ROBOT_FRAME

    def __post_init__(self):
        if self.frame not in (CAMERA_FRAME, ROBOT_FRAME):
            raise ValueError(f"unknown frame {self.frame!r}")
        if not np.all(np.isfinite([self.x, self.y, self.z])):
            raise ValueError("point components must be finite")

    @property
    def array(self):
        return np.array([self.x, self.y, self.z])

    @classmethod
    def of(cls, vec, frame):
        vec = np.asarray(vec, dtype=float)
        return cls(float(vec[0]), float(vec[1]), float(vec[2]), frame)


@dataclass(frozen=True)
class CameraIntrinsics:
    """Single focal length f plus principal point, both in pixels."""

    f: float
    cx: float
    cy: float
    width: int = 640
    height: int = 480

    def __post_init__(self):
        if self.f <= 0:
            raise ValueError(f"focal length must be > 0, got {self.f}")
        if not (0 <= self.cx < self.width):
            raise ValueError("principal point cx must lie inside the image")
        if not (0 <= self.cy < self.height):
            raise ValueError("principal point cy must lie inside the image")

    def contains(self, u, v):
        return 0 <= u < self.width and 0 <= v < self.height


@dataclass(frozen=True)
class CameraExtrinsics:
    """Rigid transform taking camera-frame points into the robot frame."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        translation = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(rotation.T @ rotation, np.eye(3), atol=ORTHONORMAL_TOL):
            raise ValueError("extrinsic rotation is not orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > 1e-6:
            raise ValueError("extrinsic rotation must have determinant +1")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)


@dataclass(frozen=True)
class Detection:
    """One detected object: class label, pixel bbox center/size, depth (m)."""

    label: str
    u: float
    v: float
    width: float
    height: float
    depth: float
    confidence: float = 1.0


def validate_detection(det, intrinsics):
    """List of reasons this detection record is invalid (empty if valid)."""
    reasons = []
    if not det.label:
        reasons.append("EmptyLabel: label must be non-empty")
    if not intrinsics.contains(det.u, det.v):
        reasons.append(f"CenterOutsideImage: ({det.u}, {det.v}) not inside "
                       f"{intrinsics.width}x{intrinsics.height}")
    if det.width <= 0 or det.height <= 0:
        reasons.append("NonPositiveBBox: bbox width and height must be > 0")
    if det.depth <= 0:
        reasons.append(f"NonPositiveDepth: depth {det.depth} must be > 0")
    if not (0.0 <= det.confidence <= 1.0):
        reasons.append(f"ConfidenceOutOfRange: {det.confidence} not in [0, 1]")
    return reasons


def project(intrinsics, point):
    """Pixel (u, v) of a camera-frame point: u = f*x/z + cx, v = f*y/z + cy.

    Real-valued (not rounded); raises BehindCameraError for z <= 0.
    """
    if point.frame != CAMERA_FRAME:
        raise FrameMismatchError(f"project expects a camera-frame point, got {point.frame!r}")
    if point.z <= 0:
        raise BehindCameraError(f"point depth {point.z} is not in front of the camera")
    u = intrinsics.f * point.x / point.z + intrinsics.cx
    v = intrinsics.f * point.y / point.z + intrinsics.cy
    return u, v


def back_project(intrinsics, pixel, depth):
    """Camera-frame point recovered from a pixel and a measured depth (m)."""
    if depth <= 0:
        raise NonPositiveDepthError(f"depth must be > 0, got {depth}")
    u, v = pixel
    x = depth * (u - intrinsics.cx) / intrinsics.f
    y = depth * (v - intrinsics.cy) / intrinsics.f
    return Point3(x, y, float(depth), CAMERA_FRAME)


def camera_to_robot(extrinsics, point):
    """Apply the rigid extrinsics: p_robot = R @ p_camera + T."""
    if point.frame != CAMERA_FRAME:
        raise FrameMismatchError(f"expected a camera-frame point, got {point.frame!r}")
    return Point3.of(extrinsics.rotation @ point.array + extrinsics.translation, ROBOT_FRAME)


def robot_to_camera(extrinsics, point):
    """Inverse of ``camera_to_robot``."""
    if point.frame != ROBOT_FRAME:
        raise FrameMismatchError(f"expected a robot-frame point, got {point.frame!r}")
    return Point3.of(extrinsics.rotation.T @ (point.array - extrinsics.translation), CAMERA_FRAME)


def detection_to_grasp_target(intrinsics, extrinsics, detection):
    """Robot-frame grasp point for a detection: back-project its bbox center
    at the measured depth, then transfer through the extrinsics."""
    camera_point = back_project(intrinsics, (detection.u, detection.v), detection.depth)
    return camera_to_robot(extrinsics, camera_point)


def synthesize_detection(intrinsics, extrinsics, label, point, bbox=(40.0, 40.0),
                         confidence=1.0):
    """Build the detection an ideal detector would emit for a robot-frame
    object position (used by scenario fixtures and the demo scene)."""
    camera_point = robot_to_camera(extrinsics, point)
    u, v = project(intrinsics, camera_point)
    if not intrinsics.contains(u, v):
        raise PerceptionError(
            f"object at {point.array.tolist()} projects outside the image: ({u:.1f}, {v:.1f})")
    return Detection(label=label, u=u, v=v, width=bbox[0], height=bbox[1],
                     depth=camera_point.z, confidence=confidence)
