"""Rigid-transform primitives shared by the kinematics and perception code."""

import numpy as np

ORTHONORMAL_TOL = 1e-9


def wrap_angle(angle):
    """Wrap an angle (scalar or array) to the half-open interval (-pi, pi]."""
    wrapped = np.remainder(np.asarray(angle, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped == -np.pi, np.pi, wrapped)
    return float(wrapped) if np.isscalar(angle) or np.ndim(angle) == 0 else wrapped


def rot_x(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_geodesic(rot_a, rot_b):
    """Angle (rad) of the relative rotation between two 3x3 rotation matrices.

    Uses atan2 of the skew-symmetric part against the trace, which stays
    numerically stable for nearly identical rotations.
    """
    rel = np.asarray(rot_a).T @ np.asarray(rot_b)
    skew = 0.5 * np.array([rel[2, 1] - rel[1, 2], rel[0, 2] - rel[2, 0], rel[1, 0] - rel[0, 1]])
    return float(np.arctan2(np.linalg.norm(skew), 0.5 * (np.trace(rel) - 1.0)))


class Transform:
    """A 4x4 homogeneous rigid transform (rotation + translation).

    The rotation block is validated to be orthonormal with determinant +1
    within ``ORTHONORMAL_TOL``; the bottom row is fixed to [0 0 0 1].
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, validate=True):
        m = np.array(matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"transform matrix must be 4x4, got {m.shape}")
        m[3, :] = (0.0, 0.0, 0.0, 1.0)
        if validate:
            rot = m[:3, :3]
            if not np.allclose(rot.T @ rot, np.eye(3), atol=ORTHONORMAL_TOL):
                raise ValueError("rotation block is not orthonormal")
            if abs(np.linalg.det(rot) - 1.0) > 1e-6:
                raise ValueError("rotation block must have determinant +1")
        self.matrix = m

    @classmethod
    def identity(cls):
        return cls(np.eye(4), validate=False)

    @classmethod
    def from_rotation_translation(cls, rotation, translation, validate=True):
        m = np.eye(4)
        m[:3, :3] = np.asarray(rotation, dtype=float)
        m[:3, 3] = np.asarray(translation, dtype=float)
        return cls(m, validate=validate)

    @classmethod
    def from_xyz_rpy(cls, x, y, z, roll, pitch, yaw):
        """Translation plus intrinsic z-y-x (yaw, pitch, roll) rotation."""
        rotation = rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)
        return cls.from_rotation_translation(rotation, (x, y, z), validate=False)

    @property
    def rotation(self):
        return self.matrix[:3, :3]

    @property
    def translation(self):
        return self.matrix[:3, 3]

    def inverse(self):
        rot_t = self.rotation.T
        m = np.eye(4)
        m[:3, :3] = rot_t
        m[:3, 3] = -rot_t @ self.translation
        return Transform(m, validate=False)

    def apply(self, point):
        """Transform a 3-vector point."""
        return self.rotation @ np.asarray(point, dtype=float) + self.translation

    def __matmul__(self, other):
        if isinstance(other, Transform):
            return Transform(self.matrix @ other.matrix, validate=False)
        return NotImplemented

    def distance_to(self, other):
        """(position distance m, rotation geodesic rad) between two transforms."""
        dp = float(np.linalg.norm(self.translation - other.translation))
        dr = rotation_geodesic(self.rotation, other.rotation)
        return dp, dr

    def __repr__(self):
        p = np.round(self.translation, 6)
        return f"Transform(p={p.tolist()})"
