"""System configuration: loading, cross-file resolution and validation.

A config file is YAML referencing two arm description files (a versioned
key-value text format, see docs/formats.md) and a JSON lexicon.  Loading
either raises ``ParseError`` (missing or syntactically broken files) or
``ValidationError`` carrying every value-level violation found, each tagged
with its field path.
"""

import json
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path

import numpy as np
import yaml

from ..geometry import Transform
from ..kinematics import ArmModel, DHRow
from ..matching import Action, CommandEntry, CommandLexicon
from ..perception import CameraExtrinsics, CameraIntrinsics, Point3
from ..simulator import NoiseConfig, SIDES
from ..trajectory import MotionLimits

DEFAULT_CONFIG_NAME = "default"


class ConfigError(Exception):
    pass


class ParseError(ConfigError):
    """A referenced file is missing or cannot be parsed."""


class ValidationError(ConfigError):
    """One or more field-level violations, each with its field path."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.violations))


@dataclass
class ServiceSettings:
    port: int = 8350
    snapshot_hz: float = 20.0
    time_scale: float = 1.0
    history_tail: int = 50


@dataclass
class SceneItem:
    id: str
    label: str
    position: Point3


@dataclass
class SystemConfig:
    arms: dict
    intrinsics: CameraIntrinsics
    extrinsics: CameraExtrinsics
    lexicon: CommandLexicon
    match_threshold: float
    motion_limits: MotionLimits
    noise: NoiseConfig
    dt: float
    service: ServiceSettings
    scene: list = field(default_factory=list)
    source: Path = None


def data_dir():
    return Path(str(files("dualarm").joinpath("data")))


def default_config_path():
    return data_dir() / "config.yaml"


def _read_text(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def parse_arm_file(path, name="arm"):
    """Parse a versioned arm description file into an ArmModel."""
    text = _read_text(path)
    version = None
    dh_rows, limit_rows, tool_offset, mount_pose = [], [], None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        try:
            if key == "version":
                version = int(args[0])
            elif key == "dh":
                if len(args) != 4:
                    raise ValueError("expected 4 values: a alpha d theta_offset")
                dh_rows.append(tuple(float(v) for v in args))
            elif key == "tool_offset":
                tool_offset = float(args[0])
            elif key == "limit":
                if len(args) != 2:
                    raise ValueError("expected 2 values: min max")
                limit_rows.append((float(args[0]), float(args[1])))
            elif key == "mount":
                if len(args) != 6:
                    raise ValueError("expected 6 values: x y z roll pitch yaw")
                mount_pose = tuple(float(v) for v in args)
            else:
                raise ValueError(f"unknown directive {key!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc

    if version != 1:
        raise ParseError(f"{path}: unsupported or missing version (need 'version 1')")
    if len(dh_rows) != 5:
        raise ParseError(f"{path}: expected exactly 5 'dh' rows, found {len(dh_rows)}")
    if len(limit_rows) != 5:
        raise ParseError(f"{path}: expected exactly 5 'limit' rows, found {len(limit_rows)}")
    if tool_offset is None:
        raise ParseError(f"{path}: missing 'tool_offset'")
    if mount_pose is None:
        raise ParseError(f"{path}: missing 'mount'")

    try:
        rows = tuple(DHRow(a=a, alpha=alpha, d=d, theta_offset=off)
                     for a, alpha, d, off in dh_rows)
        mount = Transform.from_xyz_rpy(*mount_pose)
        return ArmModel(rows=rows, tool_offset=tool_offset,
                        joint_limits=np.array(limit_rows), mount=mount, name=name)
    except ValueError as exc:
        raise ValidationError([f"{path}: {exc}"]) from exc


def parse_lexicon_file(path):
    """Parse a JSON lexicon file: a list of {template, action, object_label}."""
    text = _read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return build_lexicon(raw, source=str(path))


def build_lexicon(raw, source="lexicon"):
    if not isinstance(raw, list) or not raw:
        raise ValidationError([f"{source}: lexicon must be a non-empty list"])
    violations, entries = [], []
    for i, item in enumerate(raw):
        where = f"{source}[{i}]"
        if not isinstance(item, dict):
            violations.append(f"{where}: entry must be a mapping")
            continue
        try:
            action = Action(item.get("action", "pick_up"))
            entries.append(CommandEntry(template=str(item.get("template", "")),
                                        action=action,
                                        object_label=str(item.get("object_label", ""))))
        except ValueError as exc:
            violations.append(f"{where}: {exc}")
    if violations:
        raise ValidationError(violations)
    try:
        return CommandLexicon(entries=tuple(entries))
    except ValueError as exc:
        raise ValidationError([f"{source}: {exc}"]) from exc


def load_config_data(path):
    """Raw YAML mapping of a config file ('default' resolves to the shipped
    one); returns (data, base_dir)."""
    if str(path) == DEFAULT_CONFIG_NAME:
        path = default_config_path()
    path = Path(path)
    text = _read_text(path)
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: config must be a YAML mapping")
    return data, path


def build_config(data, base_path):
    """Validate a raw config mapping into a SystemConfig, collecting every
    field-level violation."""
    base_dir = Path(base_path).parent
    violations = []

    def grab(path_key, default=None):
        node = data
        for part in path_key.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def grab_mapping(path_key):
        node = grab(path_key, {})
        if not isinstance(node, dict):
            violations.append(f"{path_key}: must be a mapping, got {type(node).__name__}")
            return {}
        return node

    arms = {}
    for side in SIDES:
        ref = grab(f"arms.{side}")
        if ref is None:
            violations.append(f"arms.{side}: missing arm description reference")
            continue
        try:
            arms[side] = parse_arm_file(base_dir / ref, name=side)
        except ValidationError as exc:
            violations.extend(f"arms.{side}: {v}" for v in exc.violations)
    if len(arms) == 2:
        gap = np.linalg.norm(arms["left"].mount.translation
                             - arms["right"].mount.translation)
        if gap == 0.0:
            violations.append("arms: left and right mounts must be distinct")

    intrinsics = None
    intr = grab_mapping("camera.intrinsics")
    try:
        intrinsics = CameraIntrinsics(
            f=float(intr.get("f", 0.0)), cx=float(intr.get("cx", 0.0)),
            cy=float(intr.get("cy", 0.0)), width=int(intr.get("width", 640)),
            height=int(intr.get("height", 480)))
    except (ValueError, TypeError) as exc:
        violations.append(f"camera.intrinsics: {exc}")

    extrinsics = None
    extr = grab_mapping("camera.extrinsics")
    try:
        extrinsics = CameraExtrinsics(
            rotation=np.array(extr.get("rotation", np.eye(3)), dtype=float),
            translation=np.array(extr.get("translation", np.zeros(3)), dtype=float))
    except (ValueError, TypeError) as exc:
        violations.append(f"camera.extrinsics: {exc}")

    lexicon = None
    lex_ref = grab("lexicon")
    if lex_ref is None:
        violations.append("lexicon: missing lexicon file reference")
    else:
        try:
            lexicon = parse_lexicon_file(base_dir / lex_ref)
        except ValidationError as exc:
            violations.extend(exc.violations)

    threshold = grab("matching.threshold", 0.6)
    if not isinstance(threshold, (int, float)) or not (0.0 <= threshold <= 1.0):
        violations.append(f"matching.threshold: must be a number in [0, 1], got {threshold!r}")

    motion_limits = None
    try:
        motion_limits = MotionLimits(
            vel_max=np.array(grab("motion_limits.vel_max", []), dtype=float),
            acc_max=np.array(grab("motion_limits.acc_max", []), dtype=float))
    except (ValueError, TypeError) as exc:
        violations.append(f"motion_limits: {exc}")

    noise = None
    noise_raw = grab_mapping("noise")
    try:
        noise = NoiseConfig(enabled=bool(noise_raw.get("enabled", False)),
                            joint_sigma=float(noise_raw.get("joint_sigma", 0.0)),
                            seed=int(noise_raw.get("seed", 0)))
    except (ValueError, TypeError) as exc:
        violations.append(f"noise: {exc}")

    dt = grab("dt", 0.01)
    if not isinstance(dt, (int, float)) or dt <= 0:
        violations.append(f"dt: must be > 0, got {dt!r}")

    svc = grab_mapping("service")
    service = ServiceSettings(
        port=int(svc.get("port", 8350)),
        snapshot_hz=float(svc.get("snapshot_hz", 20.0)),
        time_scale=float(svc.get("time_scale", 1.0)),
        history_tail=int(svc.get("history_tail", 50)))
    if service.port <= 0 or service.port > 65535:
        violations.append(f"service.port: must be in [1, 65535], got {service.port}")
    if service.snapshot_hz <= 0:
        violations.append(f"service.snapshot_hz: must be > 0, got {service.snapshot_hz}")

    scene = []
    for i, item in enumerate(grab("scene", []) or []):
        where = f"scene[{i}]"
        try:
            pos = [float(v) for v in item["position"]]
            scene.append(SceneItem(id=str(item.get("id", f"object_{i + 1}")),
                                   label=str(item["label"]),
                                   position=Point3(*pos, "robot")))
        except (KeyError, TypeError, ValueError) as exc:
            violations.append(f"{where}: {exc}")
    ids = [s.id for s in scene]
    if len(set(ids)) != len(ids):
        violations.append("scene: object ids must be unique")

    if violations:
        raise ValidationError(violations)
    return SystemConfig(arms=arms, intrinsics=intrinsics, extrinsics=extrinsics,
                        lexicon=lexicon, match_threshold=float(threshold),
                        motion_limits=motion_limits, noise=noise, dt=float(dt),
                        service=service, scene=scene, source=Path(base_path))


def load_config(path):
    """Load and fully validate a system config ('default' for the shipped one)."""
    data, resolved = load_config_data(path)
    return build_config(data, resolved)


def deep_merge(base, overrides):
    """Recursive dict merge used for scenario config overrides."""
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
