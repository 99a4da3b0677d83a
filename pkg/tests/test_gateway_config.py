import numpy as np
import pytest

from dualarm.gateway import (
    ParseError,
    ValidationError,
    load_config,
    parse_arm_file,
    parse_lexicon_file,
)
from dualarm.gateway.config import data_dir, deep_merge


class TestDefaultConfig:
    def test_shipped_default_is_valid(self):
        config = load_config("default")
        assert set(config.arms) == {"left", "right"}
        assert config.intrinsics.f == 600.0
        assert len(config.lexicon) == 3
        assert config.noise.joint_sigma == pytest.approx(0.016)
        assert config.noise.seed == 13
        assert config.dt == pytest.approx(0.01)
        assert len(config.scene) == 3

    def test_arm_files_parse(self):
        left = parse_arm_file(data_dir() / "arms/left.arm", name="left")
        right = parse_arm_file(data_dir() / "arms/right.arm", name="right")
        assert left.mount.translation[1] == pytest.approx(0.11)
        assert right.mount.translation[1] == pytest.approx(-0.11)
        assert left.tool_offset == pytest.approx(0.08)
        assert left.rows[1].a == pytest.approx(0.35)

    def test_mounts_distinct(self):
        config = load_config("default")
        gap = np.linalg.norm(config.arms["left"].mount.translation
                             - config.arms["right"].mount.translation)
        assert gap == pytest.approx(0.22)


def write_config(tmp_path, yaml_text, lexicon=True, arms=True):
    base = data_dir()
    if arms:
        (tmp_path / "arms").mkdir(exist_ok=True)
        for side in ("left", "right"):
            (tmp_path / "arms" / f"{side}.arm").write_text(
                (base / "arms" / f"{side}.arm").read_text())
    if lexicon:
        (tmp_path / "lexicon.json").write_text((base / "lexicon.json").read_text())
    path = tmp_path / "config.yaml"
    path.write_text(yaml_text)
    return path


BASE_YAML = """\
version: 1
arms: {{left: arms/left.arm, right: arms/right.arm}}
camera:
  intrinsics: {{f: {f}, cx: 320.0, cy: 240.0, width: 640, height: 480}}
  extrinsics:
    rotation: [[1,0,0],[0,1,0],[0,0,1]]
    translation: [0.0, 0.0, 0.0]
lexicon: lexicon.json
motion_limits:
  vel_max: [1.73, 1.73, 1.73, 2.56, 2.56]
  acc_max: [0.1, 0.1, 0.1, 0.1, 0.1]
noise: {{enabled: false, joint_sigma: 0.016, seed: 13}}
dt: 0.01
"""


class TestValidation:
    def test_negative_focal_length_names_field(self, tmp_path):
        path = write_config(tmp_path, BASE_YAML.format(f=-600.0))
        with pytest.raises(ValidationError) as exc_info:
            load_config(path)
        assert any("camera.intrinsics" in v for v in exc_info.value.violations)

    def test_missing_lexicon_is_parse_error_with_path(self, tmp_path):
        path = write_config(tmp_path, BASE_YAML.format(f=600.0), lexicon=False)
        with pytest.raises(ParseError) as exc_info:
            load_config(path)
        assert "lexicon.json" in str(exc_info.value)

    def test_all_violations_listed_together(self, tmp_path):
        bad = BASE_YAML.format(f=-1.0).replace("dt: 0.01", "dt: -5") \
            .replace("vel_max: [1.73, 1.73, 1.73, 2.56, 2.56]",
                     "vel_max: [0, 0, 0, 0, 0]")
        path = write_config(tmp_path, bad)
        with pytest.raises(ValidationError) as exc_info:
            load_config(path)
        text = "\n".join(exc_info.value.violations)
        assert "camera.intrinsics" in text
        assert "dt" in text
        assert "motion_limits" in text

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_config(tmp_path / "nope.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = write_config(tmp_path, "version: [unclosed")
        with pytest.raises(ParseError):
            load_config(path)


class TestArmFileParsing:
    def test_wrong_dh_count(self, tmp_path):
        path = tmp_path / "bad.arm"
        path.write_text("version 1\ndh 0 0 0 0\ntool_offset 0.08\n"
                        + "limit -1 1\n" * 5 + "mount 0 0 0 0 0 0\n")
        with pytest.raises(ParseError) as exc_info:
            parse_arm_file(path)
        assert "5 'dh' rows" in str(exc_info.value)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "bad.arm"
        path.write_text("version 1\ndh 0 0 zero 0\n")
        with pytest.raises(ParseError) as exc_info:
            parse_arm_file(path)
        assert ":2:" in str(exc_info.value)

    def test_missing_version(self, tmp_path):
        path = tmp_path / "bad.arm"
        path.write_text("dh 0 0 0 0\n" * 5 + "tool_offset 0.08\n"
                        + "limit -1 1\n" * 5 + "mount 0 0 0 0 0 0\n")
        with pytest.raises(ParseError) as exc_info:
            parse_arm_file(path)
        assert "version" in str(exc_info.value)

    def test_unknown_directive(self, tmp_path):
        path = tmp_path / "bad.arm"
        path.write_text("version 1\nflurble 3\n")
        with pytest.raises(ParseError):
            parse_arm_file(path)

    def test_comments_and_blanks_ignored(self, tmp_path):
        src = (data_dir() / "arms/left.arm").read_text()
        path = tmp_path / "left.arm"
        path.write_text("# extra leading comment\n\n" + src)
        model = parse_arm_file(path)
        assert model.tool_offset == pytest.approx(0.08)


class TestLexiconFile:
    def test_shipped_lexicon(self):
        lex = parse_lexicon_file(data_dir() / "lexicon.json")
        assert [e.object_label for e in lex.entries] == ["rectangle", "cylinder", "box"]

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text("not json")
        with pytest.raises(ParseError):
            parse_lexicon_file(path)

    def test_unknown_action_rejected(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text('[{"template": "wave", "action": "wave", "object_label": "x"}]')
        with pytest.raises(ValidationError):
            parse_lexicon_file(path)

    def test_empty_list_rejected(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text("[]")
        with pytest.raises(ValidationError):
            parse_lexicon_file(path)


class TestDeepMerge:
    def test_nested_override(self):
        base = {"noise": {"enabled": False, "seed": 13}, "dt": 0.01}
        merged = deep_merge(base, {"noise": {"enabled": True}})
        assert merged["noise"] == {"enabled": True, "seed": 13}
        assert merged["dt"] == 0.01
        assert base["noise"]["enabled"] is False
