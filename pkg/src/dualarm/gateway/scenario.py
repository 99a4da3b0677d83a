"""Scenario files: scripted batches of voice-pipeline trials.

A scenario is YAML naming a base config, optional config overrides (for
example enabling noise with a fixed seed) and a list of trials.  Each trial
resets the world, places its objects, synthesizes or ingests detections and
submits one utterance through the full pipeline.  Output is a delimited
per-arm trial table (errors in cm plus the mean) and a JSON log; both are
byte-reproducible for a fixed seed.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..perception import Point3
from .config import (
    ParseError,
    SceneItem,
    build_config,
    deep_merge,
    load_config_data,
)
from .pipeline import Runtime

AUTO_DETECTIONS = "auto"


@dataclass
class TrialSpec:
    utterance: str
    objects: list = field(default_factory=list)
    detections: object = AUTO_DETECTIONS  # "auto" or explicit wire records
    at: float = None  # simulated time (s) to issue the command; None = now


@dataclass
class Scenario:
    config_ref: str
    overrides: dict
    trials: list
    report_stem: str
    source: Path


def load_scenario(path):
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: scenario must be a YAML mapping")
    if data.get("version") != 1:
        raise ParseError(f"{path}: unsupported or missing version (need 'version: 1')")

    raw_trials = data.get("trials")
    if not isinstance(raw_trials, list) or not raw_trials:
        raise ParseError(f"{path}: 'trials' must be a non-empty list")
    trials = []
    for i, raw in enumerate(raw_trials):
        where = f"{path}: trials[{i}]"
        if not isinstance(raw, dict) or "utterance" not in raw:
            raise ParseError(f"{where}: each trial needs an 'utterance'")
        objects = []
        for j, obj in enumerate(raw.get("objects", []) or []):
            try:
                position = Point3(*[float(v) for v in obj["position"]], "robot")
                objects.append(SceneItem(id=str(obj.get("id", f"t{i + 1}_{j + 1}")),
                                         label=str(obj["label"]), position=position))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{where}.objects[{j}]: {exc}") from exc
        detections = raw.get("detections", AUTO_DETECTIONS)
        if detections != AUTO_DETECTIONS and not isinstance(detections, list):
            raise ParseError(f"{where}: 'detections' must be 'auto' or a list")
        at = raw.get("at")
        if at is not None and (not isinstance(at, (int, float)) or at < 0):
            raise ParseError(f"{where}: 'at' must be a non-negative time in seconds")
        trials.append(TrialSpec(utterance=str(raw["utterance"]), objects=objects,
                                detections=detections,
                                at=float(at) if at is not None else None))

    return Scenario(
        config_ref=str(data.get("config", "default")),
        overrides=data.get("overrides", {}) or {},
        trials=trials,
        report_stem=str(data.get("report_stem", path.stem)),
        source=path,
    )


@dataclass
class TrialRow:
    index: int
    utterance: str
    arm: str = None
    error_cm: float = None
    failure: str = None


@dataclass
class ScenarioRun:
    rows: list
    records: list
    table_path: Path
    log_path: Path

    def arm_errors(self, side):
        return [r.error_cm for r in self.rows if r.arm == side and r.error_cm is not None]

    def mean_cm(self, side):
        errors = self.arm_errors(side)
        return sum(errors) / len(errors) if errors else float("nan")


def _load_scenario_config(scenario):
    if scenario.config_ref == "default":
        data, base = load_config_data("default")
    else:
        data, base = load_config_data(scenario.source.parent / scenario.config_ref)
    if scenario.overrides:
        data = deep_merge(data, scenario.overrides)
    config = build_config(data, base)
    config.scene = []  # scenarios control the scene per trial
    return config


def run_scenario(path, out_dir):
    """Execute a scenario deterministically and write its report files."""
    scenario = load_scenario(path)
    config = _load_scenario_config(scenario)
    runtime = Runtime(config, time_scale=0.0)  # batch mode: no pacing

    rows = []
    for i, trial in enumerate(scenario.trials, start=1):
        runtime.reset_for_trial()
        runtime.load_scene(trial.objects)
        if trial.detections != AUTO_DETECTIONS:
            runtime.ingest_detections(trial.detections)
        if trial.at is not None:
            runtime.advance_to(trial.at)
        record = runtime.handle_utterance(trial.utterance)
        row = TrialRow(index=i, utterance=trial.utterance)
        if record.report is not None:
            row.arm = record.report["arm"]
            row.error_cm = record.report["error_cm"]
        else:
            row.failure = record.error["type"]
        rows.append(row)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / f"{scenario.report_stem}_table.txt"
    log_path = out_dir / f"{scenario.report_stem}_log.json"
    run = ScenarioRun(rows=rows, records=[r.to_dict() for r in runtime.history],
                      table_path=table_path, log_path=log_path)
    table_path.write_text(format_trial_table(rows))
    log_path.write_text(format_log(scenario, config, run))
    return run


def format_trial_table(rows):
    """Delimited per-arm table: one row per arm, one column per trial plus
    the arithmetic mean; failed trials show their error type."""
    by_arm = {}
    for row in rows:
        side = row.arm if row.arm is not None else "unassigned"
        by_arm.setdefault(side, []).append(row)
    width = max((len(cells) for cells in by_arm.values()), default=0)
    header = ["arm"] + [str(i + 1) for i in range(width)] + ["mean"]
    lines = ["\t".join(header)]
    for side in sorted(by_arm):
        cells = []
        errors = []
        for row in by_arm[side]:
            if row.error_cm is not None:
                cells.append(f"{row.error_cm:.4f}")
                errors.append(row.error_cm)
            else:
                cells.append(row.failure or "fail")
        cells += [""] * (width - len(cells))
        mean = f"{sum(errors) / len(errors):.4f}" if errors else "nan"
        lines.append("\t".join([side] + cells + [mean]))
    return "\n".join(lines) + "\n"


def format_log(scenario, config, run):
    payload = {
        "scenario": scenario.source.name,
        "noise": {
            "enabled": config.noise.enabled,
            "joint_sigma": config.noise.joint_sigma,
            "seed": config.noise.seed,
        },
        "trials": [
            {
                "index": row.index,
                "utterance": row.utterance,
                "arm": row.arm,
                "error_cm": row.error_cm,
                "failure": row.failure,
            }
            for row in run.rows
        ],
        "means_cm": {
            side: run.mean_cm(side)
            for side in ("left", "right")
            if run.arm_errors(side)
        },
        "records": run.records,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
