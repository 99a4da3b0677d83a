"""Composition root: config loading, the command pipeline, scenario batch
execution and the network service."""

from .config import (
    ConfigError,
    ParseError,
    SceneItem,
    ServiceSettings,
    SystemConfig,
    ValidationError,
    default_config_path,
    load_config,
    parse_arm_file,
    parse_lexicon_file,
)
from .pipeline import CommandRecord, Runtime, detection_from_record
from .scenario import ScenarioRun, load_scenario, run_scenario
from .service import create_app

__all__ = [
    "CommandRecord",
    "ConfigError",
    "ParseError",
    "Runtime",
    "ScenarioRun",
    "SceneItem",
    "ServiceSettings",
    "SystemConfig",
    "ValidationError",
    "create_app",
    "default_config_path",
    "detection_from_record",
    "load_config",
    "load_scenario",
    "parse_arm_file",
    "parse_lexicon_file",
    "run_scenario",
]
