"""Experiment drivers, scenario builders and CSV output."""

from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .runner import RunReport, StepError, build_scenario, run
from .scenarios import (
    Scenario,
    build_briowu,
    build_manufactured,
    build_soliton1d,
    build_soliton2d,
    l1_error,
    manufactured_params,
)

__all__ = [
    "ConfigError",
    "RunReport",
    "Scenario",
    "ScenarioConfig",
    "StepError",
    "build_briowu",
    "build_manufactured",
    "build_scenario",
    "build_soliton1d",
    "build_soliton2d",
    "l1_error",
    "load_config",
    "manufactured_params",
    "parse_config",
    "run",
]
