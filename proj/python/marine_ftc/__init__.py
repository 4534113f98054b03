"""Thruster fault detection, isolation and reconfiguration simulator."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

_bundled = Path(__file__).with_name("presets")
if _bundled.is_dir() and "FTC_PRESET_DIR" not in os.environ:
    os.environ["FTC_PRESET_DIR"] = str(_bundled)

import numpy as np

from ._core import (
    DivergenceError,
    Scenario,
    achieved_wrench,
    allocate,
    csv_columns,
    list_presets,
    load_scenario,
    predict_sign_pattern,
    preset_dir,
    run_to_directory,
    scenario_from_json,
    validate,
)
from ._core import _run

__all__ = [
    "DivergenceError",
    "RunResult",
    "Scenario",
    "achieved_wrench",
    "allocate",
    "csv_columns",
    "list_presets",
    "load_scenario",
    "predict_sign_pattern",
    "preset_dir",
    "run",
    "run_to_directory",
    "scenario_from_json",
    "validate",
]


@dataclass
class RunResult:
    summary: dict
    columns: list[str]
    data: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def run(scenario: Scenario | str, overrides: list[str] | None = None,
        decimation: int | None = None) -> RunResult:
    """Run a scenario (object, file path or preset name) in memory."""
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(str(scenario), overrides or [])
    elif overrides:
        raise ValueError("overrides apply only when loading by name or path")
    summary, data = _run(scenario, decimation)
    return RunResult(json.loads(summary), list(csv_columns()), data)
