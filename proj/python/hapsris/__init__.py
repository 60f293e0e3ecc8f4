"""HAPS-RIS beyond-cell resource allocation: scenarios, allocation and sweeps."""

import json

from ._core import (
    Config,
    ConfigError,
    InfeasibleError,
    Scenario,
    SolverError,
    __version__,
    build_scenario,
    config_keys,
    gamma_min,
    load_config,
    min_units,
    oracle_stage2,
    paper_defaults,
    parse_config,
    scenario_from_json,
    solve_stage2,
    validate,
)
from . import _core

__all__ = [
    "Config",
    "ConfigError",
    "InfeasibleError",
    "Scenario",
    "SolverError",
    "__version__",
    "build_scenario",
    "config_keys",
    "gamma_min",
    "load_config",
    "min_units",
    "oracle_stage2",
    "paper_defaults",
    "parse_config",
    "run",
    "scenario_from_json",
    "solve_stage2",
    "sweep",
    "validate",
]


def run(scenario_or_config, methods=("algorithm1", "benchmark")):
    """Associate and allocate one scenario. Returns (summary dict, allocation CSV text)."""
    scenario = scenario_or_config
    if isinstance(scenario_or_config, Config):
        scenario = build_scenario(scenario_or_config)
    summary, table = _core.run_json(scenario, list(methods))
    return json.loads(summary), table


def sweep(preset, base=None, parameter=None, grid=None, seeds=100, seed_start=1,
          methods=("algorithm1", "benchmark"), workers=0):
    """Run a preset sweep. Returns (summary dict, table CSV text, per-seed records CSV text)."""
    summary, table, records = _core.sweep_json(
        preset, base, parameter, None if grid is None else list(grid), seeds, seed_start, list(methods), workers)
    return json.loads(summary), table, records
