"""Scenarios, experiment configuration, replication runner and studies."""
from .config import ConfigError, ExperimentConfig, PolicySpec, dump_config, load_config, parse_config
from .io import csv_text, read_results, serialize_results, sidecar_path
from .runner import RegretTrace, logging_grid, replication_streams, run_experiment, run_replication
from .scenarios import SCENARIOS, UnknownScenarioError, builtin_scenario
from .studies import SampleComplexityResult, ci_width_table, sample_complexity_experiment

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "PolicySpec",
    "RegretTrace",
    "SCENARIOS",
    "SampleComplexityResult",
    "UnknownScenarioError",
    "builtin_scenario",
    "ci_width_table",
    "csv_text",
    "dump_config",
    "load_config",
    "logging_grid",
    "parse_config",
    "read_results",
    "replication_streams",
    "run_experiment",
    "run_replication",
    "sample_complexity_experiment",
    "serialize_results",
    "sidecar_path",
]
