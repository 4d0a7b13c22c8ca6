"""Reproducible experiment harness: configs, scenario registry, reports."""

from .config import (
    CONFIG_SCHEMA,
    SCENARIO_NAMES,
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_config,
)
from .report import Report, ReportRow, emit_report, render_csv, render_jsonl
from .scenarios import run_scenario
