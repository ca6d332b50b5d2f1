"""Seeded experiment orchestration: config files in, CSV/SVG artifacts out."""

from hrl_lab.harness.config import ConfigError, ExperimentConfig, load_config, parse_config_text
from hrl_lab.harness.experiments import run_experiment
from hrl_lab.harness.runlog import RunLog, RunRow, read_runlog, write_runlog
from hrl_lab.harness.summary import convergence_episode, summarize
from hrl_lab.harness.svg import HistogramSpec, render_curves, render_histogram

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "HistogramSpec",
    "RunLog",
    "RunRow",
    "convergence_episode",
    "load_config",
    "parse_config_text",
    "read_runlog",
    "render_curves",
    "render_histogram",
    "run_experiment",
    "summarize",
    "write_runlog",
]
