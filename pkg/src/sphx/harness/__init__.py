"""Verification harness: configuration, suite runner, golden files and the ``sphx`` CLI."""

from .config import ConfigError, RunConfig, load_config, make_config
from .golden import bless, emit_exponent_graph, golden_compare
from .suite import CheckResult, exit_status, run_suite

__all__ = [
    "CheckResult",
    "ConfigError",
    "RunConfig",
    "bless",
    "emit_exponent_graph",
    "exit_status",
    "golden_compare",
    "load_config",
    "make_config",
    "run_suite",
]
