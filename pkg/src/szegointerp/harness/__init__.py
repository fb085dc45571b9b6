"""Measure grammar, function catalog, verification suite, experiments and CLI."""

from .catalog import CATALOG, CatalogFunction, get_function
from .config import ConfigError, ExperimentConfig, WStrategy, parse_config, render_config
from .converge import CSV_HEADER, ConvergenceReport, ConvergenceRow, run_convergence
from .grammar import MeasureSpecError, parse_measure_spec
from .verify import VerifyReport, run_verify
