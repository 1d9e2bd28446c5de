"""Coupled social-climate model with climate and social tipping elements."""

from .config import ModelParams, default_params, dump_config, load_config, validate
from .emissions import EmissionSeries, epsilon, ingest_historical, load_bundled
from .metrics import (MetricRecord, auc_difference, classify_tipping, compare, peak_temperature,
                      time_to_tipping)
from .simulation import Trajectory, rk4_step, run_pair, simulate

__all__ = [
    "EmissionSeries", "MetricRecord", "ModelParams", "Trajectory",
    "auc_difference", "classify_tipping", "compare", "default_params", "dump_config", "epsilon",
    "ingest_historical", "load_bundled", "load_config", "peak_temperature", "rk4_step",
    "run_pair", "simulate", "time_to_tipping", "validate",
]

__version__ = "0.1.0"
