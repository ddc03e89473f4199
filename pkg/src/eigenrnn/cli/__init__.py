"""Experiment runner: configs, checkpoints and the ``eigenrnn`` command."""

from .checkpoint import dumps, load, loads, save
from .config import ConfigError, ExperimentConfig, load_config, parse_config, parse_seeds
from .main import build_datasets, build_model, main

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "build_datasets",
    "build_model",
    "dumps",
    "load",
    "load_config",
    "loads",
    "main",
    "parse_config",
    "parse_seeds",
    "save",
]
