"""Experiments module"""
from .base import BaseExperiment, ExperimentResult
from .loader import apply_overrides, load_config, parse_config
from .presets import demo_config, disk_config, score_config
from .runners import ScoreExperiment, SweepExperiment, run_experiment
from .schema import ExperimentConfig, GridRange

__all__ = [
    'BaseExperiment', 'ExperimentResult',
    'apply_overrides', 'load_config', 'parse_config',
    'demo_config', 'disk_config', 'score_config',
    'ScoreExperiment', 'SweepExperiment', 'run_experiment',
    'ExperimentConfig', 'GridRange',
]
