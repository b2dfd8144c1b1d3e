"""
Weak Tomography - Experiment Runners
Sweep and score experiments driven by an ExperimentConfig
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

from ..config import settings
from ..core.harness import (
    FidelitySeries,
    LabelledState,
    ProgressCallback,
    SweepRow,
    mean_over_states,
    score_rows_from_sweep,
    sweep,
    threshold_a,
)
from .base import BaseExperiment, ExperimentResult
from .schema import ExperimentConfig

logger = logging.getLogger(__name__)

# A weak mean must beat the baseline by this many combined standard errors
WIN_SE_MULTIPLE = 3.0


def winning_eps(series: FidelitySeries, a: float, k: float = WIN_SE_MULTIPLE) -> List[float]:
    """ε values at which the state-averaged weak fidelity beats the baseline by k standard errors"""
    means = series.mean_by_a.get(a, [])
    errors = series.se_by_a.get(a) or [0.0] * len(means)
    return [eps for eps, mean, se in zip(series.eps, means, errors)
            if mean - series.baseline_mean > k * math.hypot(se, series.baseline_se)]


def contiguous_runs(eps_grid: List[float], winners: List[float]) -> List[Tuple[float, float]]:
    """Group winning ε values into [first, last] intervals of consecutive grid points"""
    runs: List[Tuple[float, float]] = []
    chosen = set(winners)
    start = prev = None
    for eps in eps_grid:
        if eps in chosen:
            if start is None:
                start = eps
            prev = eps
        elif start is not None:
            runs.append((start, prev))
            start = None
    if start is not None:
        runs.append((start, prev))
    return runs


def min_std_over(series: FidelitySeries, a: float, eps_values: List[float]) -> Optional[float]:
    """Smallest state-averaged σ among the given ε values of one curve"""
    chosen = set(eps_values)
    stds = [std for eps, std in zip(series.eps, series.std_by_a.get(a, [])) if eps in chosen]
    return min(stds) if stds else None


def describe_wins(series: FidelitySeries) -> Dict[float, dict]:
    """Per discard value: winning ε intervals and whether σ there reaches the baseline's"""
    described = {}
    for a in sorted(series.mean_by_a):
        winners = winning_eps(series, a)
        min_std = min_std_over(series, a, winners)
        described[a] = {
            "winning_eps": winners,
            "intervals": [list(run) for run in contiguous_runs(series.eps, winners)],
            "min_std": min_std,
            "std_at_most_baseline": min_std is not None and min_std <= series.baseline_std,
        }
    return described


class SweepExperiment(BaseExperiment):
    """Evaluate the (state, N, a, ε) product against the projective baseline"""

    def __init__(self, config: ExperimentConfig, name: Optional[str] = None):
        config = config.resolved(settings)
        super().__init__(name or config.name, config)
        self.states: List[LabelledState] = []
        self.rows: List[SweepRow] = []

    def setup(self):
        self.states = self.config.states.resolve(self.config.seed)
        if not self.states:
            raise ValueError("No states to evaluate")

        eps_max = max(self.config.eps_values)
        if eps_max > settings.EPS_WARN_THRESHOLD:
            message = (f"eps up to {eps_max} exceeds {settings.EPS_WARN_THRESHOLD}: the e^(eps/2) "
                       f"corrections amplify variance and results are of little statistical use")
            logger.warning(message)
            self.warnings.append(message)

    def execute(self, progress: Optional[ProgressCallback] = None):
        cfg = self.config
        self.rows = sweep(
            self.states, cfg.pair, cfg.eps_values, cfg.a_values, cfg.n_list, cfg.runs, cfg.seed,
            engine=cfg.engine, estimator=cfg.estimator, workers=cfg.workers, progress=progress,
        )

    def cell_metadata(self) -> dict:
        cfg = self.config
        per_state = len(cfg.n_list) * (1 + len(cfg.eps_values) * len(cfg.a_values))
        return {"cells": len(self.states) * per_state}

    def build_result(self) -> ExperimentResult:
        return ExperimentResult(
            name=self.name,
            config=self.config,
            states=self.states,
            rows=self.rows,
            series=mean_over_states(self.rows),
        )


class ScoreExperiment(SweepExperiment):
    """Sweep, then count per N the states for which the weak scheme wins"""

    def build_result(self) -> ExperimentResult:
        result = super().build_result()
        for n in self.config.n_list:
            rows = [row for row in self.rows if row.n == n]
            result.scores[n] = score_rows_from_sweep(rows, per_eps=self.config.per_eps)
            best = result.scores[n] if not self.config.per_eps else score_rows_from_sweep(rows)
            result.thresholds[n] = threshold_a(best)
            logger.info(f"N={n}: threshold a = {result.thresholds[n]}")
        return result


def run_experiment(config: ExperimentConfig,
                   progress: Optional[ProgressCallback] = None) -> ExperimentResult:
    experiment_cls = ScoreExperiment if config.experiment == "score" else SweepExperiment
    return experiment_cls(config).run(progress)
