"""Simulation core: states, pointer model, estimators, schemes and the Monte Carlo harness"""
from .bloch import RHO1, RHO2, BlochVector, EstimateVector, PauliAxis, fidelity, named_state
from .estimator import EstimatorKind, OutcomeCounts, calibration_D
from .harness import (
    LabelledState,
    RunStatistics,
    SchemePair,
    ScoreRow,
    SweepRow,
    monte_carlo,
    score,
    sweep,
)
from .protocol import EngineKind, SchemeConfig, SchemeKind, run_scheme

__all__ = [
    'RHO1', 'RHO2', 'BlochVector', 'EstimateVector', 'PauliAxis', 'fidelity', 'named_state',
    'EstimatorKind', 'OutcomeCounts', 'calibration_D',
    'LabelledState', 'RunStatistics', 'SchemePair', 'ScoreRow', 'SweepRow',
    'monte_carlo', 'score', 'sweep',
    'EngineKind', 'SchemeConfig', 'SchemeKind', 'run_scheme',
]
