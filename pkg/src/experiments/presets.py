"""
Weak Tomography - Canned Experiments
Configs for the built-in demo, score and disk experiments
"""
from typing import Optional, Sequence

from ..core.estimator import EstimatorKind
from .schema import DEFAULT_A_GRID, ExperimentConfig, GridRange, OutputOptions

DEMO_N = 30
DEMO_RUNS = 10_000

# (states, runs) at desk scale and at full scale
SCORE_SCALE = {False: (400, 300), True: (2000, 1000)}
DISK_SCALE = {False: (200, 300), True: (500, 1000)}

DISK_N_LIST = [30, 60, 90]

# Built-in experiments use the kept-frequency estimator; library calls default to calibrated
PRESET_ESTIMATOR = EstimatorKind.KEPT


def default_eps_grid() -> GridRange:
    return GridRange(start=0.1, stop=2.0, step=0.1)


def demo_config(state_name: str, a_values: Sequence[float] = (0.0,),
                eps_grid: Optional[GridRange] = None, runs: int = DEMO_RUNS,
                n: int = DEMO_N) -> ExperimentConfig:
    """ε sweep of one built-in state against the projective thirds baseline"""
    return ExperimentConfig(
        name=f"demo-{state_name.lower()}",
        experiment="sweep",
        pair="full",
        states={"named": [state_name]},
        eps_grid=eps_grid or default_eps_grid(),
        a_grid=list(a_values),
        n_list=[n],
        runs=runs,
        estimator=PRESET_ESTIMATOR,
        outputs=OutputOptions(plot_series=True),
    )


def score_config(n_list: Sequence[int] = (30,), full_scale: bool = False,
                 states: Optional[int] = None, runs: Optional[int] = None,
                 per_eps: bool = False) -> ExperimentConfig:
    """Random Bloch-ball states, weak full scheme against projective thirds"""
    default_states, default_runs = SCORE_SCALE[full_scale]
    return ExperimentConfig(
        name="score-full" if full_scale else "score",
        experiment="score",
        pair="full",
        states={"ball": states or default_states},
        eps_grid=default_eps_grid(),
        a_grid=list(DEFAULT_A_GRID),
        n_list=list(n_list),
        runs=runs or default_runs,
        estimator=PRESET_ESTIMATOR,
        per_eps=per_eps,
    )


def disk_config(n_list: Sequence[int] = tuple(DISK_N_LIST), full_scale: bool = False,
                states: Optional[int] = None, runs: Optional[int] = None,
                per_eps: bool = False) -> ExperimentConfig:
    """Random y = 0 states, weak disk scheme against projective halves"""
    default_states, default_runs = DISK_SCALE[full_scale]
    return ExperimentConfig(
        name="disk-full" if full_scale else "disk",
        experiment="score",
        pair="disk",
        states={"disk": states or default_states},
        eps_grid=default_eps_grid(),
        a_grid=list(DEFAULT_A_GRID),
        n_list=list(n_list),
        runs=runs or default_runs,
        estimator=PRESET_ESTIMATOR,
        per_eps=per_eps,
    )
