"""
Experiment config and runner tests
"""
import pytest

from src.config import settings
from src.core.estimator import EstimatorKind
from src.core.harness import FidelitySeries, SchemePair
from src.core.protocol import EngineKind
from src.exceptions import ConfigError
from src.experiments import (
    ExperimentConfig,
    GridRange,
    apply_overrides,
    demo_config,
    disk_config,
    load_config,
    parse_config,
    run_experiment,
    score_config,
)
from src.experiments.loader import locate
from src.experiments.runners import contiguous_runs, describe_wins, min_std_over, winning_eps
from src.generators import build_summary

SMALL_SWEEP = {
    "name": "small",
    "states": {"named": ["rho1", "rho2"]},
    "eps_grid": [0.3, 0.6],
    "a_grid": [0.0, 0.4],
    "n_list": [30],
    "runs": 5,
    "seed": 11,
}


# -------------------------------------------
# Grids and states
# -------------------------------------------

def test_grid_range_is_inclusive_and_rounded():
    assert GridRange(start=0.1, stop=0.5, step=0.1).values() == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert len(GridRange(start=0.1, stop=2.0, step=0.1).values()) == 20
    assert GridRange(start=1.0, stop=1.0, step=0.5).values() == [1.0]


def test_grid_range_rejects_reversed_bounds():
    with pytest.raises(ValueError, match="below start"):
        GridRange(start=1.0, stop=0.5, step=0.1)


def test_default_grids():
    config = ExperimentConfig(states={"ball": 3})
    assert config.eps_values[0] == 0.1 and config.eps_values[-1] == 2.0
    assert config.a_values == [0.0, 0.2, 0.4, 0.6, 0.8]
    assert config.n_list == [30]


@pytest.mark.parametrize("states, message", [
    ({}, "exactly one"),
    ({"ball": 3, "disk": 2}, "exactly one"),
    ({"explicit": []}, "empty"),
    ({"named": ["rho9"]}, "Unknown state"),
    ({"explicit": [{"x": 0.9, "y": 0.9, "z": 0.0}]}, "unit ball"),
])
def test_state_source_errors(states, message):
    with pytest.raises(ValueError, match=message):
        ExperimentConfig(states=states)


def test_explicit_states_resolve_with_ids():
    config = ExperimentConfig(states={"explicit": [{"id": "a", "x": 0.1, "y": 0.0, "z": 0.2},
                                                   {"x": 0.0, "y": 0.0, "z": 0.0}]})
    resolved = config.states.resolve(seed=1)
    assert [s.state_id for s in resolved] == ["a", "state-00001"]
    assert resolved[0].state.z == 0.2


def test_disk_pair_rejects_states_with_y():
    with pytest.raises(ValueError, match="y = 0"):
        ExperimentConfig(pair="disk", states={"named": ["rho1"]})
    ExperimentConfig(pair="disk", states={"disk": 5}, n_list=[30, 60])


def test_cells_are_checked_up_front():
    with pytest.raises(ValueError, match="divisible by 3"):
        ExperimentConfig(states={"ball": 2}, n_list=[31])
    with pytest.raises(ValueError, match="even"):
        ExperimentConfig(pair="disk", states={"disk": 2}, n_list=[45])


@pytest.mark.parametrize("field, value, message", [
    ("eps_grid", [0.0, 0.5], "eps_grid"),
    ("eps_grid", [0.5, 0.5], "duplicate"),
    ("a_grid", [-0.1], "a_grid"),
    ("n_list", [], "n_list"),
    ("runs", 0, "runs"),
])
def test_field_errors(field, value, message):
    with pytest.raises(ValueError, match=message):
        ExperimentConfig(**{**SMALL_SWEEP, field: value})


def test_resolved_fills_from_settings():
    from src.config import get_settings

    config = ExperimentConfig(**SMALL_SWEEP).resolved(get_settings())
    assert config.seed == 11
    assert isinstance(config.engine, EngineKind)
    assert isinstance(config.estimator, EstimatorKind)
    assert config.workers >= 1


def test_config_hash_ignores_workers_and_outputs():
    base = ExperimentConfig(**SMALL_SWEEP)
    other = ExperimentConfig(**SMALL_SWEEP, workers=4, outputs={"csv": "elsewhere.csv"})
    assert base.config_hash() == other.config_hash()
    assert base.config_hash() != ExperimentConfig(**{**SMALL_SWEEP, "seed": 12}).config_hash()


def test_config_hash_sees_grid_values_not_form():
    listed = ExperimentConfig(**{**SMALL_SWEEP, "eps_grid": [0.1, 0.2, 0.3]})
    ranged = ExperimentConfig(**{**SMALL_SWEEP, "eps_grid": {"start": 0.1, "stop": 0.3, "step": 0.1}})
    assert listed.config_hash() == ranged.config_hash()


# -------------------------------------------
# Loader
# -------------------------------------------

def test_load_config_file(write_config):
    config = load_config(write_config(SMALL_SWEEP))
    assert config.name == "small"
    assert config.eps_values == [0.3, 0.6]


def test_loader_reports_json_position(write_config):
    path = write_config('{\n  "name": "x",\n  "runs": ,\n}')
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    assert exc.value.diagnostics[0].startswith(f"{path}:3:")


def test_loader_reports_field_line(write_config):
    text = '{\n  "states": {"ball": 4},\n  "runs": 5,\n  "bogus": 1\n}'
    with pytest.raises(ConfigError) as exc:
        load_config(write_config(text))
    [diagnostic] = exc.value.diagnostics
    assert ":4: bogus:" in diagnostic


def test_loader_rejects_non_object(write_config):
    with pytest.raises(ConfigError, match="invalid config"):
        load_config(write_config("[1, 2]"))


def test_loader_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read config"):
        load_config(tmp_path / "missing.json")


def test_loader_applies_overrides_before_validation():
    text = '{"states": {"ball": 2}, "n_list": [31]}'
    with pytest.raises(ConfigError):
        parse_config(text)
    config = parse_config(text, overrides={"n_list": [30], "runs": None})
    assert config.n_list == [30]
    assert config.runs == 1000


def test_locate_uses_field_prefix_for_model_errors():
    text = '{\n  "states": {"ball": 1},\n  "n_list": [31]\n}'
    assert locate(text, (), "Value error, n_list: bad") == 3
    assert locate(text, ("states", "ball"), "") == 2


def test_apply_overrides_revalidates():
    config = ExperimentConfig(**SMALL_SWEEP)
    changed = apply_overrides(config, {"runs": 7, "engine": "trajectory", "seed": None})
    assert changed.runs == 7
    assert changed.engine is EngineKind.TRAJECTORY
    assert changed.seed == 11
    with pytest.raises(ConfigError, match="Invalid option values"):
        apply_overrides(config, {"runs": 0})


# -------------------------------------------
# Presets
# -------------------------------------------

def test_presets():
    demo = demo_config("RHO1", a_values=[0.0, 0.5], runs=10)
    assert demo.name == "demo-rho1"
    assert demo.states.named == ["RHO1"]
    assert demo.a_values == [0.0, 0.5]

    desk = score_config()
    assert (desk.states.ball, desk.runs) == (400, 300)
    full = score_config(n_list=[30, 60], full_scale=True)
    assert (full.states.ball, full.runs, full.n_list) == (2000, 1000, [30, 60])

    disk = disk_config(states=10, runs=20)
    assert disk.pair is SchemePair.DISK
    assert (disk.states.disk, disk.runs, disk.n_list) == (10, 20, [30, 60, 90])
    # built-in experiments use the kept estimator; bare configs fall back to settings
    assert {demo.estimator, desk.estimator, full.estimator, disk.estimator} == {EstimatorKind.KEPT}
    assert ExperimentConfig(**SMALL_SWEEP).estimator is None
    assert ExperimentConfig(**SMALL_SWEEP).resolved(settings).estimator is EstimatorKind.CALIBRATED


def test_demo_summary_records_kept_estimator():
    config = demo_config("rho1", eps_grid=GridRange(start=0.3, stop=0.4, step=0.1), runs=5)
    summary = build_summary(run_experiment(config))
    assert summary["estimator"] == "kept"
    assert summary["config"]["estimator"] == "kept"


# -------------------------------------------
# Runners
# -------------------------------------------

def test_winning_eps_needs_three_standard_errors():
    series = FidelitySeries(n=30, eps=[0.1, 0.2, 0.3, 0.4, 0.5],
                            mean_by_a={0.0: [0.6, 0.8, 0.9, 0.7, 0.85]},
                            std_by_a={0.0: [0.2, 0.15, 0.1, 0.3, 0.25]},
                            se_by_a={0.0: [0.01, 0.01, 0.01, 0.01, 0.04]},
                            baseline_mean=0.75, baseline_std=0.2, baseline_se=0.01)
    # 0.85 beats 0.75 by 0.1, short of 3 * hypot(0.04, 0.01)
    assert winning_eps(series, 0.0) == [0.2, 0.3]
    assert winning_eps(series, 0.0, k=2.0) == [0.2, 0.3, 0.5]
    assert describe_wins(series) == {0.0: {
        "winning_eps": [0.2, 0.3],
        "intervals": [[0.2, 0.3]],
        "min_std": 0.1,
        "std_at_most_baseline": True,
    }}


def test_describe_wins_flags_noisy_wins():
    series = FidelitySeries(n=30, eps=[0.3, 0.6], mean_by_a={0.4: [0.9, 0.5]},
                            std_by_a={0.4: [0.35, 0.1]}, se_by_a={0.4: [0.01, 0.01]},
                            baseline_mean=0.75, baseline_std=0.3, baseline_se=0.01)
    assert describe_wins(series)[0.4]["min_std"] == 0.35
    assert describe_wins(series)[0.4]["std_at_most_baseline"] is False
    assert min_std_over(series, 0.4, []) is None


def test_winning_eps_and_runs():
    series = FidelitySeries(n=30, eps=[0.1, 0.2, 0.3, 0.4, 0.5],
                            mean_by_a={0.0: [0.6, 0.8, 0.9, 0.7, 0.85]}, baseline_mean=0.75)
    winners = winning_eps(series, 0.0)
    assert winners == [0.2, 0.3, 0.5]
    assert contiguous_runs(series.eps, winners) == [(0.2, 0.3), (0.5, 0.5)]
    assert winning_eps(series, 0.4) == []


def test_run_sweep_experiment():
    result = run_experiment(ExperimentConfig(**SMALL_SWEEP))
    assert len(result.rows) == 2 * (1 + 4)
    assert [s.state_id for s in result.states] == ["rho1", "rho2"]
    assert set(result.series) == {30}
    assert result.scores == {}
    assert result.warnings == []
    assert result.timing_summary["execute"]["count"] == 1
    assert "ms_per_cell" in result.timing_summary["execute"]


def test_run_score_experiment_and_warning():
    config = ExperimentConfig(**{**SMALL_SWEEP, "experiment": "score", "eps_grid": [0.5, 2.5],
                                 "n_list": [30, 60]})
    result = run_experiment(config)
    assert set(result.scores) == {30, 60}
    assert all(row.total == 2 for rows in result.scores.values() for row in rows)
    assert set(result.thresholds) == {30, 60}
    assert len(result.warnings) == 1 and "2.5" in result.warnings[0]


def test_experiment_is_reproducible():
    first = run_experiment(ExperimentConfig(**SMALL_SWEEP, engine="trajectory"))
    second = run_experiment(ExperimentConfig(**SMALL_SWEEP, engine="trajectory"))
    assert first.rows == second.rows


# -------------------------------------------
# Desk-scale reproduction (kept estimator)
# -------------------------------------------

TREND_GRID = {"eps_grid": [0.1, 0.3, 0.6, 1.0], "a_grid": [0.0, 0.8], "runs": 100, "seed": 17,
              "experiment": "score", "estimator": "kept"}


def _best_fraction(rows) -> float:
    return max(row.fraction for row in rows)


@pytest.mark.slow
def test_rho1_demo_beats_projective_with_smaller_spread():
    series = run_experiment(demo_config("rho1", runs=4000)).series[30]
    wins = describe_wins(series)[0.0]
    assert wins["intervals"]
    assert 0.4 in wins["winning_eps"]
    assert wins["std_at_most_baseline"]


@pytest.mark.slow
def test_rho2_demo_without_discard_does_not_win():
    series = run_experiment(demo_config("rho2", runs=2000)).series[30]
    assert describe_wins(series)[0.0]["winning_eps"] == []


@pytest.mark.slow
def test_ball_win_fraction_falls_with_ensemble_size():
    config = ExperimentConfig(name="ball-trend", states={"ball": 60}, n_list=[30, 60, 90], **TREND_GRID)
    scores = run_experiment(config).scores
    assert _best_fraction(scores[60]) < 0.5
    assert _best_fraction(scores[90]) < 0.5
    assert _best_fraction(scores[90]) < _best_fraction(scores[30])


@pytest.mark.slow
def test_disk_win_fraction_falls_with_ensemble_size():
    # the same disk states are scored at every N
    config = ExperimentConfig(name="disk-trend", pair="disk", states={"disk": 60}, n_list=[30, 90],
                              **TREND_GRID)
    scores = run_experiment(config).scores
    assert _best_fraction(scores[90]) < _best_fraction(scores[30])
    assert _best_fraction(scores[90]) < 0.5
