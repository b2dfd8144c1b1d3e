"""
Report generator tests
"""
import csv
import dataclasses
import json

import pytest

from src.core.harness import ScoreRow
from src.exceptions import OutputError
from src.experiments import ExperimentConfig, run_experiment
from src.generators import CSVReportGenerator, build_summary, write_results
from src.generators.csv_report import SWEEP_COLUMNS, format_value
from src.generators.json_summary import SCHEMA_VERSION, check_finite

CONFIG = {
    "name": "gen",
    "experiment": "score",
    "states": {"ball": 3},
    "eps_grid": [0.4, 0.8],
    "a_grid": [0.0, 0.3],
    "n_list": [30],
    "runs": 6,
    "seed": 99,
    "outputs": {"html": True},
}


@pytest.fixture(scope="module")
def result():
    return run_experiment(ExperimentConfig(**CONFIG))


def test_format_value():
    assert format_value(0.1) == "0.1"
    assert format_value(3) == "3"
    assert format_value(None) == ""
    assert format_value(True) == "true"
    with pytest.raises(OutputError, match="non-finite"):
        format_value(float("inf"))


def test_check_finite_names_location():
    check_finite({"a": [1.0, 2]})
    with pytest.raises(OutputError, match=r"summary\.a\[1\]"):
        check_finite({"a": [1.0, float("nan")]})


def test_write_results_files(result, tmp_path):
    paths = write_results(result, str(tmp_path))
    names = sorted(p.replace(str(tmp_path) + "/", "") for p in paths)
    assert names == sorted([
        "results.csv", "score.csv", "summary.json", "report.html",
        "series/fidelity_mean_N30.csv", "series/fidelity_std_N30.csv",
    ])

    with open(tmp_path / "results.csv", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == SWEEP_COLUMNS
    assert len(rows) == 1 + 3 * (1 + 4)

    with open(tmp_path / "series" / "fidelity_mean_N30.csv", newline="") as f:
        series = list(csv.reader(f))
    assert series[0] == ["eps", "a=0.0", "a=0.3", "projective"]
    assert [r[0] for r in series[1:]] == ["0.4", "0.8"]

    with open(tmp_path / "score.csv", newline="") as f:
        score = list(csv.reader(f))
    assert score[0] == ["n", "a", "eps", "wins", "total", "fraction"]
    assert [r[1] for r in score[1:]] == ["0.0", "0.3"]
    assert all(r[2] == "" and r[4] == "3" for r in score[1:])


def test_summary_contents(result):
    summary = build_summary(result)
    assert summary["schema_version"] == SCHEMA_VERSION
    assert summary["kind"] == "score"
    assert summary["seed"] == 99
    assert summary["std_convention"] == "population"
    assert summary["rows"] == 15
    assert "workers" not in summary["config"]
    assert set(summary["scores"]) == {"30"}
    assert set(summary["thresholds"]) == {"30"}
    assert "duration" not in json.dumps(summary)
    series = summary["series"]["30"]
    assert summary["win_se_multiple"] == 3.0
    assert set(series["se_by_a"]) == set(series["wins"]) == {"0.0", "0.3"}
    assert series["baseline_se"] > 0
    for wins in series["wins"].values():
        assert set(wins) == {"winning_eps", "intervals", "min_std", "std_at_most_baseline"}
        assert wins["std_at_most_baseline"] == (wins["min_std"] is not None
                                                and wins["min_std"] <= series["baseline_std"])


def test_outputs_are_byte_identical(result, tmp_path):
    again = run_experiment(ExperimentConfig(**{**CONFIG, "workers": 2}))
    write_results(result, str(tmp_path / "one"))
    write_results(again, str(tmp_path / "two"))
    for name in ("results.csv", "score.csv", "summary.json", "series/fidelity_std_N30.csv"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_non_finite_rows_write_nothing(result, tmp_path):
    broken = dataclasses.replace(result, rows=[
        dataclasses.replace(result.rows[1], mean_fidelity=float("-inf")), *result.rows[2:],
    ])
    with pytest.raises(OutputError):
        write_results(broken, str(tmp_path / "out"))
    assert not (tmp_path / "out").exists()


def test_score_csv_per_eps(tmp_path):
    path = CSVReportGenerator().write_scores(
        {60: [ScoreRow(0.2, 1, 4, 0.5)], 30: [ScoreRow(0.0, 3, 4, 0.5)]}, str(tmp_path / "s.csv"))
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[1] == ["30", "0.0", "0.5", "3", "4", "0.75"]
    assert rows[2][0] == "60"


def test_html_report_renders(result, tmp_path):
    write_results(result, str(tmp_path))
    html = (tmp_path / "report.html").read_text(encoding="utf-8")
    assert "Weak Tomography Report" in html
    assert "threshold a" in html
