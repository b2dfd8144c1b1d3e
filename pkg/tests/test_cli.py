"""
CLI tests
"""
import json

from click.testing import CliRunner

from src.cli import cli, main

SWEEP_CONFIG = {
    "name": "cli-sweep",
    "states": {"explicit": [{"id": "s", "x": 0.2, "y": -0.1, "z": 0.4}]},
    "eps_grid": [0.5],
    "a_grid": [0.0, 0.4],
    "n_list": [30],
    "runs": 4,
    "seed": 3,
}


def test_version_and_help():
    assert main(["--version"]) == 0
    assert main(["--help"]) == 0


def test_unknown_option_is_usage_error():
    assert main(["demo", "rho1", "--bogus"]) == 1
    assert main(["demo", "rho3"]) == 1


def test_demo_writes_results(tmp_path):
    out = tmp_path / "demo"
    code = main(["demo", "rho1", "--runs", "5", "--eps-grid", "0.5:1.0:0.5", "--a", "0", "--a", "0.5",
                 "--seed", "7", "--out", str(out)])
    assert code == 0
    assert (out / "results.csv").exists()
    assert (out / "series" / "fidelity_mean_N30.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 7
    assert summary["config"]["eps_grid"] == [0.5, 1.0]
    assert summary["rows"] == 1 + 4


def test_demo_rejects_bad_eps_grid():
    assert main(["demo", "rho2", "--eps-grid", "1.0:0.5:0.1"]) == 1
    assert main(["demo", "rho2", "--eps-grid", "nonsense"]) == 1


def test_sweep_with_overrides(write_config, tmp_path):
    path = write_config(SWEEP_CONFIG)
    out = tmp_path / "sweep"
    code = main(["sweep", "--config", str(path), "--engine", "trajectory", "--runs", "3",
                 "--html", "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["engine"] == "trajectory"
    assert summary["config"]["runs"] == 3
    assert (out / "report.html").exists()


def test_sweep_bad_config_exits_1(write_config, tmp_path):
    path = write_config({**SWEEP_CONFIG, "n_list": [31]})
    assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "x")]) == 1
    assert not (tmp_path / "x").exists()
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 1


def test_overflowing_coupling_exits_1(write_config, tmp_path):
    code = main(["demo", "rho1", "--runs", "3", "--eps-grid", "400:400:1", "--out", str(tmp_path / "d")])
    assert code == 1
    path = write_config({**SWEEP_CONFIG, "eps_grid": [800.0]})
    assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "s")]) == 1
    assert not (tmp_path / "d").exists()
    assert not (tmp_path / "s").exists()


def test_unwritable_output_exits_3(write_config, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    path = write_config(SWEEP_CONFIG)
    assert main(["sweep", "--config", str(path), "--out", str(blocker / "sub")]) == 3


def test_score_from_config(write_config, tmp_path):
    path = write_config(SWEEP_CONFIG)
    out = tmp_path / "score"
    assert main(["score", "--config", str(path), "--n", "60", "--per-eps", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["kind"] == "score"
    assert set(summary["scores"]) == {"60"}
    assert summary["scores"]["60"][0]["eps"] == 0.5
    assert (out / "score.csv").exists()


def test_disk_preset(tmp_path):
    out = tmp_path / "disk"
    assert main(["disk", "--states", "2", "--runs", "2", "--n", "30", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pair"] == "disk"
    assert summary["states"] == 2
    assert summary["rows"] == 2 * (1 + 20 * 5)


def test_validate_failure_exits_2(tmp_path):
    code = main(["validate", "--runs", "100", "--large-n", "1000", "--workers", "2",
                 "--inject-erf-error", "0.001", "--out", str(tmp_path)])
    assert code == 2
    report = json.loads((tmp_path / "validation.json").read_text())
    assert report["passed"] is False
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert any(name.startswith("completeness.stage_probs") for name in failed)


def test_report_command(write_config, tmp_path):
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", str(write_config(SWEEP_CONFIG)), "--out", str(out)]) == 0
    html_path = tmp_path / "rendered.html"
    assert main(["report", str(out / "summary.json"), "--output", str(html_path)]) == 0
    assert "cli-sweep" in html_path.read_text(encoding="utf-8")


def test_info_command():
    result = CliRunner().invoke(cli, ["info"])
    assert result.exit_code == 0
    assert "Suggested --workers" in result.output
