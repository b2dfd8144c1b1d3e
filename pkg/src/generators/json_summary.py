"""
JSON Summary Generator
Deterministic, schema-versioned summary of an experiment
"""
import json
import math
import os
from typing import Any, Dict

from .. import __version__
from ..exceptions import OutputError
from ..experiments.base import ExperimentResult
from ..experiments.runners import WIN_SE_MULTIPLE, describe_wins
from .csv_report import SCORE_COLUMNS, SWEEP_COLUMNS

SCHEMA_VERSION = 1
TOOL_NAME = "weak-tomography"


def check_finite(value: Any, where: str = "summary") -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise OutputError(f"Non-finite value at {where}: {value}")
    if isinstance(value, dict):
        for key, item in value.items():
            check_finite(item, f"{where}.{key}")
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            check_finite(item, f"{where}[{i}]")


def build_summary(result: ExperimentResult) -> Dict:
    """Summary dict; contains no timing or host information"""
    cfg = result.config
    summary = {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL_NAME,
        "version": __version__,
        "experiment": result.name,
        "kind": cfg.experiment,
        "pair": cfg.pair.value,
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "config": cfg.canonical(),
        "engine": cfg.engine.value,
        "estimator": cfg.estimator.value,
        "std_convention": "population",
        "win_se_multiple": WIN_SE_MULTIPLE,
        "columns": {"results": SWEEP_COLUMNS, "score": SCORE_COLUMNS},
        "states": len(result.states),
        "rows": len(result.rows),
        "degenerate_runs": result.degenerate_runs,
        "warnings": result.warnings,
        "series": {
            str(n): {
                "eps": s.eps,
                "mean_by_a": {repr(a): v for a, v in sorted(s.mean_by_a.items())},
                "std_by_a": {repr(a): v for a, v in sorted(s.std_by_a.items())},
                "se_by_a": {repr(a): v for a, v in sorted(s.se_by_a.items())},
                "baseline_mean": s.baseline_mean,
                "baseline_std": s.baseline_std,
                "baseline_se": s.baseline_se,
                "wins": {repr(a): w for a, w in describe_wins(s).items()},
            }
            for n, s in sorted(result.series.items())
        },
    }
    if result.scores:
        summary["scores"] = {
            str(n): [
                {"a": r.discard_a, "eps": r.eps, "wins": r.wins, "total": r.total, "fraction": r.fraction}
                for r in rows
            ]
            for n, rows in sorted(result.scores.items())
        }
        summary["thresholds"] = {str(n): t for n, t in sorted(result.thresholds.items())}
    return summary


class JSONReportGenerator:
    """Writes summaries with sorted keys so output is byte-stable"""

    def generate(self, summary: Dict, output_path: str) -> str:
        check_finite(summary)
        directory = os.path.dirname(output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        return output_path
