"""
CSV Report Generator
Sweep rows, score rows and plot-series files
"""
import csv
import math
import os
from dataclasses import astuple, fields
from typing import Dict, List, Optional, Sequence

from ..core.harness import FidelitySeries, ScoreRow, SweepRow
from ..exceptions import OutputError

SWEEP_COLUMNS = [f.name for f in fields(SweepRow)]
SCORE_COLUMNS = ["n", "a", "eps", "wins", "total", "fraction"]


def format_value(value) -> str:
    """Stable text form; floats use repr so files are byte-identical across runs"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise OutputError(f"Refusing to write non-finite value {value}")
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write(path: str, header: Sequence[str], rows: List[Sequence]) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


class CSVReportGenerator:
    """Writes result tables as CSV"""

    def write_sweep(self, rows: Sequence[SweepRow], path: str) -> str:
        return _write(path, SWEEP_COLUMNS, [astuple(row) for row in rows])

    def write_scores(self, scores: Dict[int, List[ScoreRow]], path: str) -> str:
        table = [
            (n, row.discard_a, row.eps, row.wins, row.total, row.fraction)
            for n in sorted(scores)
            for row in scores[n]
        ]
        return _write(path, SCORE_COLUMNS, table)

    def write_series(self, series: Dict[int, FidelitySeries], directory: str,
                     prefix: Optional[str] = None) -> List[str]:
        """
        Two files per ensemble size: mean fidelity and std of fidelity versus ε.

        Columns: eps, one column per discard value, then the projective baseline.
        """
        prefix = f"{prefix}_" if prefix else ""
        paths = []
        for n in sorted(series):
            s = series[n]
            a_values = sorted(s.mean_by_a)
            header = ["eps"] + [f"a={a!r}" for a in a_values] + ["projective"]
            for kind, by_a, baseline in (("mean", s.mean_by_a, s.baseline_mean),
                                         ("std", s.std_by_a, s.baseline_std)):
                table = [
                    [eps] + [by_a[a][i] for a in a_values] + [baseline]
                    for i, eps in enumerate(s.eps)
                ]
                path = os.path.join(directory, f"{prefix}fidelity_{kind}_N{n}.csv")
                paths.append(_write(path, header, table))
        return paths
