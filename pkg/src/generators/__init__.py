"""Generators module"""
import os
from dataclasses import astuple
from typing import List

from ..experiments.base import ExperimentResult
from .csv_report import CSVReportGenerator
from .html_report import HTMLReportGenerator
from .json_summary import JSONReportGenerator, build_summary, check_finite


def write_results(result: ExperimentResult, out_dir: str) -> List[str]:
    """Write every output the experiment's config asks for; returns the written paths"""
    outputs = result.config.outputs
    summary = build_summary(result)

    # Nothing is written unless every number is finite
    check_finite(summary)
    check_finite([astuple(row) for row in result.rows], "rows")

    csv_generator = CSVReportGenerator()
    paths = [csv_generator.write_sweep(result.rows, os.path.join(out_dir, outputs.csv))]

    if result.scores:
        paths.append(csv_generator.write_scores(result.scores, os.path.join(out_dir, outputs.score_csv)))
    if outputs.plot_series:
        paths.extend(csv_generator.write_series(result.series, os.path.join(out_dir, "series")))

    paths.append(JSONReportGenerator().generate(summary, os.path.join(out_dir, outputs.summary)))
    if outputs.html:
        paths.append(HTMLReportGenerator().generate(summary, os.path.join(out_dir, "report.html")))
    return paths


__all__ = ['CSVReportGenerator', 'HTMLReportGenerator', 'JSONReportGenerator',
           'build_summary', 'write_results']
