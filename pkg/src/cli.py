"""
Weak Tomography CLI
Canned experiments, config-driven sweeps and the property suite
"""
import json
import logging
import os
import sys
from contextlib import nullcontext
from typing import Callable, List, Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .config import settings
from .core.estimator import EstimatorKind
from .core.pointer import inject_erf_error
from .core.protocol import EngineKind
from .core.validation import run_validation
from .exceptions import ConfigError, OutputError, TomographyError, ValidationFailed
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    GridRange,
    apply_overrides,
    demo_config,
    disk_config,
    load_config,
    run_experiment,
    score_config,
)
from .experiments.runners import WIN_SE_MULTIPLE, describe_wins
from .generators import HTMLReportGenerator, JSONReportGenerator, write_results

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)


# -------------------------------------------
# Shared options
# -------------------------------------------

def _common_options(func: Callable) -> Callable:
    options = [
        click.option('--out', '-o', 'out_dir', default=None, type=click.Path(file_okay=False),
                     help='Output directory (default: RESULTS_DIR/<experiment>)'),
        click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=None, help='Master seed (u64)'),
        click.option('--engine', type=click.Choice([e.value for e in EngineKind]), default=None,
                     help='Simulation engine'),
        click.option('--estimator', type=click.Choice([e.value for e in EstimatorKind]), default=None,
                     help='Weak-stage estimator'),
        click.option('--workers', '-w', type=click.IntRange(min=1), default=None, help='Worker processes'),
        click.option('--runs', '-r', type=click.IntRange(min=1), default=None, help='Runs per cell'),
        click.option('--html', is_flag=True, default=False, help='Also render an HTML report'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _parse_eps_grid(ctx, param, value: Optional[str]) -> Optional[GridRange]:
    if value is None:
        return None
    try:
        start, stop, step = (float(part) for part in value.split(':'))
        return GridRange(start=start, stop=stop, step=step)
    except (ValueError, ValidationError):
        raise click.BadParameter("expected START:STOP:STEP with 0 < STEP and START <= STOP") from None


def _overrides(seed, engine, estimator, workers, runs, html) -> dict:
    overrides = {"seed": seed, "engine": engine, "estimator": estimator, "workers": workers, "runs": runs}
    if html:
        overrides["outputs"] = {"html": True}
    return overrides


def _with_overrides(build: Callable[[], ExperimentConfig], overrides: dict) -> ExperimentConfig:
    try:
        config = build()
    except ValidationError as e:
        raise ConfigError("Invalid option values",
                          [f"{'.'.join(str(k) for k in err['loc']) or 'config'}: {err['msg']}"
                           for err in e.errors()]) from None
    if "outputs" in overrides:
        overrides = dict(overrides, outputs=config.outputs.model_copy(update=overrides["outputs"]).model_dump())
    return apply_overrides(config, overrides)


# -------------------------------------------
# Running and display
# -------------------------------------------

def _run_and_save(config: ExperimentConfig, out_dir: Optional[str]) -> ExperimentResult:
    resolved = config.resolved(settings)
    console.print(Panel.fit(
        f"[bold blue]{resolved.name}[/bold blue]\n"
        f"Pair: {resolved.pair.value} | Engine: {resolved.engine.value} | "
        f"Estimator: {resolved.estimator.value}\n"
        f"N: {resolved.n_list} | eps: {len(resolved.eps_values)} values | "
        f"a: {resolved.a_values} | runs: {resolved.runs} | seed: {resolved.seed}",
        title="Starting Experiment"
    ))

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console
    ) as progress:
        task = progress.add_task("Evaluating cells...", total=None)
        result = run_experiment(
            config,
            progress=lambda done, total: progress.update(task, completed=done, total=total),
        )

    for warning in result.warnings:
        console.print(f"[yellow]Warning:[/yellow] {warning}")

    display_results(result)

    out_dir = out_dir or os.path.join(settings.RESULTS_DIR, result.name)
    paths = write_results(result, out_dir)
    for path in paths:
        console.print(f"[green]✓[/green] Saved {path}")
    return result


def display_results(result: ExperimentResult):
    """Print series, scores and timing"""
    for n, series in sorted(result.series.items()):
        table = Table(title=f"Mean fidelity over {len(result.states)} state(s), N={n}")
        table.add_column("a", style="cyan")
        table.add_column("best mean", style="green")
        table.add_column("at eps")
        table.add_column("projective")
        table.add_column(f"weak wins (> {WIN_SE_MULTIPLE:g} SE) for eps in")
        table.add_column("min std there")
        table.add_column("projective std")
        for a, wins in describe_wins(series).items():
            means = series.mean_by_a[a]
            best = max(range(len(means)), key=lambda i: means[i])
            intervals = wins["intervals"]
            min_std = wins["min_std"]
            if min_std is None:
                std_cell = "-"
            else:
                marker = "green" if wins["std_at_most_baseline"] else "red"
                std_cell = f"[{marker}]{min_std:.5f}[/{marker}]"
            table.add_row(
                f"{a:g}",
                f"{means[best]:.5f}",
                f"{series.eps[best]:g}",
                f"{series.baseline_mean:.5f}",
                ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in intervals) or "-",
                std_cell,
                f"{series.baseline_std:.5f}",
            )
        console.print(table)

    for n, rows in sorted(result.scores.items()):
        table = Table(title=f"Score, N={n}")
        table.add_column("a", style="cyan")
        if rows and rows[0].eps is not None:
            table.add_column("eps")
        table.add_column("wins", style="green")
        table.add_column("total")
        table.add_column("fraction")
        for row in rows:
            cells = [f"{row.discard_a:g}"]
            if row.eps is not None:
                cells.append(f"{row.eps:g}")
            cells += [str(row.wins), str(row.total), f"{row.fraction:.3f}"]
            table.add_row(*cells)
        console.print(table)
        threshold = result.thresholds.get(n)
        if threshold is None:
            console.print(f"[yellow]N={n}: win fraction stays at or below 0.5 on this grid[/yellow]")
        else:
            console.print(f"[green]N={n}: win fraction first exceeds 0.5 at a = {threshold:g}[/green]")

    if result.degenerate_runs:
        console.print(f"[yellow]{result.degenerate_runs} degenerate run(s) counted[/yellow]")

    timing = Table(title="Timing")
    timing.add_column("Phase", style="cyan")
    timing.add_column("Total (ms)", style="green")
    timing.add_column("Per cell (ms)")
    for phase, stats in result.timing_summary.items():
        timing.add_row(phase, f"{stats['total_ms']:.1f}", str(stats.get("ms_per_cell", "")))
    console.print(timing)


# -------------------------------------------
# Commands
# -------------------------------------------

@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, default=False, help='Debug logging')
def cli(verbose: bool):
    """
    Weak Tomography CLI

    Qubit tomography with sequential weak measurements and state recycling,
    compared against projective tomography.

    \b
    Examples:
        weaktomo demo rho1
        weaktomo demo rho2 --a 0 --a 0.8 --runs 2000
        weaktomo sweep --config configs/sweep_ball_n30.json --workers 4
        weaktomo score --n 30 --n 60 --n 90
        weaktomo disk --full-scale
        weaktomo validate
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


@cli.command()
@click.argument('state_name', type=click.Choice(['rho1', 'rho2'], case_sensitive=False))
@click.option('--a', 'a_values', type=float, multiple=True, default=(0.0,), show_default=True,
              help='Discard half-width (repeatable)')
@click.option('--eps-grid', callback=_parse_eps_grid, default=None,
              help='START:STOP:STEP (default 0.1:2.0:0.1)')
@click.option('--n', 'ensemble_n', type=int, default=30, show_default=True, help='Ensemble size')
@_common_options
def demo(state_name, a_values, eps_grid, ensemble_n, out_dir, seed, engine, estimator, workers, runs, html):
    """
    ε sweep for a built-in example state

    Weak scheme versus projective thirds, N=30 and 10000 runs by default.
    """
    config = _with_overrides(
        lambda: demo_config(state_name, a_values=a_values, eps_grid=eps_grid, n=ensemble_n),
        _overrides(seed, engine, estimator, workers, runs, html),
    )
    _run_and_save(config, out_dir)


@cli.command()
@click.option('--config', '-c', 'config_path', required=True, type=click.Path(dir_okay=False),
              help='JSON experiment config')
@_common_options
def sweep(config_path, out_dir, seed, engine, estimator, workers, runs, html):
    """
    Run the sweep described by a config file

    Writes one CSV row per cell, a JSON summary and plot-series files.
    """
    overrides = _overrides(seed, engine, estimator, workers, runs, False)
    config = load_config(config_path, overrides=overrides)
    if html:
        config = apply_overrides(config, {"outputs": dict(config.outputs.model_dump(), html=True)})
    _run_and_save(config, out_dir)


def _score_command(pair: str):
    preset = score_config if pair == "full" else disk_config

    @_common_options
    @click.option('--per-eps', is_flag=True, default=False, help='Score every (a, eps) point separately')
    @click.option('--states', 'state_count', type=click.IntRange(min=1), default=None,
                  help='Number of random states')
    @click.option('--full-scale', is_flag=True, default=False,
                  help='Full-scale state and run counts (hours)')
    @click.option('--n', 'n_list', type=int, multiple=True, default=None,
                  help='Ensemble size (repeatable)')
    @click.option('--config', '-c', 'config_path', default=None, type=click.Path(dir_okay=False),
                  help='JSON experiment config instead of the built-in one')
    def command(config_path, n_list, full_scale, state_count, per_eps,
                out_dir, seed, engine, estimator, workers, runs, html):
        overrides = _overrides(seed, engine, estimator, workers, runs, html)
        if config_path:
            overrides.pop("outputs", None)
            overrides.update({"n_list": list(n_list) or None, "per_eps": per_eps or None,
                              "experiment": "score"})
            config = load_config(config_path, overrides=overrides)
            if html:
                config = apply_overrides(config, {"outputs": dict(config.outputs.model_dump(), html=True)})
        else:
            kwargs = {"full_scale": full_scale, "states": state_count, "per_eps": per_eps}
            if n_list:
                kwargs["n_list"] = list(n_list)
            config = _with_overrides(lambda: preset(**kwargs), overrides)
        _run_and_save(config, out_dir)

    return command


cli.command(
    name='score',
    help="Count random Bloch-ball states for which the weak scheme beats projective thirds",
)(_score_command("full"))

cli.command(
    name='disk',
    help="Count random y = 0 states for which the weak disk scheme beats projective halves",
)(_score_command("disk"))


@cli.command()
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=None, help='Master seed (u64)')
@click.option('--runs', '-r', type=click.IntRange(min=100), default=None, help='Runs per statistical check')
@click.option('--large-n', type=click.IntRange(min=1000), default=None, help='Ensemble size for consistency')
@click.option('--workers', '-w', type=click.IntRange(min=2), default=4, show_default=True,
              help='Worker count compared against a serial sweep')
@click.option('--out', '-o', 'out_dir', default=None, type=click.Path(file_okay=False),
              help='Write validation.json here')
@click.option('--inject-erf-error', 'erf_offset', type=float, default=0.0, hidden=True)
def validate(seed, runs, large_n, workers, out_dir, erf_offset):
    """
    Run the property suite

    Exits with status 2 if any check fails.
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    fault = inject_erf_error(erf_offset) if erf_offset else nullcontext()

    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                  console=console) as progress:
        task = progress.add_task("Validating...", total=None)
        with fault:
            report = run_validation(
                seed,
                runs or settings.VALIDATE_RUNS,
                large_n or settings.VALIDATE_LARGE_N,
                workers=workers,
                progress=lambda name: progress.update(task, description=f"Checking {name}..."),
            )

    table = Table(title="Property Suite")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Deviation", justify="right")
    table.add_column("Tolerance", justify="right")
    for check in report.checks:
        status = "[green]✓ pass[/green]" if check.passed else "[red]✗ fail[/red]"
        table.add_row(check.name, status, f"{check.deviation:.3g}", f"{check.tolerance:.3g}")
    console.print(table)

    if out_dir:
        path = JSONReportGenerator().generate(report.to_dict(), os.path.join(out_dir, "validation.json"))
        console.print(f"[green]✓[/green] Saved {path}")
    else:
        click.echo(json.dumps(report.to_dict(), sort_keys=True))

    if not report.passed:
        raise ValidationFailed([c for c in report.to_dict()["checks"] if not c["passed"]])


@cli.command()
@click.argument('summary_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--output', '-o', default=None, help='Output HTML path')
def report(summary_file: str, output: Optional[str]):
    """
    Render an HTML report from a summary JSON
    """
    with open(summary_file, 'r', encoding='utf-8') as f:
        summary = json.load(f)

    output_path = output or os.path.splitext(summary_file)[0] + '.html'
    HTMLReportGenerator().generate(summary, output_path)
    console.print(f"[green]✓[/green] Report saved to: {output_path}")


@cli.command()
def info():
    """
    Show host resources and a suggested worker count
    """
    from .collectors import SystemStatsCollector

    collector = SystemStatsCollector()
    stats = collector.get_system_stats()

    table = Table(title="System Information")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Version", __version__)
    table.add_row("CPU Cores (logical)", str(stats["cpu_count"]))
    table.add_row("CPU Cores (physical)", str(stats["cpu_physical"]))
    table.add_row("CPU Usage", f"{stats['cpu_percent']}%")
    table.add_row("Total Memory", f"{stats['memory_total_gb']} GB")
    table.add_row("Available Memory", f"{stats['memory_available_gb']} GB")
    table.add_row("Default engine", settings.DEFAULT_ENGINE)
    table.add_row("Default estimator", settings.DEFAULT_ESTIMATOR)
    table.add_row("Results directory", settings.RESULTS_DIR)

    console.print(table)
    console.print(f"\n[yellow]Suggested --workers:[/yellow] {collector.suggested_workers(stats)}")


# -------------------------------------------
# Entry point
# -------------------------------------------

def _report_error(error: Exception, diagnostics: List[str] = ()) -> None:
    err_console.print(f"[red]Error:[/red] {error}")
    for line in diagnostics:
        err_console.print(f"  {line}")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map failures to exit codes (1 usage/config, 2 validation, 3 I/O)"""
    try:
        rv = cli.main(args=argv, prog_name="weaktomo", standalone_mode=False)
    except click.exceptions.Abort:
        _report_error(Exception("Aborted"))
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except ConfigError as e:
        _report_error(e, e.diagnostics)
        return e.exit_code
    except ValidationFailed as e:
        _report_error(e, [f"{c['name']}: deviation {c['deviation']} > {c['tolerance']}" for c in e.failed])
        return e.exit_code
    except (OutputError, OSError) as e:
        _report_error(e)
        return OutputError.exit_code
    except (TomographyError, ValueError) as e:
        _report_error(e)
        return 1
    return rv if isinstance(rv, int) else 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
