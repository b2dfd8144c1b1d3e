"""
Weak Tomography - Monte Carlo Harness
Random states, fidelity statistics over runs, parameter sweeps and score counts

Every random stream is derived from the master seed and the coordinates of
the work item (cell, run), never from execution order, so results do not
depend on the number of worker processes.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .bloch import BlochVector, require_physical
from .estimator import EstimatorKind
from .pointer import erf_offset, set_erf_offset
from .protocol import EngineKind, SchemeConfig, SchemeKind, run_scheme

logger = logging.getLogger(__name__)

# Leading spawn-key tags keep the state stream and cell streams apart
STATES_TAG = 0
CELL_TAG = 1

BASELINE_EPS = 1.0  # placeholder coupling for projective cells; unused by the schemes

_SCHEME_CODES = {kind: index for index, kind in enumerate(SchemeKind)}

ProgressCallback = Callable[[int, int], None]


class SchemePair(str, Enum):
    """A weak scheme and the projective baseline it is scored against"""
    FULL = "full"
    DISK = "disk"

    @property
    def weak(self) -> SchemeKind:
        return SchemeKind.WEAK_FULL if self is SchemePair.FULL else SchemeKind.WEAK_DISK

    @property
    def baseline(self) -> SchemeKind:
        return SchemeKind.PROJECTIVE_FULL if self is SchemePair.FULL else SchemeKind.PROJECTIVE_DISK


class LabelledState(NamedTuple):
    state_id: str
    state: BlochVector


@dataclass(frozen=True)
class RunStatistics:
    """Fidelity statistics of one cell (population standard deviation)"""
    mean_fidelity: float
    std_fidelity: float
    runs: int
    degenerate_runs: int
    mean_estimate: Tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SweepRow:
    """One evaluated cell; field order is the CSV column order"""
    state_id: str
    x: float
    y: float
    z: float
    scheme: str
    engine: str
    n: int
    eps1: float
    eps2: float
    a: float
    runs: int
    mean_fidelity: float
    std_fidelity: float
    degenerate_runs: int
    seed: int


@dataclass(frozen=True)
class ScoreRow:
    """Number of states for which the weak scheme beats the baseline"""
    discard_a: float
    wins: int
    total: int
    eps: Optional[float] = None

    @property
    def fraction(self) -> float:
        return self.wins / self.total if self.total else 0.0


@dataclass
class FidelitySeries:
    """State-averaged f̄ and σ versus ε, one curve per discard value

    se_by_a holds the standard error of each state-averaged mean.
    """
    n: int
    eps: List[float] = field(default_factory=list)
    mean_by_a: Dict[float, List[float]] = field(default_factory=dict)
    std_by_a: Dict[float, List[float]] = field(default_factory=dict)
    se_by_a: Dict[float, List[float]] = field(default_factory=dict)
    baseline_mean: float = 0.0
    baseline_std: float = 0.0
    baseline_se: float = 0.0


# -------------------------------------------
# Streams and seeds
# -------------------------------------------

def derive_seed(master: int, *coords: int) -> int:
    """64-bit seed for the work item at `coords`"""
    seq = np.random.SeedSequence(entropy=master, spawn_key=tuple(int(c) for c in coords))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def run_stream(seed: int, run_index: int) -> np.random.Generator:
    """Independent random stream for run `run_index` of a cell"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(run_index,))))


# -------------------------------------------
# Random states
# -------------------------------------------

def random_ball_state(rng: np.random.Generator) -> BlochVector:
    """Uniform over the volume of the Bloch ball"""
    direction = rng.normal(size=3)
    length = np.linalg.norm(direction)
    while length == 0.0:
        direction = rng.normal(size=3)
        length = np.linalg.norm(direction)
    radius = rng.random() ** (1.0 / 3.0)
    return BlochVector.from_array(direction / length * radius)


def random_disk_state(rng: np.random.Generator) -> BlochVector:
    """Uniform over the area of the y = 0 disk"""
    angle = rng.uniform(0.0, 2.0 * math.pi)
    radius = math.sqrt(rng.random())
    return BlochVector(radius * math.cos(angle), 0.0, radius * math.sin(angle))


def sample_states(kind: str, count: int, seed: int) -> List[LabelledState]:
    """`count` labelled random states from the "ball" or "disk" distribution"""
    samplers = {"ball": random_ball_state, "disk": random_disk_state}
    if kind not in samplers:
        raise ValueError(f"Unknown state distribution '{kind}'")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(STATES_TAG, list(samplers).index(kind))))
    return [LabelledState(f"{kind}-{i:05d}", samplers[kind](rng)) for i in range(count)]


def label_states(states: Sequence[BlochVector], prefix: str = "state") -> List[LabelledState]:
    return [LabelledState(f"{prefix}-{i:05d}", s) for i, s in enumerate(states)]


# -------------------------------------------
# Monte Carlo
# -------------------------------------------

def sample_runs(state: BlochVector, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Per-run estimates (runs × 3) and degenerate flags of one cell"""
    require_physical(state)
    estimates = np.empty((cfg.runs, 3))
    degenerate = np.zeros(cfg.runs, dtype=bool)
    for run_index in range(cfg.runs):
        est = run_scheme(state, cfg, run_stream(cfg.seed, run_index))
        estimates[run_index] = (est.x, est.y, est.z)
        degenerate[run_index] = est.is_degenerate
    return estimates, degenerate


def monte_carlo(state: BlochVector, cfg: SchemeConfig) -> RunStatistics:
    """Mean and population std of per-run fidelities over cfg.runs independent runs"""
    estimates, degenerate = sample_runs(state, cfg)
    fidelities = 1.0 - np.sum((estimates - state.as_array()) ** 2, axis=1)
    # Strong couplings give fidelities whose squares overflow; take the std on a unit scale
    scale = max(1.0, float(np.max(np.abs(fidelities))))
    stats = RunStatistics(
        mean_fidelity=float(fidelities.mean()),
        std_fidelity=scale * float((fidelities / scale).std()),
        runs=cfg.runs,
        degenerate_runs=int(degenerate.sum()),
        mean_estimate=tuple(float(v) for v in estimates.mean(axis=0)),
    )
    if stats.degenerate_runs:
        logger.debug(f"{stats.degenerate_runs}/{cfg.runs} degenerate runs "
                     f"({cfg.scheme.value}, eps={cfg.eps1}, a={cfg.discard_a})")
    return stats


# -------------------------------------------
# Sweeps
# -------------------------------------------

@dataclass(frozen=True)
class _Cell:
    key: Tuple[int, ...]
    state_id: str
    state: BlochVector
    cfg: SchemeConfig
    eps: float
    a: float


def _evaluate_cell(cell: _Cell) -> Tuple[Tuple[int, ...], SweepRow]:
    stats = monte_carlo(cell.state, cell.cfg)
    row = SweepRow(
        state_id=cell.state_id,
        x=cell.state.x,
        y=cell.state.y,
        z=cell.state.z,
        scheme=cell.cfg.scheme.value,
        engine=cell.cfg.engine.value,
        n=cell.cfg.ensemble_n,
        eps1=cell.eps,
        eps2=cell.eps,
        a=cell.a,
        runs=cell.cfg.runs,
        mean_fidelity=stats.mean_fidelity,
        std_fidelity=stats.std_fidelity,
        degenerate_runs=stats.degenerate_runs,
        seed=cell.cfg.seed,
    )
    return cell.key, row


def cell_seed(master: int, state_index: int, n: int, a_index: int, eps_index: int,
              scheme: SchemeKind) -> int:
    """Seed of one sweep cell; baseline cells use a_index = eps_index = 0"""
    return derive_seed(master, CELL_TAG, state_index, n, a_index, eps_index, _SCHEME_CODES[scheme])


def _build_cells(states: Sequence[LabelledState], pair: SchemePair, eps_grid: Sequence[float],
                 a_grid: Sequence[float], n_list: Sequence[int], runs: int, seed: int,
                 engine: EngineKind, estimator: EstimatorKind) -> List[_Cell]:
    cells = []
    for si, (state_id, state) in enumerate(states):
        for n in n_list:
            base_cfg = SchemeConfig(
                scheme=pair.baseline, engine=engine, ensemble_n=n,
                eps1=BASELINE_EPS, eps2=BASELINE_EPS, discard_a=0.0, runs=runs,
                seed=cell_seed(seed, si, n, 0, 0, pair.baseline), estimator=estimator,
            )
            cells.append(_Cell((si, n, -1, -1), state_id, state, base_cfg, 0.0, 0.0))
            for ai, a in enumerate(a_grid):
                for ei, eps in enumerate(eps_grid):
                    cfg = SchemeConfig(
                        scheme=pair.weak, engine=engine, ensemble_n=n,
                        eps1=eps, eps2=eps, discard_a=a, runs=runs,
                        seed=cell_seed(seed, si, n, ai, ei, pair.weak), estimator=estimator,
                    )
                    cells.append(_Cell((si, n, ai, ei), state_id, state, cfg, eps, a))
    return cells


def sweep(states: Sequence[LabelledState], pair: SchemePair, eps_grid: Sequence[float],
          a_grid: Sequence[float], n_list: Sequence[int], runs: int, seed: int,
          engine: EngineKind = EngineKind.MULTINOMIAL,
          estimator: EstimatorKind = EstimatorKind.CALIBRATED,
          workers: int = 1, progress: Optional[ProgressCallback] = None) -> List[SweepRow]:
    """
    Evaluate the full (state, N, a, ε) product plus one baseline cell per (state, N).

    Rows come back ordered by (state, N, a, ε), with each (state, N) baseline
    row first.
    """
    if not states or not eps_grid or not a_grid or not n_list:
        raise ValueError("sweep needs non-empty states, eps_grid, a_grid and n_list")

    cells = _build_cells(states, pair, eps_grid, a_grid, n_list, runs, seed, engine, estimator)
    logger.info(f"Sweep: {len(cells)} cells x {runs} runs ({pair.value}, {engine.value}), "
                f"{workers} worker(s)")

    results: Dict[Tuple[int, ...], SweepRow] = {}
    if workers <= 1:
        for done, cell in enumerate(cells, start=1):
            key, row = _evaluate_cell(cell)
            results[key] = row
            if progress:
                progress(done, len(cells))
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=set_erf_offset,
                                 initargs=(erf_offset(),)) as executor:
            futures = [executor.submit(_evaluate_cell, cell) for cell in cells]
            for done, future in enumerate(as_completed(futures), start=1):
                key, row = future.result()
                results[key] = row
                if progress:
                    progress(done, len(cells))

    total_degenerate = sum(row.degenerate_runs for row in results.values())
    if total_degenerate:
        logger.info(f"Sweep finished with {total_degenerate} degenerate runs in total")
    return [results[key] for key in sorted(results)]


# -------------------------------------------
# Scores and aggregates
# -------------------------------------------

def score_rows_from_sweep(rows: Sequence[SweepRow], per_eps: bool = False) -> List[ScoreRow]:
    """
    Reduce sweep rows to win counts per discard value.

    A state wins for a given a when the weak scheme's best mean fidelity over
    the ε grid strictly exceeds the baseline's. With per_eps, each (a, ε)
    point is scored on its own.
    """
    baseline: Dict[Tuple[str, int], float] = {}
    weak: Dict[Tuple[str, int], Dict[Tuple[float, float], float]] = {}
    for row in rows:
        key = (row.state_id, row.n)
        if row.scheme in (SchemeKind.PROJECTIVE_FULL.value, SchemeKind.PROJECTIVE_DISK.value):
            baseline[key] = row.mean_fidelity
        else:
            weak.setdefault(key, {})[(row.a, row.eps1)] = row.mean_fidelity

    a_values = sorted({a for cells in weak.values() for a, _ in cells})
    eps_values = sorted({eps for cells in weak.values() for _, eps in cells})
    total = len(weak)

    score = []
    for a in a_values:
        if per_eps:
            for eps in eps_values:
                wins = sum(1 for key, cells in weak.items() if cells[(a, eps)] > baseline[key])
                score.append(ScoreRow(a, wins, total, eps))
        else:
            wins = 0
            for key, cells in weak.items():
                best = max(value for (cell_a, _), value in cells.items() if cell_a == a)
                if best > baseline[key]:
                    wins += 1
            score.append(ScoreRow(a, wins, total))
    return score


def score(states: Sequence[LabelledState], n: int, a_grid: Sequence[float],
          eps_grid: Sequence[float], runs: int, seed: int,
          pair: SchemePair = SchemePair.FULL,
          engine: EngineKind = EngineKind.MULTINOMIAL,
          estimator: EstimatorKind = EstimatorKind.CALIBRATED,
          workers: int = 1, per_eps: bool = False,
          progress: Optional[ProgressCallback] = None) -> List[ScoreRow]:
    """Win counts of the weak scheme against the projective baseline, one row per a"""
    rows = sweep(states, pair, eps_grid, a_grid, [n], runs, seed,
                 engine=engine, estimator=estimator, workers=workers, progress=progress)
    return score_rows_from_sweep(rows, per_eps=per_eps)


def threshold_a(score_rows: Sequence[ScoreRow]) -> Optional[float]:
    """Smallest discard value whose win fraction exceeds one half"""
    for row in sorted(score_rows, key=lambda r: r.discard_a):
        if row.eps is None and row.fraction > 0.5:
            return row.discard_a
    return None


def standard_error(rows: Sequence[SweepRow]) -> float:
    """Standard error of the mean over states of per-state mean fidelities"""
    return math.hypot(*(r.std_fidelity / math.sqrt(r.runs) for r in rows)) / len(rows)


def mean_over_states(rows: Sequence[SweepRow]) -> Dict[int, FidelitySeries]:
    """Average f̄ and σ over states for every (N, a, ε), plus the baseline average, with standard errors"""
    by_n: Dict[int, FidelitySeries] = {}
    grouped: Dict[Tuple[int, float, float], List[SweepRow]] = {}
    baselines: Dict[int, List[SweepRow]] = {}
    for row in rows:
        if row.scheme in (SchemeKind.PROJECTIVE_FULL.value, SchemeKind.PROJECTIVE_DISK.value):
            baselines.setdefault(row.n, []).append(row)
        else:
            grouped.setdefault((row.n, row.a, row.eps1), []).append(row)

    for n in sorted(baselines):
        series = FidelitySeries(n=n)
        base = baselines[n]
        series.baseline_mean = float(np.mean([r.mean_fidelity for r in base]))
        series.baseline_std = float(np.mean([r.std_fidelity for r in base]))
        series.baseline_se = standard_error(base)
        keys = sorted(k for k in grouped if k[0] == n)
        series.eps = sorted({k[2] for k in keys})
        for _, a, eps in keys:
            cell_rows = grouped[(n, a, eps)]
            series.mean_by_a.setdefault(a, []).append(float(np.mean([r.mean_fidelity for r in cell_rows])))
            series.std_by_a.setdefault(a, []).append(float(np.mean([r.std_fidelity for r in cell_rows])))
            series.se_by_a.setdefault(a, []).append(standard_error(cell_rows))
        by_n[n] = series
    return by_n
