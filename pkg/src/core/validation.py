"""
Weak Tomography - Property Suite
Numerical and statistical self-checks run by `weaktomo validate`

Each check yields CheckResult entries; statistical checks report their
deviation in standard errors, numerical checks in absolute units.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy import integrate
from scipy.stats import norm

from .bloch import RHO1, RHO2, BlochVector
from .estimator import EstimatorKind, projective_fidelity_law, projective_fidelity_variance
from .harness import SchemePair, derive_seed, label_states, monte_carlo, run_stream, sweep
from .pointer import (
    kraus_update_arrays,
    pointer_density,
    sample_pointer_readings,
    stage_probs_projective_y,
    stage_probs_weak_x,
    stage_probs_weak_z,
)
from .protocol import EngineKind, SchemeConfig, SchemeKind, simulate_weak_full

logger = logging.getLogger(__name__)

QUADRATURE_TOL = 1e-8
CONSISTENCY_TOL = 0.01
CONSISTENCY_RUNS = 4

# Suite-wide false-alarm rate of the statistical checks: that of one two-sided 3σ test
FAMILY_ALPHA = 2.0 * norm.sf(3.0)

# (epsilon, a, component) points for the quadrature checks
QUADRATURE_POINTS = [
    (0.1, 0.0, 0.3),
    (0.5, 0.4, -0.7),
    (1.0, 0.8, 0.9),
    (2.0, 0.2, 0.0),
    (10.0, 0.6, -0.2),
]

TRAJECTORY_CELLS = [
    (BlochVector(0.3, -0.4, 0.5), 0.5, 0.0),
    (BlochVector(-0.6, 0.2, 0.1), 1.0, 0.4),
]

CONSISTENCY_STATES = [
    BlochVector(0.0, 0.0, 0.0),
    BlochVector(0.5, 0.5, 0.5),
    BlochVector(-0.3, 0.8, -0.2),
    RHO1,
    RHO2,
]

DAMPING_POINTS = [(BlochVector(0.6, -0.3, 0.4), 0.3), (BlochVector(0.6, -0.3, 0.4), 1.5)]


def sigma_tolerance(deviations: int, alpha: float = FAMILY_ALPHA) -> float:
    """Per-deviation σ bound (Šidák) keeping the family-wise false-alarm rate at alpha"""
    per_check = 1.0 - (1.0 - alpha) ** (1.0 / deviations)
    return float(norm.isf(per_check / 2.0))


# One z-score per plus count, per discard count when a > 0, per projective state and damped component
STATISTICAL_DEVIATIONS = (sum(3 + (2 if a > 0 else 0) for _, _, a in TRAJECTORY_CELLS)
                          + 2 + 2 * len(DAMPING_POINTS))
SIGMA_TOL = sigma_tolerance(STATISTICAL_DEVIATIONS)


@dataclass
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""


@dataclass
class ValidationReport:
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                dict(asdict(check), deviation=check.deviation if math.isfinite(check.deviation) else None)
                for check in self.checks
            ],
        }


def _check(name: str, deviation: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = bool(math.isfinite(deviation) and deviation <= tolerance)
    if not passed:
        logger.warning(f"Check failed: {name} (deviation {deviation:.3g} > {tolerance:.3g})")
    return CheckResult(name, passed, float(deviation), float(tolerance), detail)


# -------------------------------------------
# (a) Completeness by quadrature
# -------------------------------------------

def _integrate(f, lo: float, hi: float) -> float:
    value, _ = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return value


def check_completeness() -> List[CheckResult]:
    """Pointer density integrates to one; closed-form stage probabilities match quadrature"""
    results = []
    for eps, a, c in QUADRATURE_POINTS:
        def density(q, c=c, eps=eps):
            return pointer_density(q, c, eps)

        total = sum(_integrate(density, lo, hi) for lo, hi in
                    ((-np.inf, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, np.inf)))
        results.append(_check(f"completeness.density[eps={eps},a={a},c={c}]",
                              abs(total - 1.0), QUADRATURE_TOL))

        probs = stage_probs_weak_z(c, eps, a)
        plus = _integrate(density, a, 1.0) + _integrate(density, 1.0, np.inf)
        minus = _integrate(density, -np.inf, -1.0) + _integrate(density, -1.0, -a)
        discard = _integrate(density, -a, a) if a > 0 else 0.0
        deviation = max(abs(probs.p_plus - plus), abs(probs.p_minus - minus),
                        abs(probs.p_discard - discard))
        results.append(_check(f"completeness.stage_probs[eps={eps},a={a},c={c}]",
                              deviation, QUADRATURE_TOL,
                              f"closed form ({probs.p_plus:.10f}, {probs.p_minus:.10f}, "
                              f"{probs.p_discard:.10f})"))
    return results


# -------------------------------------------
# (b) Trajectory engine against the closed forms
# -------------------------------------------

def _frequency_z(count: int, total: int, p: float) -> float:
    sigma = math.sqrt(max(total * p * (1.0 - p), 1e-300))
    return abs(count - total * p) / sigma


def check_trajectory_frequencies(seed: int, runs: int) -> List[CheckResult]:
    """Stage outcome frequencies of the per-copy engine against the multinomial probabilities"""
    results = []
    for index, (state, eps, a) in enumerate(TRAJECTORY_CELLS):
        cfg = SchemeConfig(SchemeKind.WEAK_FULL, engine=EngineKind.TRAJECTORY, ensemble_n=30,
                           eps1=eps, eps2=eps, discard_a=a, runs=runs,
                           seed=derive_seed(seed, 2, index))
        totals = np.zeros((3, 3), dtype=np.int64)
        for run_index in range(runs):
            counts = simulate_weak_full(state, cfg, run_stream(cfg.seed, run_index))
            for row, stage in enumerate((counts.z, counts.x, counts.y)):
                totals[row] += (stage.n_plus, stage.n_minus, stage.n_discard)

        expected = (
            stage_probs_weak_z(state.z, eps, a),
            stage_probs_weak_x(state.x, eps, eps, a),
            stage_probs_projective_y(state.y, eps, eps),
        )
        m = runs * cfg.ensemble_n
        for label, row, probs in zip(("z", "x", "y"), totals, expected):
            deviation = _frequency_z(int(row[0]), m, probs.p_plus)
            if probs.p_discard > 0:
                deviation = max(deviation, _frequency_z(int(row[2]), m, probs.p_discard))
            results.append(_check(f"trajectory.{label}[eps={eps},a={a}]", deviation, SIGMA_TOL,
                                  f"counts {row.tolist()} of {m}"))
    return results


# -------------------------------------------
# (c) Estimator consistency at large N
# -------------------------------------------

def check_consistency(seed: int, large_n: int) -> List[CheckResult]:
    """Mean estimate over a few large-N runs lies within CONSISTENCY_TOL of the state"""
    results = []
    for index, state in enumerate(CONSISTENCY_STATES):
        cfg = SchemeConfig(SchemeKind.WEAK_FULL, engine=EngineKind.MULTINOMIAL,
                           ensemble_n=large_n, eps1=0.3, eps2=0.3, discard_a=0.2,
                           runs=CONSISTENCY_RUNS, seed=derive_seed(seed, 3, index))
        stats = monte_carlo(state, cfg)
        deviation = float(np.max(np.abs(np.array(stats.mean_estimate) - state.as_array())))
        results.append(_check(f"consistency[state={index}]", deviation, CONSISTENCY_TOL,
                              f"estimate {tuple(round(v, 5) for v in stats.mean_estimate)}"))
    return results


# -------------------------------------------
# (d) Projective fidelity law
# -------------------------------------------

def check_projective_law(seed: int, runs: int, n: int = 30) -> List[CheckResult]:
    results = []
    for name, state in (("rho1", RHO1), ("rho2", RHO2)):
        cfg = SchemeConfig(SchemeKind.PROJECTIVE_FULL, ensemble_n=n, runs=runs,
                           seed=derive_seed(seed, 4, n, 1 if name == "rho1" else 2))
        stats = monte_carlo(state, cfg)
        law = projective_fidelity_law(state, n)
        stderr = math.sqrt(projective_fidelity_variance(state, n) / runs)
        results.append(_check(f"projective_law[{name},N={n}]",
                              abs(stats.mean_fidelity - law) / stderr, SIGMA_TOL,
                              f"mean {stats.mean_fidelity:.5f}, law {law:.5f}"))
    return results


# -------------------------------------------
# (e) Unconditional damping
# -------------------------------------------

def check_damping(seed: int, copies: int = 100_000) -> List[CheckResult]:
    """Averaging Kraus-updated copies over readings reproduces e^{−ε/2} transverse damping"""
    results = []
    for index, (state, eps) in enumerate(DAMPING_POINTS):
        rng = run_stream(derive_seed(seed, 5), index)
        along = np.full(copies, state.z)
        q = sample_pointer_readings(along, eps, rng)
        _, x_after, y_after = kraus_update_arrays(along, np.full(copies, state.x),
                                                  np.full(copies, state.y), eps, q)
        damping = math.exp(-eps / 2.0)
        for label, values, before in (("x", x_after, state.x), ("y", y_after, state.y)):
            stderr = float(values.std()) / math.sqrt(copies)
            deviation = abs(float(values.mean()) - damping * before) / stderr
            results.append(_check(f"damping.{label}[eps={eps}]", deviation, SIGMA_TOL))
    return results


# -------------------------------------------
# (f) Reproducibility across worker counts
# -------------------------------------------

def check_worker_reproducibility(seed: int, workers: int = 4) -> List[CheckResult]:
    states = label_states([RHO1, RHO2, BlochVector(0.1, 0.2, -0.3)], prefix="check")
    kwargs = dict(pair=SchemePair.FULL, eps_grid=[0.2, 0.6], a_grid=[0.0, 0.4], n_list=[30],
                  runs=40, seed=derive_seed(seed, 6), engine=EngineKind.TRAJECTORY,
                  estimator=EstimatorKind.CALIBRATED)
    serial = sweep(states, workers=1, **kwargs)
    parallel = sweep(states, workers=workers, **kwargs)
    mismatches = sum(1 for a, b in zip(serial, parallel) if a != b) + abs(len(serial) - len(parallel))
    return [_check(f"reproducibility[workers=1,{workers}]", float(mismatches), 0.0,
                   f"{len(serial)} rows compared")]


def run_validation(seed: int, runs: int, large_n: int, workers: int = 4,
                   progress: Optional[Callable[[str], None]] = None) -> ValidationReport:
    """Run every check; the report passes only if all checks pass"""
    report = ValidationReport(seed=seed)
    groups = [
        ("completeness", lambda: check_completeness()),
        ("trajectory", lambda: check_trajectory_frequencies(seed, runs)),
        ("consistency", lambda: check_consistency(seed, large_n)),
        ("projective_law", lambda: check_projective_law(seed, runs)),
        ("damping", lambda: check_damping(seed)),
        ("reproducibility", lambda: check_worker_reproducibility(seed, workers)),
    ]
    for name, run in groups:
        if progress:
            progress(name)
        report.checks.extend(run())
    logger.info(f"Validation: {len(report.checks) - len(report.failed)}/{len(report.checks)} checks passed")
    return report
