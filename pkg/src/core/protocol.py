"""
Weak Tomography - Measurement Protocols
Ensemble-level tomography schemes, each runnable under two engines

TRAJECTORY follows every copy through the Kraus chain; MULTINOMIAL draws each
stage's counts from the closed-form stage probabilities. Both have the same
per-stage marginal laws.
"""
import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bloch import BlochVector, EstimateVector, PauliAxis, component
from .estimator import (
    MAX_LOG_ESTIMATE,
    EstimatorKind,
    OutcomeCounts,
    assemble_disk_estimate,
    assemble_full_estimate,
    assemble_projective_disk_estimate,
    assemble_projective_estimate,
    log_estimate_bound,
)
from .pointer import (
    classify_readings,
    kraus_update_arrays,
    sample_pointer_readings,
    sample_projective,
    stage_probs_projective,
    stage_probs_projective_y,
    stage_probs_weak_x,
    stage_probs_weak_z,
)

DISK_Y_TOL = 1e-12
MAX_SEED = 2 ** 64


class SchemeKind(str, Enum):
    WEAK_FULL = "weak_full"
    PROJECTIVE_FULL = "projective_full"
    WEAK_DISK = "weak_disk"
    PROJECTIVE_DISK = "projective_disk"

    @property
    def is_disk(self) -> bool:
        return self in (SchemeKind.WEAK_DISK, SchemeKind.PROJECTIVE_DISK)

    @property
    def is_weak(self) -> bool:
        return self in (SchemeKind.WEAK_FULL, SchemeKind.WEAK_DISK)


class EngineKind(str, Enum):
    TRAJECTORY = "trajectory"
    MULTINOMIAL = "multinomial"


@dataclass(frozen=True)
class SchemeConfig:
    """Full description of one experiment cell"""
    scheme: SchemeKind
    engine: EngineKind = EngineKind.MULTINOMIAL
    ensemble_n: int = 30
    eps1: float = 0.5
    eps2: float = 0.5
    discard_a: float = 0.0
    runs: int = 1000
    seed: int = 0
    estimator: EstimatorKind = EstimatorKind.CALIBRATED

    def __post_init__(self):
        # Accept plain strings for the enum fields
        object.__setattr__(self, "scheme", SchemeKind(self.scheme))
        object.__setattr__(self, "engine", EngineKind(self.engine))
        object.__setattr__(self, "estimator", EstimatorKind(self.estimator))

        if self.ensemble_n < 3:
            raise ValueError(f"ensemble_n must be >= 3, got {self.ensemble_n}")
        if self.scheme is SchemeKind.PROJECTIVE_FULL and self.ensemble_n % 3:
            raise ValueError(f"projective_full needs ensemble_n divisible by 3, got {self.ensemble_n}")
        if self.scheme.is_disk and self.ensemble_n % 2:
            raise ValueError(f"{self.scheme.value} needs an even ensemble_n, got {self.ensemble_n}")
        for name in ("eps1", "eps2"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value}")
        if not (self.discard_a >= 0 and math.isfinite(self.discard_a)):
            raise ValueError(f"discard_a must be >= 0, got {self.discard_a}")
        if self.scheme.is_weak:
            bound = log_estimate_bound(self.eps1, self.eps2, self.discard_a, self.estimator,
                                       disk=self.scheme.is_disk)
            if bound > MAX_LOG_ESTIMATE:
                raise ValueError(f"eps1={self.eps1:g}, eps2={self.eps2:g} is too strong a coupling: "
                                 f"estimates up to e^{bound:.0f} would overflow the fidelity "
                                 f"(limit e^{MAX_LOG_ESTIMATE:.0f})")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.seed < MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def with_(self, **changes) -> "SchemeConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class FullStageCounts:
    """Counts of the weak σz, weak σx and projective σy stages"""
    z: OutcomeCounts
    x: OutcomeCounts
    y: OutcomeCounts


@dataclass(frozen=True)
class DiskStageCounts:
    """Half A: weak σz then projective σx. Half B: weak σx then projective σz."""
    weak_z: OutcomeCounts
    proj_x: OutcomeCounts
    weak_x: OutcomeCounts
    proj_z: OutcomeCounts


def _draw(rng: np.random.Generator, n: int, probs) -> OutcomeCounts:
    return OutcomeCounts.from_array(rng.multinomial(n, probs.as_array()))


def _require_disk_state(state: BlochVector) -> None:
    if abs(state.y) > DISK_Y_TOL:
        raise ValueError(f"Disk schemes need a state with y = 0, got y={state.y}")


# -------------------------------------------
# Weak-weak-projective scheme
# -------------------------------------------

def simulate_weak_full(state: BlochVector, cfg: SchemeConfig,
                       rng: np.random.Generator) -> FullStageCounts:
    """Stage counts of the weak σz → weak σx → projective σy chain on N copies"""
    n = cfg.ensemble_n
    a = cfg.discard_a

    if cfg.engine is EngineKind.MULTINOMIAL:
        return FullStageCounts(
            z=_draw(rng, n, stage_probs_weak_z(state.z, cfg.eps1, a)),
            x=_draw(rng, n, stage_probs_weak_x(state.x, cfg.eps1, cfg.eps2, a)),
            y=_draw(rng, n, stage_probs_projective_y(state.y, cfg.eps1, cfg.eps2)),
        )

    x = np.full(n, state.x)
    y = np.full(n, state.y)
    z = np.full(n, state.z)

    # Every copy is kept after each stage, discarded readings included
    q1 = sample_pointer_readings(z, cfg.eps1, rng)
    counts_z = OutcomeCounts.from_codes(classify_readings(q1, a))
    z, x, y = kraus_update_arrays(z, x, y, cfg.eps1, q1)

    q2 = sample_pointer_readings(x, cfg.eps2, rng)
    counts_x = OutcomeCounts.from_codes(classify_readings(q2, a))
    x, y, z = kraus_update_arrays(x, y, z, cfg.eps2, q2)

    counts_y = OutcomeCounts.from_codes(sample_projective(y, rng))

    assert counts_z.n_total == counts_x.n_total == counts_y.n_total == n
    return FullStageCounts(counts_z, counts_x, counts_y)


def run_weak_full(state: BlochVector, cfg: SchemeConfig, rng: np.random.Generator) -> EstimateVector:
    if cfg.scheme is not SchemeKind.WEAK_FULL:
        raise ValueError(f"run_weak_full called with scheme {cfg.scheme.value}")
    counts = simulate_weak_full(state, cfg, rng)
    return assemble_full_estimate(counts.z, counts.x, counts.y,
                                  cfg.eps1, cfg.eps2, cfg.discard_a, cfg.estimator)


# -------------------------------------------
# Projective thirds
# -------------------------------------------

def _projective_counts(value: float, n: int, engine: EngineKind,
                       rng: np.random.Generator) -> OutcomeCounts:
    if engine is EngineKind.TRAJECTORY:
        return OutcomeCounts.from_codes(sample_projective(np.full(n, value), rng))
    k = int(rng.binomial(n, (1.0 + value) / 2.0))
    return OutcomeCounts(k, n - k)


def run_projective_full(state: BlochVector, cfg: SchemeConfig,
                        rng: np.random.Generator) -> EstimateVector:
    if cfg.scheme is not SchemeKind.PROJECTIVE_FULL:
        raise ValueError(f"run_projective_full called with scheme {cfg.scheme.value}")
    third = cfg.ensemble_n // 3
    cx, cy, cz = (
        _projective_counts(component(state, axis), third, cfg.engine, rng)
        for axis in (PauliAxis.X, PauliAxis.Y, PauliAxis.Z)
    )
    return assemble_projective_estimate(cx, cy, cz)


# -------------------------------------------
# Disk schemes (states with y = 0)
# -------------------------------------------

def simulate_weak_disk(state: BlochVector, cfg: SchemeConfig,
                       rng: np.random.Generator) -> DiskStageCounts:
    """Stage counts of both halves; the single coupling strength is eps1"""
    _require_disk_state(state)
    half = cfg.ensemble_n // 2
    eps = cfg.eps1
    a = cfg.discard_a

    if cfg.engine is EngineKind.MULTINOMIAL:
        return DiskStageCounts(
            weak_z=_draw(rng, half, stage_probs_weak_z(state.z, eps, a)),
            proj_x=_draw(rng, half, stage_probs_projective(state.x, eps)),
            weak_x=_draw(rng, half, stage_probs_weak_z(state.x, eps, a)),
            proj_z=_draw(rng, half, stage_probs_projective(state.z, eps)),
        )

    # Half A: weak σz, then projective σx on the same copies
    x = np.full(half, state.x)
    y = np.full(half, state.y)
    z = np.full(half, state.z)
    q = sample_pointer_readings(z, eps, rng)
    weak_z = OutcomeCounts.from_codes(classify_readings(q, a))
    z, x, y = kraus_update_arrays(z, x, y, eps, q)
    proj_x = OutcomeCounts.from_codes(sample_projective(x, rng))

    # Half B: weak σx, then projective σz
    x = np.full(half, state.x)
    y = np.full(half, state.y)
    z = np.full(half, state.z)
    q = sample_pointer_readings(x, eps, rng)
    weak_x = OutcomeCounts.from_codes(classify_readings(q, a))
    x, y, z = kraus_update_arrays(x, y, z, eps, q)
    proj_z = OutcomeCounts.from_codes(sample_projective(z, rng))

    return DiskStageCounts(weak_z, proj_x, weak_x, proj_z)


def run_weak_disk(state: BlochVector, cfg: SchemeConfig, rng: np.random.Generator) -> EstimateVector:
    if cfg.scheme is not SchemeKind.WEAK_DISK:
        raise ValueError(f"run_weak_disk called with scheme {cfg.scheme.value}")
    counts = simulate_weak_disk(state, cfg, rng)
    return assemble_disk_estimate(counts.weak_z, counts.proj_x, counts.weak_x, counts.proj_z,
                                  cfg.eps1, cfg.discard_a, cfg.estimator)


def run_projective_disk(state: BlochVector, cfg: SchemeConfig,
                        rng: np.random.Generator) -> EstimateVector:
    if cfg.scheme is not SchemeKind.PROJECTIVE_DISK:
        raise ValueError(f"run_projective_disk called with scheme {cfg.scheme.value}")
    _require_disk_state(state)
    half = cfg.ensemble_n // 2
    cx = _projective_counts(state.x, half, cfg.engine, rng)
    cz = _projective_counts(state.z, half, cfg.engine, rng)
    return assemble_projective_disk_estimate(cx, cz)


_RUNNERS = {
    SchemeKind.WEAK_FULL: run_weak_full,
    SchemeKind.PROJECTIVE_FULL: run_projective_full,
    SchemeKind.WEAK_DISK: run_weak_disk,
    SchemeKind.PROJECTIVE_DISK: run_projective_disk,
}


def run_scheme(state: BlochVector, cfg: SchemeConfig, rng: np.random.Generator) -> EstimateVector:
    """Run one ensemble of the configured scheme"""
    return _RUNNERS[cfg.scheme](state, cfg, rng)
