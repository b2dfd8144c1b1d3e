"""
Weak Tomography - Estimators
Turn outcome tallies into Bloch-component estimates by inverting the stage probabilities
"""
import math
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .bloch import BlochVector, EstimateVector
from .pointer import DISCARD, MINUS, PLUS, erfc

D_MIN = 1e-12

# log of the largest component estimate; squared errors keep 1e12 of headroom below overflow
MAX_LOG_ESTIMATE = 0.5 * (math.log(sys.float_info.max) - math.log(1e12))


class EstimatorKind(str, Enum):
    """
    How weak-stage counts become a component estimate.

    CALIBRATED divides the count asymmetry by n_total·D(ε, a), which is
    unbiased. KEPT uses the frequency among kept readings with only the
    exponential damping corrections; it shrinks estimates toward the origin.
    """
    CALIBRATED = "calibrated"
    KEPT = "kept"


@dataclass(frozen=True)
class OutcomeCounts:
    """Tallies of one measurement stage over an ensemble"""
    n_plus: int
    n_minus: int
    n_discard: int = 0
    n_total: int = -1

    def __post_init__(self):
        if self.n_total == -1:
            object.__setattr__(self, "n_total", self.n_plus + self.n_minus + self.n_discard)
        if min(self.n_plus, self.n_minus, self.n_discard) < 0:
            raise ValueError(f"Counts must be non-negative: {self}")
        if self.n_plus + self.n_minus + self.n_discard != self.n_total:
            raise ValueError(f"Counts do not add up to n_total: {self}")

    @property
    def n_kept(self) -> int:
        return self.n_plus + self.n_minus

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "OutcomeCounts":
        """Tally an array of PLUS/MINUS/DISCARD outcome codes"""
        tally = np.bincount(np.asarray(codes, dtype=np.int64), minlength=3)
        return cls(int(tally[PLUS]), int(tally[MINUS]), int(tally[DISCARD]))

    @classmethod
    def from_array(cls, values: Iterable[int]) -> "OutcomeCounts":
        n_plus, n_minus, n_discard = (int(v) for v in values)
        return cls(n_plus, n_minus, n_discard)


@dataclass(frozen=True)
class ComponentEstimate:
    value: float
    degenerate: bool = False


def calibration_D(epsilon: float, a: float) -> float:
    """D(ε, a) such that P₊ − P₋ = c·D for a weak stage on component c"""
    s = math.sqrt(epsilon / 2.0)
    return 0.5 * (erfc((a - 1.0) * s) - erfc((a + 1.0) * s))


def damping_correction(total_eps: float) -> float:
    """e^{total_eps/2}, undoing the transverse damping of earlier weak stages"""
    if total_eps / 2.0 > MAX_LOG_ESTIMATE:
        raise ValueError(f"Damping correction e^({total_eps:g}/2) is too large: "
                         f"squared estimates would overflow")
    return math.exp(total_eps / 2.0)


def _log_gain(epsilon: float, a: float, estimator: EstimatorKind) -> float:
    # Largest factor a weak-stage estimator applies to the count asymmetry
    if estimator is EstimatorKind.KEPT:
        return 0.0
    return -math.log(max(calibration_D(epsilon, a), D_MIN))


def log_estimate_bound(eps1: float, eps2: float, a: float,
                       estimator: Optional[EstimatorKind] = None, disk: bool = False) -> float:
    """Upper bound on log|component| for any estimate a weak scheme can produce"""
    estimator = estimator or EstimatorKind.CALIBRATED
    if disk:
        return max(eps1 / 2.0, _log_gain(eps1, a, estimator))
    return max(_log_gain(eps1, a, estimator),
               eps1 / 2.0 + _log_gain(eps2, a, estimator),
               (eps1 + eps2) / 2.0)


def estimate_weak_component(counts: OutcomeCounts, D: float, correction: float) -> ComponentEstimate:
    """correction · (n₊ − n₋) / (n_total · D); degenerate when nothing informative was kept"""
    if counts.n_total == 0 or D < D_MIN or counts.n_kept == 0:
        return ComponentEstimate(0.0, True)
    return ComponentEstimate(correction * (counts.n_plus - counts.n_minus) / (counts.n_total * D))


def estimate_kept_component(counts: OutcomeCounts, correction: float) -> ComponentEstimate:
    """correction · (n₊ − n₋) / (n₊ + n₋)"""
    if counts.n_kept == 0:
        return ComponentEstimate(0.0, True)
    return ComponentEstimate(correction * (counts.n_plus - counts.n_minus) / counts.n_kept)


def estimate_projective_component(counts: OutcomeCounts, correction: float) -> ComponentEstimate:
    """correction · (n₊ − n₋) / n_total for a stage without discards"""
    if counts.n_discard:
        raise ValueError(f"Projective stage cannot have discarded readings: {counts}")
    if counts.n_total == 0:
        return ComponentEstimate(0.0, True)
    return ComponentEstimate(correction * (counts.n_plus - counts.n_minus) / counts.n_total)


def estimate_weak_stage(counts: OutcomeCounts, epsilon: float, a: float, correction: float,
                        estimator: EstimatorKind = EstimatorKind.CALIBRATED) -> ComponentEstimate:
    """Weak-stage estimate with the chosen estimator"""
    if estimator is EstimatorKind.KEPT:
        return estimate_kept_component(counts, correction)
    return estimate_weak_component(counts, calibration_D(epsilon, a), correction)


def assemble_full_estimate(cz: OutcomeCounts, cx: OutcomeCounts, cy: OutcomeCounts,
                           eps1: float, eps2: float, a: float,
                           estimator: EstimatorKind = EstimatorKind.CALIBRATED) -> EstimateVector:
    """Bloch estimate from the weak-σz, weak-σx and projective-σy stages"""
    z = estimate_weak_stage(cz, eps1, a, 1.0, estimator)
    x = estimate_weak_stage(cx, eps2, a, damping_correction(eps1), estimator)
    y = estimate_projective_component(cy, damping_correction(eps1 + eps2))
    return EstimateVector(x.value, y.value, z.value,
                          degenerate=(x.degenerate, y.degenerate, z.degenerate))


def assemble_projective_estimate(cx: OutcomeCounts, cy: OutcomeCounts,
                                 cz: OutcomeCounts) -> EstimateVector:
    """Plain frequency estimate from three independent projective thirds"""
    x = estimate_projective_component(cx, 1.0)
    y = estimate_projective_component(cy, 1.0)
    z = estimate_projective_component(cz, 1.0)
    return EstimateVector(x.value, y.value, z.value,
                          degenerate=(x.degenerate, y.degenerate, z.degenerate))


def assemble_disk_estimate(weak_z: OutcomeCounts, proj_x: OutcomeCounts,
                           weak_x: OutcomeCounts, proj_z: OutcomeCounts,
                           epsilon: float, a: float,
                           estimator: EstimatorKind = EstimatorKind.CALIBRATED) -> EstimateVector:
    """
    Disk estimate from two halves: (weak σz, projective σx) and (weak σx, projective σz).

    Half estimates are averaged with equal weight; y is 0 by construction.
    """
    correction = damping_correction(epsilon)
    z_a = estimate_weak_stage(weak_z, epsilon, a, 1.0, estimator)
    x_a = estimate_projective_component(proj_x, correction)
    x_b = estimate_weak_stage(weak_x, epsilon, a, 1.0, estimator)
    z_b = estimate_projective_component(proj_z, correction)
    return EstimateVector(
        (x_a.value + x_b.value) / 2.0,
        0.0,
        (z_a.value + z_b.value) / 2.0,
        degenerate=(x_a.degenerate or x_b.degenerate, False, z_a.degenerate or z_b.degenerate),
    )


def assemble_projective_disk_estimate(cx: OutcomeCounts, cz: OutcomeCounts) -> EstimateVector:
    x = estimate_projective_component(cx, 1.0)
    z = estimate_projective_component(cz, 1.0)
    return EstimateVector(x.value, 0.0, z.value, degenerate=(x.degenerate, False, z.degenerate))


# -------------------------------------------
# Analytic baselines
# -------------------------------------------

def projective_fidelity_law(state: BlochVector, n: int) -> float:
    """E[f] for the projective thirds scheme: 1 − Σ(1 − nᵢ²)/(N/3)"""
    m = n // 3
    return 1.0 - sum(1.0 - c * c for c in (state.x, state.y, state.z)) / m


def projective_fidelity_variance(state: BlochVector, n: int) -> float:
    """Var[f] for the projective thirds scheme (sum of binomial squared-error variances)"""
    m = n // 3
    total = 0.0
    for c in (state.x, state.y, state.z):
        pq = (1.0 + c) * (1.0 - c) / 4.0
        second = 4.0 * pq / m
        fourth = 16.0 * pq * (1.0 + 3.0 * (m - 2) * pq) / m ** 3
        total += fourth - second * second
    return total


def projective_disk_fidelity_law(state: BlochVector, n: int) -> float:
    """E[f] for the projective halves scheme on the y = 0 disk"""
    m = n // 2
    return 1.0 - ((1.0 - state.x ** 2) + (1.0 - state.z ** 2)) / m
