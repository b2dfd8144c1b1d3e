"""
Estimator tests
"""
import math

import numpy as np
import pytest
from scipy import stats

from src.core.bloch import RHO1, RHO2, BlochVector, fidelity
from src.core.estimator import (
    MAX_LOG_ESTIMATE,
    EstimatorKind,
    OutcomeCounts,
    assemble_disk_estimate,
    assemble_full_estimate,
    assemble_projective_disk_estimate,
    assemble_projective_estimate,
    calibration_D,
    damping_correction,
    estimate_kept_component,
    estimate_projective_component,
    estimate_weak_component,
    estimate_weak_stage,
    log_estimate_bound,
    projective_disk_fidelity_law,
    projective_fidelity_law,
    projective_fidelity_variance,
)
from src.core.pointer import (
    DISCARD,
    MINUS,
    PLUS,
    StageProbabilities,
    erf,
    stage_probs_projective,
    stage_probs_projective_y,
    stage_probs_weak_x,
    stage_probs_weak_z,
)


def expected_counts(probs: StageProbabilities, n: int) -> OutcomeCounts:
    """Counts closest to n times the stage probabilities"""
    n_plus = round(probs.p_plus * n)
    if probs.p_discard == 0.0:
        return OutcomeCounts(n_plus, n - n_plus)
    n_minus = min(round(probs.p_minus * n), n - n_plus)
    return OutcomeCounts(n_plus, n_minus, n - n_plus - n_minus)


# -------------------------------------------
# OutcomeCounts
# -------------------------------------------

def test_counts_fill_total():
    counts = OutcomeCounts(3, 4, 5)
    assert counts.n_total == 12
    assert counts.n_kept == 7


def test_counts_reject_inconsistent_total():
    with pytest.raises(ValueError, match="add up"):
        OutcomeCounts(3, 4, 5, n_total=10)
    with pytest.raises(ValueError, match="non-negative"):
        OutcomeCounts(-1, 2)


def test_counts_from_codes():
    codes = np.array([PLUS, PLUS, MINUS, DISCARD, PLUS], dtype=np.int8)
    assert OutcomeCounts.from_codes(codes) == OutcomeCounts(3, 1, 1)


# -------------------------------------------
# Component estimates
# -------------------------------------------

def test_weak_component_arithmetic():
    est = estimate_weak_component(OutcomeCounts(20, 10, 0), D=1.0, correction=1.0)
    assert est.value == pytest.approx(1 / 3)
    assert not est.degenerate


def test_weak_component_all_discarded_is_degenerate():
    est = estimate_weak_component(OutcomeCounts(0, 0, 30), D=0.5, correction=1.0)
    assert est.degenerate
    assert est.value == 0.0


def test_weak_component_vanishing_calibration_is_degenerate():
    est = estimate_weak_stage(OutcomeCounts(10, 5, 15), epsilon=2.0, a=50.0, correction=1.0)
    assert est.degenerate


def test_weak_component_divides_by_all_copies():
    est = estimate_weak_component(OutcomeCounts(12, 6, 12), D=0.5, correction=2.0)
    assert est.value == pytest.approx(2.0 * 6 / (30 * 0.5))


def test_kept_component_uses_kept_readings():
    est = estimate_kept_component(OutcomeCounts(20, 10, 5), correction=1.0)
    assert est.value == pytest.approx(1 / 3)
    assert estimate_kept_component(OutcomeCounts(0, 0, 5), 1.0).degenerate


def test_projective_component_correction():
    est = estimate_projective_component(OutcomeCounts(30, 0), correction=math.exp(0.5))
    assert est.value == pytest.approx(1.6487, abs=1e-4)


def test_projective_component_rejects_discards():
    with pytest.raises(ValueError, match="discarded"):
        estimate_projective_component(OutcomeCounts(10, 10, 1), 1.0)


# -------------------------------------------
# Calibration
# -------------------------------------------

@pytest.mark.parametrize("eps, a", [(1.0, 0.8), (0.3, 0.0), (2.0, 0.5), (0.05, 1.2)])
def test_calibration_matches_gaussian_tails(eps, a):
    width = 1.0 / math.sqrt(eps)
    # Reading distribution of a +1 eigenstate: P(q > a) − P(q < −a)
    oracle = stats.norm.sf(a, loc=1.0, scale=width) - stats.norm.cdf(-a, loc=1.0, scale=width)
    assert calibration_D(eps, a) == pytest.approx(oracle, abs=1e-12)


def test_calibration_without_discard_is_erf():
    for eps in (0.1, 0.5, 3.0):
        assert calibration_D(eps, 0.0) == pytest.approx(erf(math.sqrt(eps / 2)), abs=1e-15)


def test_calibration_links_stage_asymmetry():
    for z in (-0.9, 0.1, 0.55):
        probs = stage_probs_weak_z(z, 0.8, 0.4)
        assert probs.p_plus - probs.p_minus == pytest.approx(z * calibration_D(0.8, 0.4), abs=1e-14)


def test_damping_correction_guards_overflow():
    assert damping_correction(0.6) == pytest.approx(math.exp(0.3))
    assert math.isfinite(3 * (2 * damping_correction(2 * MAX_LOG_ESTIMATE)) ** 2)
    with pytest.raises(ValueError, match="too large"):
        damping_correction(800.0)


def test_log_estimate_bound():
    assert log_estimate_bound(0.4, 0.6, 0.0, EstimatorKind.KEPT) == pytest.approx(0.5)
    assert log_estimate_bound(1.0, 1.0, 0.3, EstimatorKind.KEPT, disk=True) == pytest.approx(0.5)
    calibrated = log_estimate_bound(0.4, 0.6, 0.0)
    assert calibrated == log_estimate_bound(0.4, 0.6, 0.0, EstimatorKind.CALIBRATED)
    assert calibrated == pytest.approx(0.2 - math.log(calibration_D(0.6, 0.0)))
    # strong discards shrink D, so the calibrated gain grows
    assert log_estimate_bound(0.4, 0.6, 0.8) > calibrated
    assert log_estimate_bound(400.0, 400.0, 0.0, EstimatorKind.KEPT) > MAX_LOG_ESTIMATE


# -------------------------------------------
# Assembly
# -------------------------------------------

def test_full_estimate_recovers_state_from_expected_counts():
    n = 3000
    eps1, eps2, a = 0.5, 0.5, 0.2
    cz = expected_counts(stage_probs_weak_z(RHO2.z, eps1, a), n)
    cx = expected_counts(stage_probs_weak_x(RHO2.x, eps1, eps2, a), n)
    cy = expected_counts(stage_probs_projective_y(RHO2.y, eps1, eps2), n)
    est = assemble_full_estimate(cz, cx, cy, eps1, eps2, a)
    assert not est.is_degenerate
    assert np.allclose(est.as_array(), RHO2.as_array(), atol=5 / n)


def test_full_estimate_kept_shrinks_toward_origin():
    n = 3000
    eps1, eps2, a = 0.5, 0.5, 0.0
    cz = expected_counts(stage_probs_weak_z(0.8, eps1, a), n)
    cx = expected_counts(stage_probs_weak_x(0.0, eps1, eps2, a), n)
    cy = expected_counts(stage_probs_projective_y(0.0, eps1, eps2), n)
    kept = assemble_full_estimate(cz, cx, cy, eps1, eps2, a, EstimatorKind.KEPT)
    calibrated = assemble_full_estimate(cz, cx, cy, eps1, eps2, a, EstimatorKind.CALIBRATED)
    assert kept.z == pytest.approx(0.8 * erf(0.5), abs=5 / n)
    assert calibrated.z == pytest.approx(0.8, abs=5 / n)


def test_disk_estimate_averages_halves():
    n = 4000
    state = BlochVector(0.6, 0.0, -0.5)
    eps, a = 1.0, 0.3
    est = assemble_disk_estimate(
        expected_counts(stage_probs_weak_z(state.z, eps, a), n),
        expected_counts(stage_probs_projective(state.x, eps), n),
        expected_counts(stage_probs_weak_z(state.x, eps, a), n),
        expected_counts(stage_probs_projective(state.z, eps), n),
        eps, a,
    )
    assert est.y == 0.0
    assert est.x == pytest.approx(0.6, abs=5 / n)
    assert est.z == pytest.approx(-0.5, abs=5 / n)


def test_disk_estimate_flags_degenerate_half():
    est = assemble_disk_estimate(
        OutcomeCounts(0, 0, 10), OutcomeCounts(5, 5),
        OutcomeCounts(4, 3, 3), OutcomeCounts(6, 4),
        1.0, 0.3,
    )
    assert est.degenerate == (False, False, True)


def test_projective_assembly():
    est = assemble_projective_estimate(OutcomeCounts(10, 0), OutcomeCounts(5, 5), OutcomeCounts(0, 10))
    assert est.as_array().tolist() == [1.0, 0.0, -1.0]
    disk = assemble_projective_disk_estimate(OutcomeCounts(3, 1), OutcomeCounts(1, 3))
    assert disk.as_array().tolist() == [0.5, 0.0, -0.5]


# -------------------------------------------
# Projective baselines
# -------------------------------------------

def test_projective_law_for_rho1():
    assert projective_fidelity_law(RHO1, 30) == pytest.approx(0.7307598, abs=1e-7)


def test_projective_disk_law():
    assert projective_disk_fidelity_law(BlochVector(0.6, 0.0, -0.5), 30) == pytest.approx(0.907333, abs=1e-6)


def _exact_projective_moments(state: BlochVector, n: int):
    """Mean and variance of the fidelity by enumerating the binomial outcomes"""
    m = n // 3
    k = np.arange(m + 1)
    mean, var = 1.0, 0.0
    for c in state.as_array():
        pmf = stats.binom.pmf(k, m, (1 + c) / 2)
        err2 = (2 * k / m - 1 - c) ** 2
        e1 = np.sum(pmf * err2)
        e2 = np.sum(pmf * err2 ** 2)
        mean -= e1
        var += e2 - e1 ** 2
    return mean, var


@pytest.mark.parametrize("state", [RHO1, RHO2, BlochVector(0.0, 0.0, 0.0), BlochVector(0.3, -0.2, 0.9)])
@pytest.mark.parametrize("n", [30, 60, 90])
def test_projective_moments_match_enumeration(state, n):
    mean, var = _exact_projective_moments(state, n)
    assert projective_fidelity_law(state, n) == pytest.approx(mean, abs=1e-12)
    assert projective_fidelity_variance(state, n) == pytest.approx(var, abs=1e-12)


def test_projective_law_matches_sampled_fidelity():
    gen = np.random.default_rng(31)
    m = 10
    fidelities = []
    for _ in range(20_000):
        counts = [gen.binomial(m, (1 + c) / 2) for c in RHO1.as_array()]
        est = assemble_projective_estimate(*(OutcomeCounts(k, m - k) for k in counts))
        fidelities.append(fidelity(RHO1, est))
    std = math.sqrt(projective_fidelity_variance(RHO1, 30))
    assert abs(np.mean(fidelities) - projective_fidelity_law(RHO1, 30)) < 4 * std / math.sqrt(20_000)
