"""
Weak Tomography - Pointer Measurement Engine
Von Neumann Gaussian-pointer measurement of a Pauli observable

The pointer starts in a Gaussian of parameter ε (g fixed to 1, so ε = κ).
Conditioned on eigenvalue ±1 the reading q is Normal(±1, 1/ε). Readings in
the closed interval [−a, a] are discarded; the measured copy is kept.
"""
import math
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple

import numpy as np
from scipy import special

from .bloch import BlochVector, PauliAxis, component

PROB_TOL = 1e-10

# Outcome codes used by the vectorized helpers
PLUS, MINUS, DISCARD = 0, 1, 2

_erf_offset = 0.0


class Outcome(str, Enum):
    """Classified pointer reading"""
    PLUS = "plus"
    MINUS = "minus"
    DISCARD = "discard"


_OUTCOME_BY_CODE = {PLUS: Outcome.PLUS, MINUS: Outcome.MINUS, DISCARD: Outcome.DISCARD}


@dataclass(frozen=True)
class PointerConfig:
    """Coupling strength ε and discard half-width a for one weak measurement"""
    epsilon: float
    discard_a: float = 0.0

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be a positive finite number, got {self.epsilon}")
        if not (self.discard_a >= 0 and math.isfinite(self.discard_a)):
            raise ValueError(f"discard_a must be >= 0, got {self.discard_a}")


@dataclass(frozen=True)
class StageProbabilities:
    """Outcome probabilities of one measurement stage"""
    p_plus: float
    p_minus: float
    p_discard: float = 0.0

    def __post_init__(self):
        for name in ("p_plus", "p_minus", "p_discard"):
            value = getattr(self, name)
            if not (-PROB_TOL <= value <= 1.0 + PROB_TOL):
                raise ValueError(f"{name}={value} is not a probability")
        total = self.p_plus + self.p_minus + self.p_discard
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"Stage probabilities sum to {total}, expected 1")

    def as_array(self) -> np.ndarray:
        """Probabilities clipped to [0, 1] and renormalized, ready for multinomial draws"""
        p = np.clip(np.array([self.p_plus, self.p_minus, self.p_discard]), 0.0, 1.0)
        return p / p.sum()


# -------------------------------------------
# Error function
# -------------------------------------------

def erf(x):
    """Error function (scipy), plus any offset injected for fault testing"""
    value = special.erf(x)
    if _erf_offset:
        value = value + _erf_offset
    return float(value) if np.ndim(value) == 0 else value


def erfc(x):
    """Complementary error function, defined as 1 − erf(x)"""
    return 1.0 - erf(x)


def erf_offset() -> float:
    return _erf_offset


def set_erf_offset(delta: float) -> None:
    """Set the process-wide erf offset; also the initializer of sweep worker processes"""
    global _erf_offset
    _erf_offset = delta


@contextmanager
def inject_erf_error(delta: float) -> Iterator[None]:
    """Temporarily add `delta` to every erf evaluation (validation fault hook)"""
    previous = _erf_offset
    set_erf_offset(delta)
    try:
        yield
    finally:
        set_erf_offset(previous)


# -------------------------------------------
# Axis helpers
# -------------------------------------------

def split_axis(state: BlochVector, axis: PauliAxis) -> Tuple[float, float, float]:
    """(along, transverse_1, transverse_2) for the given axis"""
    if axis is PauliAxis.Z:
        return state.z, state.x, state.y
    if axis is PauliAxis.X:
        return state.x, state.y, state.z
    return state.y, state.z, state.x


def join_axis(axis: PauliAxis, along: float, t1: float, t2: float) -> BlochVector:
    """Inverse of split_axis"""
    if axis is PauliAxis.Z:
        return BlochVector(float(t1), float(t2), float(along))
    if axis is PauliAxis.X:
        return BlochVector(float(along), float(t1), float(t2))
    return BlochVector(float(t2), float(along), float(t1))


# -------------------------------------------
# Pointer densities
# -------------------------------------------

def gaussian_weight(q, sign: int, epsilon: float):
    """Unnormalized pointer weight e^{−ε(q∓1)²/2}"""
    return np.exp(-epsilon * (q - sign) ** 2 / 2.0)


def pointer_density(q, along: float, epsilon: float):
    """Probability density of reading q for a copy with the given axis component"""
    norm = math.sqrt(epsilon / (2.0 * math.pi))
    p_plus = (1.0 + along) / 2.0
    return norm * (p_plus * gaussian_weight(q, 1, epsilon)
                   + (1.0 - p_plus) * gaussian_weight(q, -1, epsilon))


# -------------------------------------------
# Vectorized engine (arrays of copies)
# -------------------------------------------

def sample_pointer_readings(along: np.ndarray, epsilon: float,
                            rng: np.random.Generator) -> np.ndarray:
    """One pointer reading per copy, given each copy's component along the measured axis"""
    along = np.asarray(along, dtype=float)
    signs = np.where(rng.random(along.shape) < (1.0 + along) / 2.0, 1.0, -1.0)
    return signs + rng.normal(0.0, 1.0 / math.sqrt(epsilon), size=along.shape)


def classify_readings(q: np.ndarray, discard_a: float) -> np.ndarray:
    """Outcome codes: PLUS for q > a, MINUS for q < −a, DISCARD otherwise"""
    q = np.asarray(q, dtype=float)
    codes = np.full(q.shape, DISCARD, dtype=np.int8)
    codes[q > discard_a] = PLUS
    codes[q < -discard_a] = MINUS
    return codes


def kraus_update_arrays(along: np.ndarray, t1: np.ndarray, t2: np.ndarray,
                        epsilon: float, q: np.ndarray):
    """
    Conditional post-measurement state for each copy.

    Weights are handled in the log domain and rescaled by their maximum so
    strong couplings do not underflow; the update is invariant to that scale.
    """
    log_wp = -epsilon * (q - 1.0) ** 2 / 2.0
    log_wm = -epsilon * (q + 1.0) ** 2 / 2.0
    top = np.maximum(log_wp, log_wm)
    wp = np.exp(log_wp - top)
    wm = np.exp(log_wm - top)
    cross = np.exp(0.5 * (log_wp + log_wm) - top)

    up = wp * (1.0 + along)
    down = wm * (1.0 - along)
    norm = up + down
    assert np.all(norm > 1e-300), "degenerate Kraus normalization"

    shrink = 2.0 * cross / norm
    return (up - down) / norm, t1 * shrink, t2 * shrink


def sample_projective(along: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Projective ±1 outcome codes (PLUS/MINUS) for each copy"""
    along = np.asarray(along, dtype=float)
    return np.where(rng.random(along.shape) < (1.0 + along) / 2.0, PLUS, MINUS).astype(np.int8)


# -------------------------------------------
# Scalar operations
# -------------------------------------------

def sample_pointer_reading(state: BlochVector, axis: PauliAxis, cfg: PointerConfig,
                           rng: np.random.Generator) -> float:
    along = np.array([component(state, axis)])
    return float(sample_pointer_readings(along, cfg.epsilon, rng)[0])


def classify(q: float, cfg: PointerConfig) -> Outcome:
    return _OUTCOME_BY_CODE[int(classify_readings(np.array([q]), cfg.discard_a)[0])]


def kraus_update(state: BlochVector, axis: PauliAxis, epsilon: float, q: float) -> BlochVector:
    """State of one copy after reading q on the pointer coupled to `axis`"""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    along, t1, t2 = split_axis(state, axis)
    new_along, new_t1, new_t2 = kraus_update_arrays(
        np.array([along]), np.array([t1]), np.array([t2]), epsilon, np.array([float(q)])
    )
    return join_axis(axis, new_along[0], new_t1[0], new_t2[0])


def unconditional_update(state: BlochVector, axis: PauliAxis, epsilon: float) -> BlochVector:
    """Reading-averaged state: transverse components damped by e^{−ε/2}"""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    along, t1, t2 = split_axis(state, axis)
    damping = math.exp(-epsilon / 2.0)
    return join_axis(axis, along, t1 * damping, t2 * damping)


# -------------------------------------------
# Closed-form stage probabilities
# -------------------------------------------

def stage_probs_weak_z(z: float, eps1: float, a: float) -> StageProbabilities:
    """Outcome probabilities of a weak σz measurement with discard region [−a, a]"""
    s = math.sqrt(eps1 / 2.0)
    erfc_lo = erfc((a - 1.0) * s)
    erfc_hi = erfc((a + 1.0) * s)
    p_plus = 0.25 * ((1.0 + z) * erfc_lo + (1.0 - z) * erfc_hi)
    p_minus = 0.25 * ((1.0 - z) * erfc_lo + (1.0 + z) * erfc_hi)
    p_discard = 0.5 * (erf((a - 1.0) * s) + erf((a + 1.0) * s))
    return StageProbabilities(max(p_plus, 0.0), max(p_minus, 0.0), max(p_discard, 0.0))


def stage_probs_weak_x(x: float, eps1: float, eps2: float, a: float) -> StageProbabilities:
    """
    Weak σx stage (strength ε₂) on copies already weakly measured along z (strength ε₁).

    The first measurement damps x by e^{−ε₁/2}; the discard probability uses ε₂
    so the three probabilities are normalized.
    """
    return stage_probs_weak_z(math.exp(-eps1 / 2.0) * x, eps2, a)


def stage_probs_projective(value: float, damping_eps: float = 0.0) -> StageProbabilities:
    """Projective stage on a component damped by e^{−damping_eps/2}"""
    signal = math.exp(-damping_eps / 2.0) * value
    return StageProbabilities(0.5 * (1.0 + signal), 0.5 * (1.0 - signal), 0.0)


def stage_probs_projective_y(y: float, eps1: float, eps2: float) -> StageProbabilities:
    """Projective σy after the two weak stages"""
    return stage_probs_projective(y, eps1 + eps2)
