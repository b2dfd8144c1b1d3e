"""
Weak Tomography - Bloch Algebra
Single-qubit states as Bloch vectors and 2x2 density matrices, plus the fidelity metric

Complex arithmetic is confined to this module; everything downstream works on
Bloch components.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

PHYSICAL_TOL = 1e-9
TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12


class PauliAxis(str, Enum):
    """Measurement axis"""
    X = "x"
    Y = "y"
    Z = "z"


@dataclass(frozen=True)
class BlochVector:
    """Point (x, y, z) representing a qubit state ρ = ½(I + n·σ)"""
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @classmethod
    def from_array(cls, values) -> "BlochVector":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)


@dataclass(frozen=True)
class EstimateVector:
    """
    Estimated Bloch coordinates.

    Same shape as BlochVector but unconstrained: estimates may leave the
    unit ball and are never clamped. `degenerate` holds one flag per
    component (x, y, z) for components whose data were uninformative.
    """
    x: float
    y: float
    z: float
    degenerate: Tuple[bool, bool, bool] = (False, False, False)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def is_degenerate(self) -> bool:
        return any(self.degenerate)


@dataclass(frozen=True)
class DensityMatrix:
    """Four complex entries of a 2x2 density matrix"""
    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]], dtype=complex)

    def trace(self) -> complex:
        return self.rho00 + self.rho11

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return (
            abs(self.rho10 - self.rho01.conjugate()) <= tol
            and abs(self.rho00.imag) <= tol
            and abs(self.rho11.imag) <= tol
        )

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.as_matrix())


# Built-in example states (Bloch coordinates are taken as ground truth)
RHO1 = BlochVector(-0.385, -0.042, 0.397)
RHO2 = BlochVector(-0.601, 0.398, 0.055)

NAMED_STATES: Dict[str, BlochVector] = {
    "rho1": RHO1,
    "rho2": RHO2,
}


def named_state(name: str) -> BlochVector:
    """Look up one of the built-in example states"""
    try:
        return NAMED_STATES[name.lower()]
    except KeyError:
        known = ", ".join(sorted(NAMED_STATES))
        raise ValueError(f"Unknown state '{name}' (known: {known})") from None


def is_physical(n: BlochVector, tol: float = PHYSICAL_TOL) -> bool:
    return n.x * n.x + n.y * n.y + n.z * n.z <= 1.0 + tol


def require_physical(n: BlochVector) -> BlochVector:
    """Raise ValueError unless n lies in the closed unit ball"""
    if not all(math.isfinite(c) for c in (n.x, n.y, n.z)):
        raise ValueError(f"Bloch vector has non-finite components: {n}")
    if not is_physical(n):
        raise ValueError(f"Bloch vector {n} lies outside the unit ball (|n|={n.norm():.6f})")
    return n


def density_from_bloch(n: BlochVector) -> DensityMatrix:
    """ρ = ½(I + n·σ); physicality is not enforced"""
    return DensityMatrix(
        rho00=complex((1.0 + n.z) / 2.0),
        rho01=complex(n.x, -n.y) / 2.0,
        rho10=complex(n.x, n.y) / 2.0,
        rho11=complex((1.0 - n.z) / 2.0),
    )


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    """Inverse of density_from_bloch; rejects non-Hermitian or non-unit-trace input"""
    if not rho.is_hermitian():
        raise ValueError(f"Density matrix is not Hermitian: {rho}")
    trace = rho.trace()
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValueError(f"Density matrix trace is {trace}, expected 1")
    coherence = rho.rho10 + rho.rho01.conjugate()
    return BlochVector(
        x=float(coherence.real),
        y=float(coherence.imag),
        z=float((rho.rho00 - rho.rho11).real),
    )


def pure_from_polar(alpha: float) -> BlochVector:
    """Bloch vector of cos(α/2)|0⟩ + sin(α/2)|1⟩"""
    return BlochVector(math.sin(alpha), 0.0, math.cos(alpha))


def component(n, axis: PauliAxis) -> float:
    """Named component of a Bloch or estimate vector"""
    if axis is PauliAxis.X:
        return n.x
    if axis is PauliAxis.Y:
        return n.y
    return n.z


def purity(rho: DensityMatrix) -> float:
    """Tr(ρ²) = (1 + |n|²)/2"""
    m = rho.as_matrix()
    return float(np.trace(m @ m).real)


def fidelity(true: BlochVector, est) -> float:
    """f = 1 − squared Euclidean Bloch distance; may be negative"""
    dx = true.x - est.x
    dy = true.y - est.y
    dz = true.z - est.z
    return 1.0 - (dx * dx + dy * dy + dz * dz)
