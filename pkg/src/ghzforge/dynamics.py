"""From parameter curves to Hamiltonians, and back to laser amplitudes.

A differentiable curve t -> (left(t), right(t)) of rotation vectors
induces, through i dU/dt = H U, a Hamiltonian that stays inside the
algebra: H = w_left . L + w_right . R with vectorial rates w computed
from the curve and its velocity.  Physical drives can only realize
Hamiltonians of the ladder form, which pins three components of the
rates to zero or to each other; those constraints and the linear map
between rate components and the three Rabi amplitudes live here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GeneratorSet, build_generators

__all__ = [
    "ConstraintViolation",
    "RabiTriple",
    "CurveSample",
    "VectorialRabi",
    "ConstraintReport",
    "effective_hamiltonian",
    "ladder_hamiltonian",
    "rotation_rate",
    "vectorial_rabi",
    "check_constraints",
    "rabi_from_vectorial",
    "vectorial_from_rabi",
]

_SERIES_CUTOFF = 1e-6
DEFAULT_CONSTRAINT_TOL = 1e-9


class ConstraintViolation(ValueError):
    """Vectorial rates are not realizable by real ladder drives."""


@dataclass(frozen=True)
class RabiTriple:
    """Real Rabi amplitudes of the three ladder transitions."""

    omega1: float
    omega2: float
    omega3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.omega1, self.omega2, self.omega3], dtype=float)


@dataclass(frozen=True)
class CurveSample:
    """One point of a parameter curve with its velocity."""

    t: float
    left: np.ndarray
    right: np.ndarray
    left_dot: np.ndarray
    right_dot: np.ndarray


@dataclass(frozen=True)
class VectorialRabi:
    """Rotation rates w_left, w_right induced by a curve point."""

    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class ConstraintReport:
    residuals: np.ndarray
    tol: float

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def effective_hamiltonian(rabi: RabiTriple, gens: GeneratorSet | None = None) -> np.ndarray:
    """Hermitian 4x4 Hamiltonian as a combination of the generators.

    O1 couples through the sum of the two x generators, O2 through the
    sum of the y generators, and O3 through the x difference.  Entrywise
    this equals the ladder form built by ladder_hamiltonian().
    """
    if gens is None:
        gens = build_generators()
    return (
        rabi.omega1 * (gens.left[0] + gens.right[0])
        + rabi.omega2 * (gens.left[1] + gens.right[1])
        + rabi.omega3 * (gens.left[0] - gens.right[0])
    )


def ladder_hamiltonian(rabi: RabiTriple) -> np.ndarray:
    """The same Hamiltonian written as nearest-neighbor ladder couplings."""
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = h[1, 0] = rabi.omega1
    h[1, 2] = h[2, 1] = rabi.omega2
    h[2, 3] = h[3, 2] = rabi.omega3
    return h


def rotation_rate(vec: np.ndarray, vec_dot: np.ndarray) -> np.ndarray:
    """Rotation rate w such that i d/dt e^{-i vec.G} = (w.G) e^{-i vec.G}.

    Exact for any smooth rotation-vector path:

        w = sin(n)/n * vdot
          + 2 sin^2(n/2)/n^2 * (vec x vdot)
          + (n - sin n)/n^3 * (vec . vdot) vec

    with n = |vec|; near n = 0 the three coefficients switch to series.
    """
    v = np.asarray(vec, dtype=float)
    vd = np.asarray(vec_dot, dtype=float)
    n = float(np.linalg.norm(v))
    if n < _SERIES_CUTOFF:
        n2 = n * n
        c1 = 1.0 - n2 / 6.0
        c2 = 0.5 - n2 / 24.0
        c3 = 1.0 / 6.0 - n2 / 120.0
    else:
        sn = np.sin(n)
        c1 = sn / n
        c2 = 2.0 * np.sin(n / 2.0) ** 2 / (n * n)
        c3 = (n - sn) / n**3
    return c1 * vd + c2 * np.cross(v, vd) + c3 * float(v @ vd) * v


def vectorial_rabi(sample: CurveSample) -> VectorialRabi:
    """Rotation rates of both curve factors at one sample."""
    return VectorialRabi(
        left=rotation_rate(sample.left, sample.left_dot),
        right=rotation_rate(sample.right, sample.right_dot),
    )


def check_constraints(rates: VectorialRabi, tol: float = DEFAULT_CONSTRAINT_TOL) -> ConstraintReport:
    """Residuals of the realizability conditions on the rotation rates.

    Real ladder drives require both z rates to vanish and the two y
    rates to coincide.  Returns the three residuals in that order.
    """
    residuals = np.array(
        [rates.left[2], rates.right[2], rates.left[1] - rates.right[1]], dtype=float
    )
    return ConstraintReport(residuals=residuals, tol=tol)


def rabi_from_vectorial(rates: VectorialRabi, tol: float = DEFAULT_CONSTRAINT_TOL) -> RabiTriple:
    """Rabi amplitudes realizing constraint-satisfying rotation rates."""
    report = check_constraints(rates, tol)
    if not report.passed:
        raise ConstraintViolation(
            f"rotation rates violate the ladder constraints, max residual {report.max_residual:.3e}"
        )
    return RabiTriple(
        omega1=0.5 * (rates.left[0] + rates.right[0]),
        omega2=0.5 * (rates.left[1] + rates.right[1]),
        omega3=0.5 * (rates.left[0] - rates.right[0]),
    )


def vectorial_from_rabi(rabi: RabiTriple) -> VectorialRabi:
    """Inverse of rabi_from_vectorial on the constraint surface."""
    left = np.array([rabi.omega1 + rabi.omega3, rabi.omega2, 0.0])
    right = np.array([rabi.omega1 - rabi.omega3, rabi.omega2, 0.0])
    return VectorialRabi(left=left, right=right)
