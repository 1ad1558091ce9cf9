"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the code paths under test: matrix
exponentials go through numpy's eigendecomposition instead of the
closed-form rotation formulas, detunings are retyped from scratch, and
derivatives come from finite differences rather than the analytic
expressions carried by curves.
"""

import numpy as np

from ghzforge.algebra import build_generators
from ghzforge.unitary import RotationPair, exp_map

GENS = build_generators()


def expm_eig(hermitian: np.ndarray) -> np.ndarray:
    """e^{-iH} for Hermitian H via eigendecomposition."""
    evals, evecs = np.linalg.eigh(hermitian)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def exp_map_reference(pair: RotationPair) -> np.ndarray:
    left = sum(pair.left[i] * GENS.left[i] for i in range(3))
    right = sum(pair.right[i] * GENS.right[i] for i in range(3))
    return expm_eig(left) @ expm_eig(right)


def detunings_reference(stark_amp: float, detuning0: float, blockade: float):
    """Stark-cancelling detunings, typed independently term by term."""
    s2 = stark_amp * stark_amp
    a = s2 / detuning0
    b = s2 / (detuning0 + blockade)
    c = s2 / (detuning0 + 2.0 * blockade)
    return (6.0 * a - 4.0 * b, -3.0 * a + 8.0 * b - 3.0 * c, -4.0 * b + 6.0 * c)


class FourierCurve:
    """Smooth random rotation-vector curve with analytic derivatives.

    Each component of each vector is a short sine series, so both the
    value and the exact time derivative are available at any t.
    """

    def __init__(self, rng: np.random.Generator, modes: int = 3, scale: float = 1.5):
        self.amp_left = rng.normal(0.0, scale, (3, modes))
        self.amp_right = rng.normal(0.0, scale, (3, modes))
        self.freq = rng.uniform(0.5, 3.0, modes)
        self.phase_left = rng.uniform(0.0, 2.0 * np.pi, (3, modes))
        self.phase_right = rng.uniform(0.0, 2.0 * np.pi, (3, modes))

    def _eval(self, amps, phases, t):
        arg = self.freq * t + phases
        value = np.sum(amps * np.sin(arg), axis=1)
        rate = np.sum(amps * self.freq * np.cos(arg), axis=1)
        return value, rate

    def at(self, t: float):
        left, left_dot = self._eval(self.amp_left, self.phase_left, t)
        right, right_dot = self._eval(self.amp_right, self.phase_right, t)
        return left, right, left_dot, right_dot

    def unitary(self, t: float) -> np.ndarray:
        left, right, _, _ = self.at(t)
        return exp_map(RotationPair(left, right), GENS)


def schroedinger_residual(curve: FourierCurve, hamiltonian: np.ndarray, t: float, h: float) -> float:
    """Max-norm of i dU/dt - H U with a central finite difference."""
    du = (curve.unitary(t + h) - curve.unitary(t - h)) / (2.0 * h)
    return float(np.max(np.abs(1j * du - hamiltonian @ curve.unitary(t))))


PERMUTATIONS_3 = (
    (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0),
)


def atom_permutation_matrix(perm) -> np.ndarray:
    """8x8 operator permuting the three atom slots of |b1 b2 b3>."""
    op = np.zeros((8, 8))
    for idx in range(8):
        bits = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
        new_bits = tuple(bits[p] for p in perm)
        target = (new_bits[0] << 2) | (new_bits[1] << 1) | new_bits[2]
        op[target, idx] = 1.0
    return op
