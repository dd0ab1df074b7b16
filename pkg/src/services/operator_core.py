"""
Dense operator kernels: Pauli strings, bosonic ladders, fast Pauli rotations
and expectation values

Every function here is pure; the cached Pauli action tables are immutable.
"""

import logging
from functools import lru_cache, reduce
from typing import Sequence, Tuple

import numpy as np

from config.settings import IMAGINARY_TOLERANCE
from ..models.operators import PauliString, DenseOperator, StateVector, BosonicMode
from ..utils.errors import InvalidInputError, NumericalError

logger = logging.getLogger(__name__)

SINGLE_QUBIT_PAULIS = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of the factors, first factor leftmost"""
    return reduce(np.kron, factors)


def embed(local: np.ndarray, position: int, dims: Sequence[int]) -> np.ndarray:
    """
    Place a local operator on one tensor factor, identities elsewhere

    Args:
        local: Square matrix acting on factor `position`
        position: Index of the factor (0 is leftmost)
        dims: Dimension of every factor

    Returns:
        Matrix on the full product space
    """
    if local.shape != (dims[position], dims[position]):
        raise InvalidInputError(
            f"Local operator shape {local.shape} does not match factor dimension {dims[position]}"
        )
    factors = [local if i == position else np.eye(d) for i, d in enumerate(dims)]
    return kron_all(factors)


def pauli_matrix(p: PauliString) -> DenseOperator:
    """coefficient * P_0 ⊗ P_1 ⊗ ... with qubit 0 as the leftmost factor"""
    matrix = p.coefficient * kron_all([SINGLE_QUBIT_PAULIS[letter] for letter in p.label])
    return DenseOperator(matrix, hermitian=True)


def pauli_sum_matrix(paulis: Sequence[PauliString]) -> DenseOperator:
    if not paulis:
        raise InvalidInputError("Pauli sum needs at least one term")
    matrix = sum(pauli_matrix(p).matrix for p in paulis)
    return DenseOperator(matrix, hermitian=True)


def boson_ladder(mode: BosonicMode) -> Tuple[DenseOperator, DenseOperator]:
    """
    Truncated annihilation and creation operators

    a|n> = sqrt(n)|n-1>, so the sqrt(n) entries sit on the superdiagonal.
    """
    a = np.diag(np.sqrt(np.arange(1, mode.dim, dtype=float)), k=1)
    return DenseOperator(a), DenseOperator(a.T.copy())


def number_operator(mode: BosonicMode) -> DenseOperator:
    a, a_dag = boson_ladder(mode)
    return DenseOperator(a_dag.matrix @ a.matrix, hermitian=True)


@lru_cache(maxsize=1024)
def _pauli_action(label: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Permutation and phases with (P psi) = phases * psi[perm] for unit-weight P

    P = i^{#Y} X^x Z^z, and Z^z contributes (-1)^{popcount(b & z)} on |b>.
    """
    p = PauliString(label)
    signs = kron_all([
        np.array([1.0, -1.0]) if letter in "ZY" else np.array([1.0, 1.0])
        for letter in label
    ])
    perm = np.arange(p.dim) ^ p.x_mask
    phases = (1j ** p.y_count) * signs[perm]
    perm.setflags(write=False)
    phases.setflags(write=False)
    return perm, phases


def apply_pauli(amplitudes: np.ndarray, p: PauliString) -> np.ndarray:
    """P|psi> for the unit-weight string (the coefficient is ignored)"""
    perm, phases = _pauli_action(p.label)
    return phases * amplitudes[perm]


def pauli_rotation(amplitudes: np.ndarray, p: PauliString, angle: float) -> np.ndarray:
    """exp(-i angle c P)|psi> on a raw amplitude array, c the string's coefficient"""
    theta = angle * p.coefficient
    return np.cos(theta) * amplitudes - 1j * np.sin(theta) * apply_pauli(amplitudes, p)


def apply_pauli_exponential(state: StateVector, p: PauliString, angle: float) -> StateVector:
    """
    Apply exp(-i angle P) with the analytic cos/sin form

    The string's coefficient is folded into the angle, so a unit-coefficient
    string rotates by exactly `angle`.

    Args:
        state: Input state on len(p.label) qubits
        p: Pauli string
        angle: Rotation angle in radians

    Returns:
        cos(angle) psi - i sin(angle) P psi
    """
    if state.dim != p.dim:
        raise InvalidInputError(f"State dimension {state.dim} does not match {p.n_qubits}-qubit Pauli")
    return StateVector(pauli_rotation(state.amplitudes, p, angle))


def expectation_value(amplitudes: np.ndarray, matrix: np.ndarray) -> float:
    value = np.vdot(amplitudes, matrix @ amplitudes)
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise NumericalError(f"Expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectation(state: StateVector, obs: DenseOperator) -> float:
    """<psi|O|psi> for a Hermitian observable"""
    if obs.dim != state.dim:
        raise InvalidInputError(f"Observable dimension {obs.dim} does not match state dimension {state.dim}")
    if not obs.is_hermitian():
        raise InvalidInputError(
            f"Observable is not Hermitian (deviation {obs.hermiticity_deviation():.3e})"
        )
    return expectation_value(state.amplitudes, obs.matrix)


def spectral_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest singular value of a - b"""
    return float(np.linalg.norm(a - b, ord=2))
