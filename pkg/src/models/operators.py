"""
Operator and state models for the dense linear-algebra substrate

Qubit 0 is the leftmost tensor factor throughout: the label "ZI" is Z on
qubit 0 and acts on the most significant bit of a basis index.
"""

import math
from dataclasses import dataclass

import numpy as np

from config.settings import (
    HERMITIAN_TOLERANCE, UNITARY_TOLERANCE, NORM_TOLERANCE, MAX_DIMENSION
)
from ..utils.errors import InvalidInputError, CapacityError

PAULI_LETTERS = "IXYZ"


@dataclass(frozen=True)
class PauliString:
    """
    A real-weighted tensor product of single-qubit Paulis

    Attributes:
        label: One letter from I, X, Y, Z per qubit, qubit 0 first
        coefficient: Real weight of the product
    """
    label: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.label:
            raise InvalidInputError("Pauli label cannot be empty")
        invalid = set(self.label) - set(PAULI_LETTERS)
        if invalid:
            raise InvalidInputError(f"Invalid Pauli letters {sorted(invalid)} in '{self.label}'")
        if isinstance(self.coefficient, complex):
            raise InvalidInputError("Pauli coefficient must be real")
        if not math.isfinite(self.coefficient):
            raise InvalidInputError(f"Pauli coefficient must be finite, got {self.coefficient}")
        if 2 ** len(self.label) > MAX_DIMENSION:
            raise CapacityError(f"{len(self.label)} qubits exceed dimension cap {MAX_DIMENSION}")
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @property
    def n_qubits(self) -> int:
        return len(self.label)

    @property
    def dim(self) -> int:
        return 2 ** len(self.label)

    @property
    def x_mask(self) -> int:
        """Bit mask of qubits flipped by the string (X or Y)"""
        mask = 0
        for qubit, letter in enumerate(self.label):
            if letter in "XY":
                mask |= 1 << (self.n_qubits - 1 - qubit)
        return mask

    @property
    def y_count(self) -> int:
        return self.label.count("Y")

    def commutes_with(self, other: "PauliString") -> bool:
        """Two Pauli strings commute iff they anticommute on an even number of qubits"""
        if other.n_qubits != self.n_qubits:
            raise InvalidInputError("Pauli strings act on different qubit counts")
        clashes = sum(
            1 for a, b in zip(self.label, other.label)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def __str__(self) -> str:
        return f"{self.coefficient:+g}*{self.label}"


def _check_dimension(dim: int) -> None:
    if dim < 1:
        raise InvalidInputError(f"Dimension must be positive, got {dim}")
    if dim > MAX_DIMENSION:
        raise CapacityError(f"Dimension {dim} exceeds dense cap {MAX_DIMENSION}")


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """
    Dense complex square matrix

    Setting `hermitian` or `unitary` asserts the property at construction
    (max-entry deviation within HERMITIAN_TOLERANCE / UNITARY_TOLERANCE).
    The stored matrix is a read-only complex128 copy.
    """
    matrix: np.ndarray
    hermitian: bool = False
    unitary: bool = False

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidInputError(f"Operator must be a square matrix, got shape {matrix.shape}")
        _check_dimension(matrix.shape[0])
        if not np.all(np.isfinite(matrix)):
            raise InvalidInputError("Operator entries must be finite")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

        if self.hermitian and not self.is_hermitian():
            raise InvalidInputError(
                f"Operator flagged Hermitian deviates by {self.hermiticity_deviation():.3e}"
            )
        if self.unitary and not self.is_unitary():
            raise InvalidInputError(
                f"Operator flagged unitary deviates by {self.unitarity_deviation():.3e}"
            )

    @classmethod
    def identity(cls, dim: int) -> "DenseOperator":
        return cls(np.eye(dim), hermitian=True, unitary=True)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_deviation(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def unitarity_deviation(self) -> float:
        product = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(product - np.eye(self.dim))))

    def is_hermitian(self, tolerance: float = HERMITIAN_TOLERANCE) -> bool:
        return self.hermiticity_deviation() <= tolerance

    def is_unitary(self, tolerance: float = UNITARY_TOLERANCE) -> bool:
        return self.unitarity_deviation() <= tolerance

    def __repr__(self) -> str:
        return f"DenseOperator(dim={self.dim}, hermitian={self.hermitian}, unitary={self.unitary})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Normalized complex amplitude vector

    Construction rejects vectors whose 2-norm differs from one by more than
    NORM_TOLERANCE; use `from_amplitudes` to normalize arbitrary input.
    """
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=np.complex128)
        if amplitudes.ndim != 1:
            raise InvalidInputError(f"State must be a vector, got shape {amplitudes.shape}")
        _check_dimension(amplitudes.shape[0])
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidInputError(f"State is not normalized (norm {norm:.12f})")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise InvalidInputError("Cannot normalize the zero vector")
        return cls(amplitudes / norm)

    @classmethod
    def basis(cls, dim: int, index: int = 0) -> "StateVector":
        if not 0 <= index < dim:
            raise InvalidInputError(f"Basis index {index} out of range for dimension {dim}")
        amplitudes = np.zeros(dim, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "StateVector":
        """Haar-like random state from complex Gaussian amplitudes"""
        return cls.from_amplitudes(rng.normal(size=dim) + 1j * rng.normal(size=dim))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class BosonicMode:
    """A harmonic mode truncated at occupation n_max"""
    n_max: int

    def __post_init__(self):
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 0:
            raise InvalidInputError(f"Truncation n_max must be a non-negative integer, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1
