import numpy as np
import pytest
from scipy.linalg import expm

from src.models.operators import BosonicMode, DenseOperator, PauliString, StateVector
from src.services.operator_core import (
    SINGLE_QUBIT_PAULIS,
    apply_pauli,
    apply_pauli_exponential,
    boson_ladder,
    embed,
    expectation,
    number_operator,
    pauli_matrix,
    pauli_sum_matrix,
)
from src.utils.errors import CapacityError, InvalidInputError

X, Y, Z, I2 = (SINGLE_QUBIT_PAULIS[letter] for letter in "XYZI")


def test_pauli_matrix_puts_qubit_zero_leftmost():
    np.testing.assert_allclose(pauli_matrix(PauliString("ZI")).matrix, np.kron(Z, I2))
    np.testing.assert_allclose(pauli_matrix(PauliString("IX", 0.5)).matrix, 0.5 * np.kron(I2, X))


def test_pauli_sum_is_hermitian():
    op = pauli_sum_matrix([PauliString("XY", 0.3), PauliString("ZZ", -1.2)])
    assert op.is_hermitian()


@pytest.mark.parametrize("label", ["X", "Y", "Z", "XYZ", "YIY", "ZZXI"])
def test_apply_pauli_matches_dense_matrix(label, rng):
    p = PauliString(label)
    psi = StateVector.random(p.dim, rng)
    expected = pauli_matrix(p).matrix @ psi.amplitudes
    np.testing.assert_allclose(apply_pauli(psi.amplitudes, p), expected, atol=1e-14)


@pytest.mark.parametrize("label,coefficient", [("ZZ", 1.0), ("XIY", -0.7), ("Y", 2.5)])
def test_pauli_exponential_matches_expm(label, coefficient, rng):
    p = PauliString(label, coefficient)
    psi = StateVector.random(p.dim, rng)
    angle = 0.37
    expected = expm(-1j * angle * pauli_matrix(p).matrix) @ psi.amplitudes
    result = apply_pauli_exponential(psi, p, angle)
    np.testing.assert_allclose(result.amplitudes, expected, atol=1e-12)
    assert abs(result.norm() - 1.0) < 1e-12


def test_pauli_exponential_matches_expm_on_random_triples(rng):
    worst = 0.0
    for _ in range(100):
        n_qubits = int(rng.integers(1, 5))
        label = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        p = PauliString(label, float(rng.uniform(-2.0, 2.0)))
        angle = float(rng.uniform(-np.pi, np.pi))
        psi = StateVector.random(p.dim, rng)
        expected = expm(-1j * angle * pauli_matrix(p).matrix) @ psi.amplitudes
        result = apply_pauli_exponential(psi, p, angle).amplitudes
        worst = max(worst, float(np.max(np.abs(result - expected))))
    assert worst < 1e-10


def test_pauli_exponential_rejects_dimension_mismatch(rng):
    with pytest.raises(InvalidInputError):
        apply_pauli_exponential(StateVector.random(4, rng), PauliString("XYZ"), 0.1)


def test_pauli_string_validation():
    with pytest.raises(InvalidInputError):
        PauliString("XQ")
    with pytest.raises(InvalidInputError):
        PauliString("")
    with pytest.raises(InvalidInputError):
        PauliString("X", float("inf"))
    with pytest.raises(CapacityError):
        PauliString("I" * 13)


def test_pauli_commutation():
    assert PauliString("XX").commutes_with(PauliString("ZZ"))
    assert PauliString("XI").commutes_with(PauliString("IZ"))
    assert not PauliString("XI").commutes_with(PauliString("ZI"))


def test_boson_ladder_lowers_occupation():
    mode = BosonicMode(3)
    a, a_dag = boson_ladder(mode)
    for n in range(mode.dim):
        ket = np.zeros(mode.dim)
        ket[n] = 1.0
        lowered = a.matrix @ ket
        expected = np.zeros(mode.dim)
        if n > 0:
            expected[n - 1] = np.sqrt(n)
        np.testing.assert_allclose(lowered, expected)
    np.testing.assert_allclose(a_dag.matrix, a.matrix.conj().T)
    np.testing.assert_allclose(np.diag(number_operator(mode).matrix).real, [0, 1, 2, 3])


def test_bosonic_mode_rejects_negative_truncation():
    with pytest.raises(InvalidInputError):
        BosonicMode(-1)


def test_embed_places_local_operator():
    result = embed(X, 1, [2, 2, 3])
    np.testing.assert_allclose(result, np.kron(np.kron(I2, X), np.eye(3)))
    with pytest.raises(InvalidInputError):
        embed(X, 2, [2, 2, 3])


def test_dense_operator_flags_are_checked():
    with pytest.raises(InvalidInputError):
        DenseOperator(np.array([[0, 1], [0, 0]]), hermitian=True)
    with pytest.raises(InvalidInputError):
        DenseOperator(2 * np.eye(2), unitary=True)
    assert DenseOperator.identity(4).is_unitary()


def test_state_vector_requires_normalization():
    with pytest.raises(InvalidInputError):
        StateVector(np.array([1.0, 1.0]))
    psi = StateVector.from_amplitudes([1.0, 1.0])
    assert abs(psi.norm() - 1.0) < 1e-12


def test_expectation_of_basis_state():
    psi = StateVector.basis(4, 0)
    assert expectation(psi, pauli_matrix(PauliString("ZI"))) == pytest.approx(1.0)
    assert expectation(psi, pauli_matrix(PauliString("XI"))) == pytest.approx(0.0)


def test_expectation_rejects_non_hermitian_and_mismatched_observables():
    psi = StateVector.basis(2, 0)
    with pytest.raises(InvalidInputError):
        expectation(psi, DenseOperator(np.array([[0, 1], [0, 0]])))
    with pytest.raises(InvalidInputError):
        expectation(psi, pauli_matrix(PauliString("ZZ")))
