import numpy as np
import pytest

from src.models.hamiltonian import HamiltonianTerm, HamiltonianTerms
from src.models.operators import DenseOperator, PauliString
from src.services.hamiltonians import (
    build_ising,
    build_spin_boson,
    initial_state,
    magnetization,
    spin_observable,
)
from src.services.operator_core import SINGLE_QUBIT_PAULIS, pauli_matrix
from src.services.propagators import exact_unitary
from src.utils.errors import CapacityError, InvalidInputError

X, Z, I2 = SINGLE_QUBIT_PAULIS["X"], SINGLE_QUBIT_PAULIS["Z"], SINGLE_QUBIT_PAULIS["I"]


def test_ising_two_spins_matches_hand_built_matrix(ising2):
    expected = -0.5 * np.kron(Z, Z) - (np.kron(X, I2) + np.kron(I2, X))
    np.testing.assert_allclose(ising2.matrix().matrix, expected)
    assert [term.name for term in ising2.terms] == ["zz", "x"]
    assert ising2.n_terms == 2


def test_ising_zero_field_spectrum():
    H = build_ising(2, 1.0, 0.0)
    np.testing.assert_allclose(H.matrix().matrix, -np.kron(Z, Z), atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.matrix().matrix), [-1.0, -1.0, 1.0, 1.0], atol=1e-12)


def test_ising_three_spin_ground_energy():
    H = build_ising(3, 0.5, 1.0)
    dense = np.zeros((8, 8))
    for i in range(2):
        factors = [I2] * 3
        factors[i] = factors[i + 1] = Z
        dense -= 0.5 * np.kron(np.kron(factors[0], factors[1]), factors[2])
    for i in range(3):
        factors = [I2] * 3
        factors[i] = X
        dense -= np.kron(np.kron(factors[0], factors[1]), factors[2])
    expected = np.linalg.eigvalsh(dense)[0]
    assert np.linalg.eigvalsh(H.matrix().matrix)[0] == pytest.approx(expected, abs=1e-12)


def test_ising_terms_carry_commuting_paulis(ising5):
    zz, x = ising5.terms
    assert len(zz.paulis) == 4
    assert len(x.paulis) == 5
    assert all(p.coefficient == -0.5 for p in zz.paulis)
    assert zz.paulis[0].label == "ZZIII"


def test_ising_rejects_bad_parameters():
    with pytest.raises(InvalidInputError):
        build_ising(1, 1.0, 1.0)
    with pytest.raises(InvalidInputError):
        build_ising(3, 1.0, 1.0, topology="ring")
    with pytest.raises(CapacityError):
        build_ising(13, 1.0, 1.0)


def test_spin_boson_single_mode_structure():
    H = build_spin_boson(1, 1, omega=1.0, omega_s=-1.0, delta=0.0, g=0.5)
    assert H.dim == 4
    assert [term.name for term in H.terms] == ["bosonic", "spin", "coupling"]
    a = np.array([[0, 1], [0, 0]])
    expected = (
        np.kron(I2, a.T @ a)
        - 0.5 * np.kron(Z, np.eye(2))
        + 0.5 * np.kron(X, a + a.T)
    )
    np.testing.assert_allclose(H.matrix().matrix, expected, atol=1e-14)


def test_spin_boson_spectrum_matches_dense_model():
    H = build_spin_boson(1, 2, 1.0, -1.0, 0.0, 0.5)
    a = np.diag([1.0, np.sqrt(2.0)], k=1)
    dense = (
        np.kron(I2, a.T @ a)
        - 0.5 * np.kron(Z, np.eye(3))
        + 0.5 * np.kron(X, a + a.T)
    )
    np.testing.assert_allclose(
        np.linalg.eigvalsh(H.matrix().matrix), np.linalg.eigvalsh(dense), atol=1e-12
    )


def test_decoupled_spin_boson_evolves_by_phases():
    omega, omega_s, t = 1.3, -0.8, 0.9
    H = build_spin_boson(1, 2, omega, omega_s, 0.0, 0.0)
    matrix = H.matrix().matrix
    np.testing.assert_allclose(matrix, np.diag(np.diag(matrix)), atol=1e-15)
    # spin up (Z = +1) occupies the first n_max + 1 basis states
    energies = [omega * n + 0.5 * omega_s * z for z in (1, -1) for n in range(3)]
    np.testing.assert_allclose(
        exact_unitary(H, t).matrix, np.diag(np.exp(-1j * np.array(energies) * t)), atol=1e-12
    )


def test_spin_boson_dimension_and_caps():
    assert build_spin_boson(2, 2, 1.0, -1.0, 0.1, 0.5).dim == 18
    with pytest.raises(CapacityError):
        build_spin_boson(6, 3, 1.0, -1.0, 0.0, 0.5)
    with pytest.raises(InvalidInputError):
        build_spin_boson(2, 1, [1.0, 2.0, 3.0], -1.0, 0.0, 0.5)
    with pytest.raises(InvalidInputError):
        build_spin_boson(0, 1, 1.0, -1.0, 0.0, 0.5)


def test_spin_boson_terms_do_not_commute():
    H = build_spin_boson(1, 2, 1.0, -1.0, 0.0, 0.5)
    bosonic, _, coupling = (term.operator.matrix for term in H.terms)
    assert np.linalg.norm(bosonic @ coupling - coupling @ bosonic) > 0.1


def test_magnetization_and_initial_state(ising5):
    psi = initial_state(ising5)
    z0 = magnetization(5, 0)
    assert np.vdot(psi.amplitudes, z0.matrix @ psi.amplitudes).real == pytest.approx(1.0)
    average = magnetization(5, None)
    np.testing.assert_allclose(np.diag(average.matrix).real[0], 1.0)
    np.testing.assert_allclose(np.diag(average.matrix).real[-1], -1.0)
    with pytest.raises(InvalidInputError):
        magnetization(5, 5)


def test_spin_observable_requires_spin_boson(ising2):
    H = build_spin_boson(1, 1, 1.0, -1.0, 0.0, 0.5)
    np.testing.assert_allclose(spin_observable(H).matrix, np.kron(Z, np.eye(2)))
    with pytest.raises(InvalidInputError):
        spin_observable(ising2)


def test_terms_validate_structure():
    with pytest.raises(InvalidInputError):
        HamiltonianTerm("bad", DenseOperator(np.array([[0, 1], [0, 0]])))
    with pytest.raises(InvalidInputError):
        HamiltonianTerm(
            "clash",
            DenseOperator(np.kron(X, I2) + np.kron(Z, I2)),
            (PauliString("XI"), PauliString("ZI")),
        )
    with pytest.raises(InvalidInputError):
        HamiltonianTerms(())
    with pytest.raises(InvalidInputError):
        HamiltonianTerms((
            HamiltonianTerm("a", pauli_matrix(PauliString("Z"))),
            HamiltonianTerm("b", pauli_matrix(PauliString("ZZ"))),
        ))
