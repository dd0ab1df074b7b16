"""
Builders for the transverse-field Ising chain and the spin-boson model,
plus the observables measured on them
"""

import logging
from typing import Optional, Sequence, Union

import numpy as np

from config.settings import MAX_DIMENSION
from ..models.hamiltonian import HamiltonianTerm, HamiltonianTerms
from ..models.operators import BosonicMode, DenseOperator, PauliString, StateVector
from ..utils.errors import CapacityError, InvalidInputError
from .operator_core import SINGLE_QUBIT_PAULIS, boson_ladder, embed, pauli_matrix, pauli_sum_matrix

logger = logging.getLogger(__name__)

SUPPORTED_TOPOLOGIES = ("linear",)


def _single_site(letter: str, site: int, n_qubits: int, coefficient: float) -> PauliString:
    label = ["I"] * n_qubits
    label[site] = letter
    return PauliString("".join(label), coefficient)


def build_ising(n_spins: int, J: float, h: float, topology: str = "linear") -> HamiltonianTerms:
    """
    Transverse-field Ising chain H = -J sum Z_i Z_{i+1} - h sum X_i

    Returns two terms: H_1 with the ZZ couplings and H_2 with the field.
    """
    if n_spins < 2:
        raise InvalidInputError(f"Ising chain needs at least 2 spins, got {n_spins}")
    if topology not in SUPPORTED_TOPOLOGIES:
        raise InvalidInputError(f"Unsupported topology '{topology}', expected one of {SUPPORTED_TOPOLOGIES}")
    if 2 ** n_spins > MAX_DIMENSION:
        raise CapacityError(f"{n_spins} spins exceed dimension cap {MAX_DIMENSION}")

    couplings = []
    for i in range(n_spins - 1):
        label = ["I"] * n_spins
        label[i] = label[i + 1] = "Z"
        couplings.append(PauliString("".join(label), -J))
    field_terms = [_single_site("X", i, n_spins, -h) for i in range(n_spins)]

    logger.debug(f"Ising chain: {len(couplings)} ZZ terms, {len(field_terms)} X terms (J={J}, h={h})")

    return HamiltonianTerms(
        terms=(
            HamiltonianTerm("zz", pauli_sum_matrix(couplings), tuple(couplings)),
            HamiltonianTerm("x", pauli_sum_matrix(field_terms), tuple(field_terms)),
        ),
        model="ising",
        parameters={"n_spins": n_spins, "J": J, "h": h, "topology": topology},
    )


def _per_mode(value: Union[float, Sequence[float]], modes: int, name: str) -> np.ndarray:
    values = np.atleast_1d(np.asarray(value, dtype=float))
    if values.size == 1:
        return np.full(modes, float(values[0]))
    if values.size != modes:
        raise InvalidInputError(f"{name} needs 1 or {modes} values, got {values.size}")
    return values


def build_spin_boson(
    M: int,
    n_max: int,
    omega: Union[float, Sequence[float]],
    omega_s: float,
    delta: float,
    g: Union[float, Sequence[float]],
) -> HamiltonianTerms:
    """
    Spin coupled to M truncated harmonic modes

    H = sum_k w_k a_k^dag a_k + (w_s/2) Z + D X + sum_k g_k X (a_k^dag + a_k)

    The spin is the leftmost tensor factor, followed by modes 1..M. Terms are
    grouped as bosonic, spin, coupling; the coupling group sums the modes in
    index order. Scalars for `omega` and `g` give the resonant case.
    """
    if M < 1:
        raise InvalidInputError(f"Mode count must be at least 1, got {M}")
    if n_max < 1:
        raise InvalidInputError(f"Truncation n_max must be at least 1, got {n_max}")
    dim = 2 * (n_max + 1) ** M
    if dim > MAX_DIMENSION:
        raise CapacityError(f"Spin-boson model (M={M}, n_max={n_max}) has dim {dim} > {MAX_DIMENSION}")

    frequencies = _per_mode(omega, M, "omega")
    couplings = _per_mode(g, M, "g")
    mode = BosonicMode(n_max)
    a, a_dag = boson_ladder(mode)
    number = a_dag.matrix @ a.matrix
    displacement = a_dag.matrix + a.matrix
    dims = [2] + [mode.dim] * M

    bosonic = sum(w * embed(number, k + 1, dims) for k, w in enumerate(frequencies))
    spin = embed(0.5 * omega_s * SINGLE_QUBIT_PAULIS["Z"] + delta * SINGLE_QUBIT_PAULIS["X"], 0, dims)
    coupling = sum(
        gk * embed(SINGLE_QUBIT_PAULIS["X"], 0, dims) @ embed(displacement, k + 1, dims)
        for k, gk in enumerate(couplings)
    )

    logger.debug(f"Spin-boson model: M={M}, n_max={n_max}, dim={dim}")

    return HamiltonianTerms(
        terms=(
            HamiltonianTerm("bosonic", DenseOperator(bosonic, hermitian=True)),
            HamiltonianTerm("spin", DenseOperator(spin, hermitian=True)),
            HamiltonianTerm("coupling", DenseOperator(coupling, hermitian=True)),
        ),
        model="spin-boson",
        parameters={
            "M": M, "n_max": n_max, "omega": frequencies.tolist(), "omega_s": omega_s,
            "delta": delta, "g": couplings.tolist(),
        },
    )


def magnetization(n_spins: int, qubit: Optional[int] = 0) -> DenseOperator:
    """Z on one qubit, or the chain average (1/n) sum_i Z_i when qubit is None"""
    if qubit is None:
        terms = [_single_site("Z", i, n_spins, 1.0 / n_spins) for i in range(n_spins)]
        return pauli_sum_matrix(terms)
    if not 0 <= qubit < n_spins:
        raise InvalidInputError(f"Qubit {qubit} out of range for {n_spins} spins")
    return pauli_matrix(_single_site("Z", qubit, n_spins, 1.0))


def spin_observable(H: HamiltonianTerms) -> DenseOperator:
    """Z on the spin factor of a spin-boson model"""
    if H.model != "spin-boson":
        raise InvalidInputError(f"Spin observable needs a spin-boson model, got '{H.model}'")
    bath_dim = H.dim // 2
    return DenseOperator(np.kron(SINGLE_QUBIT_PAULIS["Z"], np.eye(bath_dim)), hermitian=True)


def initial_state(H: HamiltonianTerms, index: int = 0) -> StateVector:
    """Computational basis state; index 0 is the all-zeros state"""
    return StateVector.basis(H.dim, index)


def product_state(n_qubits: int, theta: float) -> StateVector:
    """
    R_y(theta) applied to every qubit of |0...0>

    theta = 0 is the all-zeros state. Tilted states have a nonzero
    first-order Trotter error in <Z_0>, which the all-zeros state cancels.
    """
    single = np.array([np.cos(theta / 2), np.sin(theta / 2)])
    amplitudes = single
    for _ in range(n_qubits - 1):
        amplitudes = np.kron(amplitudes, single)
    return StateVector.from_amplitudes(amplitudes)
