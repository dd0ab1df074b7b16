"""
Exact evolution and product formulas S_1, S_2, S_2chi with repeated steps

A formula is expanded into a schedule of (term index, time fraction)
factors written left to right as a matrix product; states see the rightmost
factor first.
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config.settings import MAX_DIMENSION, MAX_OPERATOR_DIMENSION
from ..models.formula import RECURSION_WEIGHTS, ProductFormulaSpec
from ..models.hamiltonian import HamiltonianTerms
from ..models.operators import DenseOperator, StateVector
from ..utils.errors import CapacityError, InvalidInputError, NumericalError
from .operator_core import expectation, pauli_rotation

logger = logging.getLogger(__name__)

Factor = Tuple[int, float]


def merge_adjacent(schedule: Sequence[Factor]) -> List[Factor]:
    """Fuse consecutive factors of the same term, exp(-iH a)exp(-iH b) = exp(-iH(a+b))"""
    merged: List[Factor] = []
    for term, fraction in schedule:
        if merged and merged[-1][0] == term:
            merged[-1] = (term, merged[-1][1] + fraction)
        else:
            merged.append((term, fraction))
    return merged


def formula_schedule(n_terms: int, spec: ProductFormulaSpec) -> List[Factor]:
    """Factors of one application S(t), fractions relative to t"""
    forward = list(range(n_terms))
    if spec.chi_order == 1:
        return [(j, 1.0) for j in forward]
    if spec.chi_order == 2:
        return [(j, 0.5) for j in forward] + [(j, 0.5) for j in reversed(forward)]

    s = spec.s_constants[-1]
    inner = formula_schedule(n_terms, ProductFormulaSpec(spec.chi_order - 2))
    schedule: List[Factor] = []
    for constant, multiple in RECURSION_WEIGHTS:
        weight = float(constant) + float(multiple) * s
        schedule.extend((j, weight * f) for j, f in inner)
    return schedule


def step_schedule(n_terms: int, spec: ProductFormulaSpec, k: int) -> List[Factor]:
    """Merged factors of [S(t/k)]^k, fractions relative to the total time t"""
    single = [(j, f / k) for j, f in formula_schedule(n_terms, spec)]
    return merge_adjacent(single * k)


def repetition_count(n_terms: int, chi_order: int, k: int) -> int:
    """
    Number of exp(-iH_j tau) factors in k steps after merging neighbours

    Consecutive steps fuse at their boundary when a step ends on the term it
    starts with, as every symmetric formula does.
    """
    if k < 1:
        raise InvalidInputError(f"Trotter exponent must be a positive integer, got {k}")
    step = merge_adjacent(formula_schedule(n_terms, ProductFormulaSpec(chi_order)))
    if len(step) == 1:
        return 1
    if step[0][0] == step[-1][0]:
        return k * len(step) - (k - 1)
    return k * len(step)


def empirical_order(ks: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(k)"""
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise NumericalError("Convergence order needs strictly positive errors")
    slope, _ = np.polyfit(np.log(np.asarray(ks, dtype=float)), np.log(errors), 1)
    return float(slope)


class Propagator:
    """
    Evolution operators for one Hamiltonian splitting

    Term eigendecompositions are computed on first use and reused for every
    time step; the instance is read-only afterwards.
    """

    def __init__(self, H: HamiltonianTerms):
        if H.dim > MAX_DIMENSION:
            raise CapacityError(f"Dimension {H.dim} exceeds dense cap {MAX_DIMENSION}")
        self.H = H
        self.logger = logging.getLogger(__name__)
        self._term_eigensystems: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._full_eigensystem = None

    def _eigensystem(self, j: int) -> Tuple[np.ndarray, np.ndarray]:
        if j not in self._term_eigensystems:
            self._term_eigensystems[j] = np.linalg.eigh(self.H.terms[j].operator.matrix)
        return self._term_eigensystems[j]

    def _full(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._full_eigensystem is None:
            self._full_eigensystem = np.linalg.eigh(self.H.matrix().matrix)
        return self._full_eigensystem

    def term_exponential(self, j: int, tau: float) -> np.ndarray:
        """exp(-i H_j tau) = V exp(-i L tau) V^dag"""
        values, vectors = self._eigensystem(j)
        return (vectors * np.exp(-1j * values * tau)) @ vectors.conj().T

    def _apply_term(self, amplitudes: np.ndarray, j: int, tau: float) -> np.ndarray:
        term = self.H.terms[j]
        if term.paulis:
            for p in term.paulis:
                amplitudes = pauli_rotation(amplitudes, p, tau)
            return amplitudes
        values, vectors = self._eigensystem(j)
        return vectors @ (np.exp(-1j * values * tau) * (vectors.conj().T @ amplitudes))

    def _check_materializable(self) -> None:
        if self.H.dim > MAX_OPERATOR_DIMENSION:
            raise CapacityError(
                f"Dimension {self.H.dim} exceeds operator cap {MAX_OPERATOR_DIMENSION}; "
                f"use state evolution instead"
            )

    def exact_unitary(self, t: float) -> DenseOperator:
        """exp(-iHt) from the eigendecomposition of the summed Hamiltonian"""
        self._check_materializable()
        values, vectors = self._full()
        return DenseOperator((vectors * np.exp(-1j * values * t)) @ vectors.conj().T, unitary=True)

    def exact_state(self, psi: StateVector, t: float) -> StateVector:
        values, vectors = self._full()
        evolved = vectors @ (np.exp(-1j * values * t) * (vectors.conj().T @ psi.amplitudes))
        return StateVector(evolved)

    def exact_expectation(self, t: float, psi: StateVector, observable: DenseOperator) -> float:
        return expectation(self.exact_state(psi, t), observable)

    def formula(self, t: float, chi_order: int) -> DenseOperator:
        """A single application S_chi(t)"""
        return self.pf_steps(t, 1, chi_order)

    def pf_steps(self, t: float, k: int, chi_order: int) -> DenseOperator:
        """[S_chi(t/k)]^k as a dense unitary"""
        self._check_steps(k)
        self._check_materializable()
        spec = ProductFormulaSpec(chi_order)
        step = np.eye(self.H.dim, dtype=np.complex128)
        tau = t / k
        for j, fraction in merge_adjacent(formula_schedule(self.H.n_terms, spec)):
            step = step @ self.term_exponential(j, fraction * tau)
        return DenseOperator(np.linalg.matrix_power(step, k), unitary=True)

    def evolve(self, psi: StateVector, t: float, k: int, chi_order: int) -> StateVector:
        """Apply [S_chi(t/k)]^k to a state factor by factor"""
        self._check_steps(k)
        if psi.dim != self.H.dim:
            raise InvalidInputError(f"State dimension {psi.dim} does not match Hamiltonian dimension {self.H.dim}")
        amplitudes = psi.amplitudes
        for j, fraction in reversed(step_schedule(self.H.n_terms, ProductFormulaSpec(chi_order), k)):
            amplitudes = self._apply_term(amplitudes, j, fraction * t)
        return StateVector(amplitudes)

    def pf_expectation(
        self, t: float, k: int, chi_order: int, psi: StateVector, observable: DenseOperator
    ) -> float:
        """<psi| S^k(t/k)^dag O S^k(t/k) |psi>"""
        if self.H.dim <= MAX_OPERATOR_DIMENSION:
            self._check_steps(k)
            evolved = StateVector(self.pf_steps(t, k, chi_order).matrix @ psi.amplitudes)
        else:
            evolved = self.evolve(psi, t, k, chi_order)
        return expectation(evolved, observable)

    @staticmethod
    def _check_steps(k: int) -> None:
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise InvalidInputError(f"Trotter exponent must be a positive integer, got {k}")


def exact_unitary(H: HamiltonianTerms, t: float) -> DenseOperator:
    return Propagator(H).exact_unitary(t)


def s1(H: HamiltonianTerms, t: float) -> DenseOperator:
    """Lie-Trotter: prod_j exp(-i H_j t) in term order"""
    return Propagator(H).formula(t, 1)


def s2chi(H: HamiltonianTerms, t: float, chi: int) -> DenseOperator:
    """Symmetric formula of order 2*chi"""
    if chi < 1:
        raise InvalidInputError(f"chi must be at least 1, got {chi}")
    return Propagator(H).formula(t, 2 * chi)


def pf_steps(H: HamiltonianTerms, t: float, k: int, chi_order: int) -> DenseOperator:
    return Propagator(H).pf_steps(t, k, chi_order)


def pf_expectation(
    H: HamiltonianTerms, t: float, k: int, chi_order: int, psi0: StateVector, O: DenseOperator
) -> float:
    return Propagator(H).pf_expectation(t, k, chi_order, psi0, O)
