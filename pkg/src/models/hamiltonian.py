"""
Hamiltonian models: an ordered splitting H = sum_j H_j into exponentiable terms
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .operators import DenseOperator, PauliString
from ..utils.errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class HamiltonianTerm:
    """
    One exponentiable term H_j

    Attributes:
        name: Short label used in logs and repetition reports
        operator: Hermitian matrix of the term
        paulis: Mutually commuting Pauli strings summing to `operator`, when
            the term has that structure; enables the cos/sin fast path
    """
    name: str
    operator: DenseOperator
    paulis: Tuple[PauliString, ...] = ()

    def __post_init__(self):
        if not self.operator.is_hermitian():
            raise InvalidInputError(f"Term '{self.name}' is not Hermitian")
        paulis = tuple(self.paulis)
        for i, p in enumerate(paulis):
            if p.dim != self.operator.dim:
                raise InvalidInputError(f"Pauli {p.label} does not match term '{self.name}' dimension")
            for q in paulis[i + 1:]:
                if not p.commutes_with(q):
                    raise InvalidInputError(
                        f"Pauli strings {p.label} and {q.label} in term '{self.name}' do not commute"
                    )
        object.__setattr__(self, "paulis", paulis)

    @property
    def dim(self) -> int:
        return self.operator.dim


@dataclass(frozen=True, eq=False)
class HamiltonianTerms:
    """
    Ordered list of Hermitian terms H_1 ... H_J plus model metadata

    The order of `terms` is the order in which product formulas multiply
    the term exponentials.
    """
    terms: Tuple[HamiltonianTerm, ...]
    model: str = "custom"
    parameters: Dict = field(default_factory=dict)

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise InvalidInputError("A Hamiltonian needs at least one term")
        dims = {term.dim for term in terms}
        if len(dims) != 1:
            raise InvalidInputError(f"Terms have inconsistent dimensions {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return self.terms[0].dim

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def matrix(self) -> DenseOperator:
        """The full Hamiltonian sum_j H_j"""
        total = np.sum([term.operator.matrix for term in self.terms], axis=0)
        return DenseOperator(total, hermitian=True)

    def __str__(self) -> str:
        names = ", ".join(term.name for term in self.terms)
        return f"{self.model} (dim {self.dim}, terms: {names})"
