"""
Multi-product formula engine: exact extrapolation weights, sequence search,
and classical combination of expectation values
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.settings import MAX_ENUMERATION, S1_CONDITION_THRESHOLD, S2_CONDITION_THRESHOLD
from ..models.hamiltonian import HamiltonianTerms
from ..models.operators import DenseOperator, StateVector
from ..models.sequence import (
    ExponentSequence, ExpectationRecord, RankedSequence, SearchResult, WeightVector
)
from ..utils.errors import CapacityError, InvalidInputError, NumericalError
from .propagators import Propagator

logger = logging.getLogger(__name__)

OBJECTIVES = ("min-norm1", "min-depth")


def _constraint_system(seq: ExponentSequence) -> List[List[int]]:
    """
    Augmented integer matrix of the weight constraints

    Row 0 is sum_j a_j = 1. Row n+1 is sum_j a_j / k_j^eta_n = 0, scaled by
    lcm_j(k_j^eta_n) so every entry is an integer.
    """
    rows = [[1] * seq.length + [1]]
    for eta in seq.error_exponents():
        powers = [k ** eta for k in seq.k]
        scale = math.lcm(*powers)
        rows.append([scale // p for p in powers] + [0])
    return rows


def _bareiss_solve(augmented: List[List[int]]) -> List[Fraction]:
    """Fraction-free Gaussian elimination, exact back substitution"""
    m = [row[:] for row in augmented]
    n = len(m)
    previous = 1
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r][i] != 0), None)
        if pivot is None:
            raise NumericalError("Weight system is singular")
        m[i], m[pivot] = m[pivot], m[i]
        for r in range(i + 1, n):
            for c in range(i + 1, n + 1):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // previous
            m[r][i] = 0
        previous = m[i][i]

    solution = [Fraction(0)] * n
    for i in reversed(range(n)):
        tail = sum((m[i][c] * solution[c] for c in range(i + 1, n)), Fraction(0))
        solution[i] = (m[i][n] - tail) / m[i][i]
    return solution


def constraint_residuals(seq: ExponentSequence, weights: Sequence[Fraction]) -> List[Fraction]:
    """[sum a_j - 1, sum a_j / k_j^eta_0, ...]; all zero for valid weights"""
    residuals = [sum(weights, Fraction(0)) - 1]
    for eta in seq.error_exponents():
        residuals.append(sum((a / Fraction(k) ** eta for a, k in zip(weights, seq.k)), Fraction(0)))
    return residuals


def solve_weights(seq: ExponentSequence) -> WeightVector:
    """
    Exact MPF weights for a sequence

    Solves sum a_j = 1 and sum_j a_j / k_j^eta = 0 for the l-1 leading error
    exponents eta, summing over all l exponents.
    """
    weights = _bareiss_solve(_constraint_system(seq))
    if any(residual != 0 for residual in constraint_residuals(seq, weights)):
        raise NumericalError(f"Weights for {seq} leave a nonzero constraint residual")
    return WeightVector(seq, tuple(weights))


def condition_number(w: WeightVector) -> float:
    """||a||_1"""
    return w.norm1


def default_threshold(base_chi: int) -> float:
    return S1_CONDITION_THRESHOLD if base_chi == 1 else S2_CONDITION_THRESHOLD


def _sort_key(objective: str):
    if objective == "min-norm1":
        return lambda w: (w.norm1_exact, w.sequence.k_max, w.sequence.k)
    return lambda w: (w.sequence.k_max, w.sequence.k)


def search_sequences(
    l: int,
    base_chi: int,
    symmetric: Optional[bool],
    k_range: Tuple[int, int],
    threshold: Optional[float] = None,
    objective: str = "min-norm1",
    workers: int = 4,
    limit: Optional[int] = None,
) -> SearchResult:
    """
    Enumerate strictly increasing sequences in a range and rank the
    well-conditioned ones

    Args:
        l: Sequence length
        base_chi: Base product-formula order
        symmetric: Error-series parity, None for the base order's default
        k_range: Inclusive (k_min, k_max)
        threshold: Largest accepted ||a||_1; None uses the base default
        objective: 'min-norm1' ranks by ||a||_1, 'min-depth' by k_l;
            ties go to smaller k_l, then lexicographic k
        workers: Solver threads; the ranking does not depend on it
        limit: Keep at most this many candidates

    Returns:
        SearchResult, empty with a diagnostic when nothing passes
    """
    k_min, k_max = k_range
    if l < 1:
        raise InvalidInputError(f"Sequence length must be at least 1, got {l}")
    if k_min < 1 or k_max - k_min + 1 < l:
        raise InvalidInputError(f"Range [{k_min}, {k_max}] cannot hold {l} distinct exponents")
    if objective not in OBJECTIVES:
        raise InvalidInputError(f"Unknown objective '{objective}', expected one of {OBJECTIVES}")
    if workers < 1:
        raise InvalidInputError(f"Worker count must be positive, got {workers}")
    count = math.comb(k_max - k_min + 1, l)
    if count > MAX_ENUMERATION:
        raise CapacityError(f"{count} candidate sequences exceed the enumeration cap {MAX_ENUMERATION}")

    if threshold is None or threshold <= 0:
        threshold = default_threshold(base_chi)
    bound = Fraction(repr(float(threshold)))

    candidates = [
        ExponentSequence(k, base_chi, symmetric)
        for k in combinations(range(k_min, k_max + 1), l)
    ]
    logger.info(f"Searching {count} sequences of length {l} in [{k_min}, {k_max}] with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        solved = list(executor.map(solve_weights, candidates))

    accepted = sorted((w for w in solved if w.norm1_exact <= bound), key=_sort_key(objective))
    if limit is not None:
        accepted_view = accepted[:limit]
    else:
        accepted_view = accepted

    diagnostic = ""
    if not accepted:
        best = min(solved, key=lambda w: w.norm1_exact)
        diagnostic = (
            f"no sequence with ||a||_1 <= {threshold}; smallest is {best.sequence} "
            f"with ||a||_1 = {best.norm1:.4g}"
        )
        logger.warning(f"Sequence search empty: {diagnostic}")

    return SearchResult(
        candidates=tuple(RankedSequence(rank + 1, w) for rank, w in enumerate(accepted_view)),
        evaluated=count,
        diagnostic=diagnostic,
        accepted=len(accepted),
    )


def combine_expectations(w: WeightVector, records: Sequence[ExpectationRecord]) -> float:
    """sum_j a_j E_j with records matched to the sequence's exponents"""
    ks = [record.k for record in records]
    if len(records) != w.sequence.length:
        raise InvalidInputError(f"{len(records)} records for a sequence of length {w.sequence.length}")
    if len(set(ks)) != len(ks):
        raise InvalidInputError(f"Duplicate Trotter exponents in records: {ks}")
    by_k = {record.k: record for record in records}
    if set(by_k) != set(w.sequence.k):
        raise InvalidInputError(f"Record exponents {sorted(ks)} do not match sequence {w.sequence}")
    return math.fsum(float(a) * by_k[k].value for a, k in zip(w.weights, w.sequence.k))


def amplified_error_bound(w: WeightVector, eps_prime: float) -> float:
    """Worst-case non-algorithmic error ||a||_1 * eps'"""
    if eps_prime < 0:
        raise InvalidInputError(f"Perturbation magnitude must be non-negative, got {eps_prime}")
    return w.norm1 * eps_prime


def scale_sequence(seq: ExponentSequence, alpha: float) -> ExponentSequence:
    """k'_j = ceil(alpha k_j), for simulation times beyond t = 1"""
    if alpha <= 0:
        raise InvalidInputError(f"Scale factor must be positive, got {alpha}")
    factor = Fraction(repr(float(alpha)))
    return ExponentSequence(
        tuple(math.ceil(factor * k) for k in seq.k), seq.base_chi, seq.symmetric
    )


def expectation_records(
    propagator: Propagator,
    t: float,
    seq: ExponentSequence,
    psi: StateVector,
    observable: DenseOperator,
) -> List[ExpectationRecord]:
    """Exact-simulation expectation <O>_j for every exponent of the sequence"""
    return [
        ExpectationRecord(k, propagator.pf_expectation(t, k, seq.base_chi, psi, observable))
        for k in seq.k
    ]


def mpf_expectation(
    H: HamiltonianTerms,
    t: float,
    w: WeightVector,
    psi: StateVector,
    observable: DenseOperator,
) -> float:
    """Combined estimate sum_j a_j <psi|S^k_j dag O S^k_j|psi>; no cross terms are formed"""
    records = expectation_records(Propagator(H), t, w.sequence, psi, observable)
    return combine_expectations(w, records)


def mpf_operator(H: HamiltonianTerms, t: float, w: WeightVector) -> DenseOperator:
    """Operator-level MPF sum_j a_j [S(t/k_j)]^k_j (not unitary in general)"""
    propagator = Propagator(H)
    total = np.zeros((H.dim, H.dim), dtype=np.complex128)
    for a, k in zip(w.weights, w.sequence.k):
        total += float(a) * propagator.pf_steps(t, k, w.sequence.base_chi).matrix
    return DenseOperator(total)
