"""
Resource estimates: LCU versus classical-combination CNOT counts, MPF depth
scaling, and repetitions a product formula needs to reach a target accuracy
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import lambertw

from config.settings import MAX_TROTTER_STEPS
from ..models.hamiltonian import HamiltonianTerms
from ..models.operators import DenseOperator, StateVector
from ..models.resources import (
    GATE_KINDS, CnotComparison, DepthScaling, GateCostTable, RepetitionResult, ScalingQuery
)
from ..utils.errors import BudgetExceededError, InvalidInputError, UnsupportedError
from .hamiltonians import build_spin_boson, initial_state, spin_observable
from .operator_core import spectral_distance
from .propagators import Propagator, repetition_count

logger = logging.getLogger(__name__)

METRICS = ("operator-norm", "observable")


def _check_exponents(k: Sequence[int]) -> Tuple[int, ...]:
    k = tuple(int(value) for value in k)
    if not k or k[0] < 1 or any(b <= a for a, b in zip(k, k[1:])):
        raise InvalidInputError(f"Trotter exponents must be positive and strictly increasing, got {list(k)}")
    return k


def gate_multiplicities(k: Sequence[int], n_spins: int = 5) -> Dict[str, Tuple[int, int]]:
    """
    (LCU, classical) count of every gate kind for a three-point S_1 MPF on
    an Ising chain with n_spins - 1 couplings per step

    The LCU circuit controls the two shallow branches twice and the deepest
    once, plus two controlled single-qubit rotations preparing the ancillas.
    """
    k = _check_exponents(k)
    if len(k) != 3:
        raise UnsupportedError(f"LCU gate accounting covers three extrapolation points, got {len(k)}")
    if n_spins < 2:
        raise InvalidInputError(f"Ising chain needs at least 2 spins, got {n_spins}")
    couplings = n_spins - 1
    k1, k2, k3 = k
    return {
        "rzz": (0, couplings * k3),
        "c1_rzz": (couplings * k3, 0),
        "c1_u": (couplings * k3 + 2, 0),
        "c2_rzz": (couplings * (k1 + k2), 0),
        "c2_rx": (couplings * (k1 + k2), 0),
    }


def lcu_cnot_count(k: Sequence[int], costs: Optional[GateCostTable] = None, n_spins: int = 5) -> int:
    """
    CNOTs of the LCU circuit; with five spins and the default costs this is
    108(k1 + k2) + 40 k3 + 4
    """
    costs = costs or GateCostTable()
    multiplicities = gate_multiplicities(k, n_spins)
    return sum(costs.cost(kind) * multiplicities[kind][0] for kind in GATE_KINDS)


def classical_cnot_count(k: Sequence[int], n_spins: int = 5) -> int:
    """The deepest circuit holds (n_spins - 1) k_l R_ZZ gates"""
    k = _check_exponents(k)
    if n_spins < 2:
        raise InvalidInputError(f"Ising chain needs at least 2 spins, got {n_spins}")
    return (n_spins - 1) * k[-1]


def cnot_comparison(
    k: Sequence[int], n_spins: int = 5, costs: Optional[GateCostTable] = None
) -> CnotComparison:
    return CnotComparison(
        k=tuple(k),
        n_spins=n_spins,
        lcu=lcu_cnot_count(k, costs, n_spins),
        classical=classical_cnot_count(k, n_spins),
        multiplicities=gate_multiplicities(k, n_spins),
    )


def lambert_w(z: float) -> float:
    """Principal branch W(z) for real z >= -1/e, Newton-polished"""
    if z < -1.0 / math.e:
        raise InvalidInputError(f"Lambert W is not real below -1/e, got {z}")
    w = float(lambertw(z).real)
    for _ in range(3):
        ew = math.exp(w)
        step = (w * ew - z) / (ew * (w + 1.0)) if w != -1.0 else 0.0
        w -= step
        if abs(step) < 1e-16:
            break
    return w


def factorial_points(y: float) -> int:
    """Smallest l >= 1 with (2l + 1)! > y"""
    l = 1
    while math.factorial(2 * l + 1) <= y:
        l += 1
    return l


def lambert_points(y: float) -> float:
    """Real l solving (x/e)^x = y with x = 2l + 1"""
    log_y = math.log(y)
    x = log_y / lambert_w(log_y / math.e)
    return (x - 1.0) / 2.0


def pf_depth_estimate(q: ScalingQuery) -> int:
    """Second-order Trotter steps ceil(sqrt(t^3 N_q^2 / eps_t))"""
    return math.ceil(math.sqrt(q.t ** 3 * q.n_qubits ** 2 / q.eps_t))


def mpf_depth_scaling(q: ScalingQuery, alpha: Optional[float] = None) -> DepthScaling:
    """
    Points l and deepest exponent k_l = ceil(alpha l^2) for a target accuracy

    `alpha` rescales the sequence for long times and defaults to t.
    """
    alpha = q.t if alpha is None or alpha <= 0 else alpha
    l = factorial_points(q.y)
    result = DepthScaling(
        query=q,
        l=l,
        k_l=math.ceil(alpha * l * l),
        alpha=alpha,
        lambert_l=lambert_points(q.y),
        pf_depth=pf_depth_estimate(q),
    )
    logger.debug(f"Depth scaling N_q={q.n_qubits} eps={q.eps_t}: l={l}, k_l={result.k_l}")
    return result


class RepetitionSearch:
    """
    Smallest Trotter exponent k whose error drops below eps_t

    Errors are cached per k, so repeated evaluations during doubling and
    bisection cost nothing.
    """

    def __init__(
        self,
        H: HamiltonianTerms,
        t: float,
        chi_order: int,
        metric: str = "operator-norm",
        observable: Optional[DenseOperator] = None,
        psi: Optional[StateVector] = None,
        budget: int = MAX_TROTTER_STEPS,
    ):
        if metric not in METRICS:
            raise InvalidInputError(f"Unknown metric '{metric}', expected one of {METRICS}")
        if metric == "observable" and observable is None:
            raise InvalidInputError("The observable metric needs an observable")
        self.propagator = Propagator(H)
        self.t = t
        self.chi_order = chi_order
        self.metric = metric
        self.observable = observable
        self.psi = psi or initial_state(H)
        self.budget = budget
        self.logger = logging.getLogger(__name__)
        self._errors: Dict[int, float] = {}
        if metric == "operator-norm":
            self._exact = self.propagator.exact_unitary(t).matrix
        else:
            self._exact = self.propagator.exact_expectation(t, self.psi, observable)

    def error(self, k: int) -> float:
        if k not in self._errors:
            if self.metric == "operator-norm":
                approx = self.propagator.pf_steps(self.t, k, self.chi_order).matrix
                self._errors[k] = spectral_distance(approx, self._exact)
            else:
                value = self.propagator.pf_expectation(self.t, k, self.chi_order, self.psi, self.observable)
                self._errors[k] = abs(value - self._exact)
        return self._errors[k]

    def _linear_scan(self, eps_t: float, upper: int) -> int:
        return next(k for k in range(1, upper + 1) if self.error(k) < eps_t)

    def minimal_steps(self, eps_t: float) -> int:
        if eps_t <= 0:
            raise InvalidInputError(f"Target accuracy must be positive, got {eps_t}")
        if self.error(1) < eps_t:
            return 1

        chain = [1]
        while self.error(chain[-1]) >= eps_t:
            if chain[-1] >= self.budget:
                raise BudgetExceededError(
                    f"S{self.chi_order} did not reach error {eps_t} within {self.budget} steps"
                )
            chain.append(min(2 * chain[-1], self.budget))
        lower, upper = chain[-2], chain[-1]

        # Only the doublings next to the bracket need to be in the decreasing regime
        tail = chain[-3:]
        increases = [(a, b) for a, b in zip(tail, tail[1:]) if self.error(b) >= self.error(a)]
        if increases:
            a, b = increases[0]
            self.logger.warning(f"Error not decreasing between k={a} and k={b}; scanning linearly")
            return self._linear_scan(eps_t, upper)

        while upper - lower > 1:
            middle = (lower + upper) // 2
            if self.error(middle) < eps_t:
                upper = middle
            else:
                lower = middle
        return upper


def pf_repetitions_to_accuracy(
    H: HamiltonianTerms,
    t: float,
    chi_order: int,
    eps_t: float,
    metric: str = "operator-norm",
    observable: Optional[DenseOperator] = None,
) -> Tuple[int, int, float]:
    """
    Repetitions of the deepest product-formula circuit reaching eps_t

    Returns:
        (repetitions, k, error at k), one repetition being one
        exp(-iH_j tau) factor after merging neighbours
    """
    search = RepetitionSearch(H, t, chi_order, metric, observable)
    k = search.minimal_steps(eps_t)
    return repetition_count(H.n_terms, chi_order, k), k, search.error(k)


def _repetition_cell(
    modes: int, n_max: int, eps_t: float, order: int, t: float, metric: str,
    omega: float, omega_s: float, delta: float, g: float,
) -> RepetitionResult:
    H = build_spin_boson(modes, n_max, omega, omega_s, delta, g)
    observable = spin_observable(H) if metric == "observable" else None
    repetitions, k, error = pf_repetitions_to_accuracy(H, t, order, eps_t, metric, observable)
    return RepetitionResult(
        model="spin-boson",
        n_qubits=int(np.ceil(np.log2(H.dim))),
        modes=modes,
        n_max=n_max,
        eps_t=eps_t,
        order=order,
        metric=metric,
        k=k,
        repetitions=repetitions,
        error=error,
    )


def repetition_table(
    models: Sequence[Tuple[int, int]],
    eps_values: Sequence[float],
    orders: Sequence[int],
    t: float = 10.0,
    metric: str = "operator-norm",
    omega: float = 1.0,
    omega_s: float = -1.0,
    delta: float = 0.0,
    g: float = 0.5,
    workers: int = 4,
) -> List[RepetitionResult]:
    """
    Repetitions for every (M, n_max) x eps_t x order cell of a spin-boson grid

    Cells run in parallel; the result order follows the input grid.
    """
    cells = [
        (modes, n_max, eps_t, order)
        for modes, n_max in models
        for eps_t in eps_values
        for order in orders
    ]
    logger.info(f"Repetition search over {len(cells)} cells")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_repetition_cell, modes, n_max, eps_t, order, t, metric, omega, omega_s, delta, g)
            for modes, n_max, eps_t, order in cells
        ]
        return [future.result() for future in futures]
