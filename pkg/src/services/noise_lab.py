"""
Non-algorithmic error sources and mitigation: shot noise, adversarial
perturbation, the Bernoulli ill-conditioning demo, exponential ZNE and the
R_ZZ twirl-set check
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from config.settings import (
    COMMUTATOR_TOLERANCE, TWIRL_SET_ZZ, ZNE_B_GRID_MAX, ZNE_B_GRID_MIN, ZNE_B_GRID_SIZE, ZNE_MIN_POINTS
)
from ..models.noise import BernoulliDemoResult, ShotModel, TwirlVerdict, ZneCurve
from ..models.operators import PauliString
from ..models.sequence import ExponentSequence
from ..utils.errors import InvalidInputError
from .mpf_engine import solve_weights
from .operator_core import pauli_matrix

logger = logging.getLogger(__name__)


def sample_expectation(E_true: float, model: ShotModel, key: Tuple[int, ...] = ()) -> float:
    """Shot estimate 2 n_plus / shots - 1 with n_plus ~ Binomial(shots, (1 + E) / 2)"""
    if not -1.0 <= E_true <= 1.0:
        raise InvalidInputError(f"Expectation of a +-1 observable must lie in [-1, 1], got {E_true}")
    n_plus = model.generator(*key).binomial(model.shots, (1.0 + E_true) / 2.0)
    return 2.0 * n_plus / model.shots - 1.0


def inject_perturbation(E_j: float, a_j: float, eps_prime: float) -> float:
    """E_j + sign(a_j) eps', sign(0) = +1"""
    return E_j + (eps_prime if a_j >= 0 else -eps_prime)


def uniform_weights(l: int) -> List[Fraction]:
    return [Fraction(1, l)] * l


def bernoulli_mpf_demo(
    p: float,
    M: int,
    l: int,
    base_chi: int,
    seed: int,
    weights: Optional[Sequence[Fraction]] = None,
    repeat: int = 0,
) -> BernoulliDemoResult:
    """
    Combine l independent M-sample Bernoulli means with MPF weights for k_j = j

    Every E_j estimates the same p, so the combination is unbiased and only
    its variance reflects the weights. Passing `weights` replaces the MPF
    weights (uniform weights give plain averaging). Point j of a repeat draws
    from the stream keyed (repeat, j) under `seed`.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"Bernoulli probability must lie in (0, 1), got {p}")
    if M < 1:
        raise InvalidInputError(f"Sample count must be positive, got {M}")
    model = ShotModel(M, seed)
    if weights is None:
        weights = solve_weights(ExponentSequence(tuple(range(1, l + 1)), base_chi)).weights
    if len(weights) != l:
        raise InvalidInputError(f"{len(weights)} weights for {l} points")

    means = [model.generator(repeat, j).binomial(M, p) / M for j in range(1, l + 1)]
    estimate = math.fsum(float(a) * E for a, E in zip(weights, means))
    return BernoulliDemoResult(
        l=l,
        samples=M,
        p=p,
        base_chi=base_chi,
        estimate=estimate,
        norm1=float(sum(abs(Fraction(a)) for a in weights)),
        norm2=math.sqrt(sum(float(a) ** 2 for a in weights)),
    )


def _linear_subproblem(b: float, c: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """Closed-form (a, d) for fixed b, plus the squared residual"""
    design = np.column_stack([np.exp(-b * c), np.ones_like(c)])
    (a, d), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = design @ np.array([a, d]) - y
    return float(a), float(d), float(residual @ residual)


def zne_fit(points: Iterable[Tuple[float, float]]) -> ZneCurve:
    """
    Least-squares fit of y = a exp(-b c) + d with b >= 0

    b starts from the best of a log-spaced grid (with (a, d) solved exactly
    at every b), is refined by a bounded scalar search between the
    neighbouring grid points, then all three parameters are polished with a
    bounded trust-region solve.
    """
    ordered = sorted((float(c), float(y)) for c, y in points)
    if len(ordered) < ZNE_MIN_POINTS:
        raise InvalidInputError(f"ZNE fit needs at least {ZNE_MIN_POINTS} points, got {len(ordered)}")
    c = np.array([point[0] for point in ordered])
    y = np.array([point[1] for point in ordered])
    if len(np.unique(c)) < ZNE_MIN_POINTS:
        raise InvalidInputError(f"ZNE fit needs at least {ZNE_MIN_POINTS} distinct stretch factors")
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(y))):
        raise InvalidInputError("ZNE points must be finite")

    if np.ptp(y) <= 1e-12 * max(1.0, float(np.max(np.abs(y)))):
        logger.warning("ZNE data is constant; decay rate is unidentifiable")
        mean = float(np.mean(y))
        return ZneCurve(tuple(ordered), a=0.0, b=0.0, d=mean, degenerate=True,
                        residual=float(np.sum((y - mean) ** 2)))

    grid = np.logspace(np.log10(ZNE_B_GRID_MIN), np.log10(ZNE_B_GRID_MAX), ZNE_B_GRID_SIZE)
    costs = [_linear_subproblem(b, c, y)[2] for b in grid]
    best = int(np.argmin(costs))
    lower = grid[best - 1] if best > 0 else 0.0
    upper = grid[best + 1] if best < len(grid) - 1 else grid[best]

    refined = minimize_scalar(
        lambda b: _linear_subproblem(b, c, y)[2],
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": 1e-12},
    )
    b = float(refined.x) if refined.fun <= costs[best] else float(grid[best])
    a, d, cost = _linear_subproblem(b, c, y)

    polish = least_squares(
        lambda params: params[0] * np.exp(-params[1] * c) + params[2] - y,
        x0=[a, b, d],
        bounds=([-np.inf, 0.0, -np.inf], [np.inf, np.inf, np.inf]),
        method="trf",
        xtol=1e-14,
        ftol=1e-14,
        gtol=1e-14,
    )
    if 2.0 * polish.cost < cost:
        a, b, d = (float(value) for value in polish.x)
        cost = 2.0 * float(polish.cost)

    logger.debug(f"ZNE fit a={a:.6g} b={b:.6g} d={d:.6g} residual={cost:.3e}")
    return ZneCurve(tuple(ordered), a=a, b=max(b, 0.0), d=d, residual=cost)


def synth_noisy_expectation(
    E_ideal: float,
    c: float,
    b: float,
    d: float,
    model: ShotModel,
    key: Tuple[int, ...] = (),
) -> float:
    """Shot sample around (E_ideal - d) exp(-b c) + d"""
    if c < 0:
        raise InvalidInputError(f"Stretch factor must be non-negative, got {c}")
    mean = (E_ideal - d) * math.exp(-b * c) + d
    return sample_expectation(mean, model, key)


def zne_round_trip(
    E_ideal: float,
    b: float,
    d: float,
    stretches: Sequence[float],
    model: ShotModel,
    repeat: int = 0,
) -> ZneCurve:
    """Synthesize noisy points at every stretch factor and fit them"""
    points = [
        (float(c), synth_noisy_expectation(E_ideal, c, b, d, model, (repeat, i)))
        for i, c in enumerate(stretches)
    ]
    return zne_fit(points)


def rzz(theta: float) -> np.ndarray:
    """R_ZZ(theta) = cos(theta/2) I - i sin(theta/2) Z Z"""
    return (
        math.cos(theta / 2) * np.eye(4, dtype=np.complex128)
        - 1j * math.sin(theta / 2) * pauli_matrix(PauliString("ZZ")).matrix
    )


def twirl_set_check(theta: float, pairs: Sequence[str] = TWIRL_SET_ZZ) -> List[TwirlVerdict]:
    """Commutation of each two-qubit Pauli with R_ZZ(theta)"""
    gate = rzz(theta)
    verdicts = []
    for label in pairs:
        pauli = pauli_matrix(PauliString(label)).matrix
        deviation = float(np.max(np.abs(pauli @ gate - gate @ pauli)))
        verdicts.append(TwirlVerdict(label, deviation <= COMMUTATOR_TOLERANCE, deviation))
    return verdicts
