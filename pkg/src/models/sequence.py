"""
MPF models: Trotter-exponent sequences, exact extrapolation weights and the
expectation records they combine
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..utils.errors import InvalidInputError


def format_fraction(value: Fraction) -> str:
    """'p/q', or 'p' for integers"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ExponentSequence:
    """
    Trotter exponents k_1 < ... < k_l over a base product formula

    Attributes:
        k: Strictly increasing positive exponents
        base_chi: Order of the base formula, 1 or even
        symmetric: Whether error terms skip every other power; defaults to
            True exactly for even base orders
    """
    k: Tuple[int, ...]
    base_chi: int = 1
    symmetric: Optional[bool] = None

    def __post_init__(self):
        k = tuple(int(value) for value in self.k)
        if not k:
            raise InvalidInputError("Exponent sequence cannot be empty")
        if k[0] < 1:
            raise InvalidInputError(f"Trotter exponents must be at least 1, got {k}")
        if any(b <= a for a, b in zip(k, k[1:])):
            raise InvalidInputError(f"Trotter exponents must be strictly increasing, got {k}")
        if self.base_chi < 1 or (self.base_chi > 1 and self.base_chi % 2):
            raise InvalidInputError(f"Base order must be 1 or even, got {self.base_chi}")

        symmetric = self.symmetric
        if symmetric is None:
            symmetric = self.base_chi % 2 == 0
        if symmetric and self.base_chi == 1:
            raise InvalidInputError("Lie-Trotter (order 1) is not a symmetric formula")

        object.__setattr__(self, "k", k)
        object.__setattr__(self, "symmetric", bool(symmetric))

    @property
    def length(self) -> int:
        return len(self.k)

    @property
    def k_max(self) -> int:
        return self.k[-1]

    def error_exponents(self) -> List[int]:
        """eta_n for n = 0..l-2: chi + 2n when symmetric, chi + n otherwise"""
        stride = 2 if self.symmetric else 1
        return [self.base_chi + stride * n for n in range(self.length - 1)]

    def __str__(self) -> str:
        return "[" + ", ".join(str(value) for value in self.k) + "]"


@dataclass(frozen=True)
class WeightVector:
    """
    Exact MPF weights for one sequence

    `weights` hold rationals; float views are derived. The constraint
    residual is verified exactly by the solver before construction.
    """
    sequence: ExponentSequence
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != self.sequence.length:
            raise InvalidInputError(
                f"{len(weights)} weights for a sequence of length {self.sequence.length}"
            )
        object.__setattr__(self, "weights", weights)

    @property
    def floats(self) -> List[float]:
        return [float(w) for w in self.weights]

    @property
    def norm1_exact(self) -> Fraction:
        return sum((abs(w) for w in self.weights), Fraction(0))

    @property
    def norm1(self) -> float:
        return float(self.norm1_exact)

    @property
    def norm2(self) -> float:
        return float(sum(w * w for w in self.weights)) ** 0.5

    def to_dict(self) -> Dict:
        return {
            "k": list(self.sequence.k),
            "base_chi": self.sequence.base_chi,
            "symmetric": self.sequence.symmetric,
            "weights": [format_fraction(w) for w in self.weights],
            "weights_float": self.floats,
            "norm1": format_fraction(self.norm1_exact),
            "norm1_float": self.norm1,
        }


@dataclass(frozen=True)
class ExpectationRecord:
    """
    One measured or simulated expectation value E_j at Trotter exponent k_j

    Attributes:
        k: Trotter exponent
        value: Expectation value
        shots: Shot count, None for exact simulation
        epsilon_prime: Magnitude of any injected perturbation
    """
    k: int
    value: float
    shots: Optional[int] = None
    epsilon_prime: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError(f"Trotter exponent must be at least 1, got {self.k}")
        if self.shots is not None and self.shots < 1:
            raise InvalidInputError(f"Shot count must be positive, got {self.shots}")
        if self.epsilon_prime < 0:
            raise InvalidInputError(f"Perturbation magnitude must be non-negative, got {self.epsilon_prime}")

    @property
    def exact(self) -> bool:
        return self.shots is None


@dataclass(frozen=True)
class RankedSequence:
    rank: int
    weights: WeightVector

    @property
    def sequence(self) -> ExponentSequence:
        return self.weights.sequence


@dataclass(frozen=True)
class SearchResult:
    """Ranked candidates of a sequence search plus how many were evaluated"""
    candidates: Tuple[RankedSequence, ...]
    evaluated: int
    diagnostic: str = ""
    accepted: int = field(default=0)

    @property
    def empty(self) -> bool:
        return not self.candidates

    @property
    def best(self) -> Optional[RankedSequence]:
        return self.candidates[0] if self.candidates else None
