"""
Noise models: seeded shot sampling, ZNE fit results, demo outcomes
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..utils.errors import InvalidInputError

MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class ShotModel:
    """
    Finite-shot measurement of a +-1 observable

    Every task draws from its own stream keyed by a tuple of integers
    (for example (k_j,) or (repeat, stretch_index)), so results do not
    depend on the order or thread in which tasks run.
    """
    shots: int
    seed: int

    def __post_init__(self):
        if not isinstance(self.shots, (int, np.integer)) or self.shots < 1:
            raise InvalidInputError(f"Shot count must be a positive integer, got {self.shots}")
        if not 0 <= self.seed < MAX_SEED:
            raise InvalidInputError(f"Seed must fit in 64 unsigned bits, got {self.seed}")

    def generator(self, *key: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=tuple(key)))


@dataclass(frozen=True)
class ZneCurve:
    """
    Stretch-factor samples with the fitted a*exp(-b*c) + d

    Attributes:
        points: (c, y) pairs sorted by c
        a, b, d: Fit parameters, b >= 0
        degenerate: True when y is constant and b cannot be identified
        residual: Sum of squared fit residuals
    """
    points: Tuple[Tuple[float, float], ...]
    a: float
    b: float
    d: float
    degenerate: bool = False
    residual: float = 0.0

    def __post_init__(self):
        stretches = [c for c, _ in self.points]
        if len(set(stretches)) != len(stretches):
            raise InvalidInputError("Stretch factors must be distinct")
        if self.b < 0:
            raise InvalidInputError(f"Decay rate must be non-negative, got {self.b}")

    @property
    def extrapolated(self) -> float:
        """Zero-noise limit c -> 0"""
        return self.a + self.d


@dataclass(frozen=True)
class BernoulliDemoResult:
    l: int
    samples: int
    p: float
    base_chi: int
    estimate: float
    norm1: float
    norm2: float

    @property
    def error(self) -> float:
        return abs(self.estimate - self.p)


@dataclass(frozen=True)
class TwirlVerdict:
    pair: str
    commutes: bool
    deviation: float
