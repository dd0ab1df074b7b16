"""
Resource-estimation models: gate costs, depth-scaling queries and results
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, Tuple

from config.settings import DEFAULT_GATE_COSTS
from ..utils.errors import InvalidInputError

GATE_KINDS = ("rzz", "c1_rzz", "c1_u", "c2_rzz", "c2_rx")


@dataclass(frozen=True)
class GateCostTable:
    """
    CNOT count of every gate kind after transpilation

    Attributes:
        rzz: R_ZZ(theta), counted as a single CNOT
        c1_rzz: singly-controlled R_ZZ
        c1_u: singly-controlled single-qubit unitary
        c2_rzz: doubly-controlled R_ZZ
        c2_rx: doubly-controlled R_X
    """
    rzz: int = DEFAULT_GATE_COSTS["rzz"]
    c1_rzz: int = DEFAULT_GATE_COSTS["c1_rzz"]
    c1_u: int = DEFAULT_GATE_COSTS["c1_u"]
    c2_rzz: int = DEFAULT_GATE_COSTS["c2_rzz"]
    c2_rx: int = DEFAULT_GATE_COSTS["c2_rx"]

    def __post_init__(self):
        for kind, cost in asdict(self).items():
            if cost < 0:
                raise InvalidInputError(f"Gate cost for {kind} must be non-negative, got {cost}")

    @classmethod
    def from_dict(cls, costs: Dict[str, int]) -> "GateCostTable":
        unknown = set(costs) - set(GATE_KINDS)
        if unknown:
            raise InvalidInputError(f"Unknown gate kinds {sorted(unknown)}")
        return cls(**costs)

    @classmethod
    def zero(cls) -> "GateCostTable":
        return cls(**{kind: 0 for kind in GATE_KINDS})

    def cost(self, kind: str) -> int:
        return getattr(self, kind)


@dataclass(frozen=True)
class ScalingQuery:
    """Qubit count, target accuracy and simulation time for a depth estimate"""
    n_qubits: int
    eps_t: float
    t: float = 1.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidInputError(f"Qubit count must be at least 1, got {self.n_qubits}")
        if not 0.0 < self.eps_t < 1.0:
            raise InvalidInputError(f"Target accuracy must lie in (0, 1), got {self.eps_t}")
        if self.t <= 0:
            raise InvalidInputError(f"Simulation time must be positive, got {self.t}")

    @property
    def y(self) -> float:
        return self.n_qubits / self.eps_t


@dataclass(frozen=True)
class DepthScaling:
    """
    Extrapolation points and deepest Trotter exponent for a query

    `l` comes from the factorial inequality; `lambert_l` is the real-valued
    Stirling/Lambert-W estimate of the same quantity.
    """
    query: ScalingQuery
    l: int
    k_l: int
    alpha: float
    lambert_l: float
    pf_depth: int

    def to_dict(self) -> Dict:
        return {
            "nq": self.query.n_qubits,
            "eps": self.query.eps_t,
            "t": self.query.t,
            "alpha": self.alpha,
            "l": self.l,
            "k_l": self.k_l,
            "lambert_l": self.lambert_l,
            "pf_depth_s2": self.pf_depth,
        }


@dataclass(frozen=True)
class CnotComparison:
    k: Tuple[int, ...]
    n_spins: int
    lcu: int
    classical: int
    multiplicities: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.lcu / self.classical if self.classical else float("inf")

    def to_dict(self) -> Dict:
        return {
            "k": list(self.k),
            "n_spins": self.n_spins,
            "lcu": self.lcu,
            "classical": self.classical,
            "ratio": round(self.ratio, 2),
            "reduction": f"{round(self.ratio)}x",
        }


@dataclass(frozen=True)
class RepetitionResult:
    """Smallest Trotter exponent reaching eps_t and its factor count"""
    model: str
    n_qubits: int
    modes: int
    n_max: int
    eps_t: float
    order: int
    metric: str
    k: int
    repetitions: int
    error: float
