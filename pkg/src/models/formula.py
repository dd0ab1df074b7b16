"""
Product-formula model: Lie-Trotter (order 1) and the symmetric Suzuki ladder
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

from ..utils.errors import InvalidInputError


def suzuki_coefficient(p: int) -> float:
    """s_p = 1 / (4 - 4^(1/(2p-1)))"""
    if p < 1:
        raise InvalidInputError(f"Suzuki index must be positive, got {p}")
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * p - 1)))


# Sub-times of one recursion level as (constant, multiple of s_p):
# s, s, 1 - 4s, s, s
RECURSION_WEIGHTS: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(1)),
    (Fraction(1), Fraction(-4)),
    (Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(1)),
)


@dataclass(frozen=True)
class ProductFormulaSpec:
    """
    Product formula of a given order

    Attributes:
        chi_order: 1 for Lie-Trotter, 2*chi for the symmetric formulas
        symmetric: True exactly for the even orders
        s_constants: s_p for p = 2..chi, the recursion coefficients in use
    """
    chi_order: int
    symmetric: bool = field(init=False)
    s_constants: Tuple[float, ...] = field(init=False)

    def __post_init__(self):
        order = self.chi_order
        if not isinstance(order, int) or order < 1 or (order > 1 and order % 2):
            raise InvalidInputError(f"Product formula order must be 1 or even, got {order}")
        object.__setattr__(self, "symmetric", order % 2 == 0)
        object.__setattr__(
            self, "s_constants", tuple(suzuki_coefficient(p) for p in range(2, order // 2 + 1))
        )

    @property
    def name(self) -> str:
        return f"S{self.chi_order}"
