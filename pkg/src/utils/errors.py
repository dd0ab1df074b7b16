"""
Exception hierarchy shared by all services; the CLI maps each class to an exit code
"""


class MpfLabError(Exception):
    """Base class for all mpf-lab errors"""

    exit_code = 1


class InvalidInputError(MpfLabError, ValueError):
    """Bad argument, malformed value, or violated precondition"""

    exit_code = 2


class UnsupportedError(InvalidInputError):
    """Valid input that a particular operation does not cover"""


class CapacityError(MpfLabError):
    """Problem size exceeds the dense-representation limits"""

    exit_code = 3


class NumericalError(MpfLabError, ArithmeticError):
    """A computation failed a numerical consistency check"""

    exit_code = 4


class BudgetExceededError(NumericalError):
    """An iterative search hit its iteration budget without converging"""
