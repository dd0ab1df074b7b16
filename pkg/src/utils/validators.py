"""
Validation utilities for command-line arguments
"""

from typing import Sequence, Union


def validate_exponents(k: Sequence[int]) -> tuple[bool, str]:
    """
    Validate a Trotter-exponent sequence

    Args:
        k: Exponents as given on the command line

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not k:
        return False, "At least one Trotter exponent is required"

    if any(value < 1 for value in k):
        return False, "Trotter exponents must be at least 1"

    if any(b <= a for a, b in zip(k, k[1:])):
        return False, f"Trotter exponents must be strictly increasing, got {list(k)}"

    return True, ""


def validate_probability(p: Union[str, float]) -> tuple[bool, str]:
    """
    Validate a per-shot success probability

    Args:
        p: Probability to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        p_float = float(p)
    except (ValueError, TypeError):
        return False, "Probability must be a valid number"

    if not 0.0 < p_float < 1.0:
        return False, "Probability must lie strictly between 0 and 1"

    return True, ""


def validate_tolerance(eps: Union[str, float]) -> tuple[bool, str]:
    """
    Validate a target accuracy

    Args:
        eps: Tolerance to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        eps_float = float(eps)
    except (ValueError, TypeError):
        return False, "Tolerance must be a valid number"

    if eps_float <= 0:
        return False, "Tolerance must be positive"

    if eps_float >= 1:
        return False, "Tolerance must be below 1"

    return True, ""


def validate_search_range(k_min: int, k_max: int, length: int) -> tuple[bool, str]:
    """
    Validate an inclusive exponent range for a sequence search

    Args:
        k_min: Smallest exponent considered
        k_max: Largest exponent considered
        length: Number of exponents per sequence

    Returns:
        Tuple of (is_valid, error_message)
    """
    if k_min < 1:
        return False, "Range must start at 1 or above"

    if k_max - k_min + 1 < length:
        return False, f"Range [{k_min}, {k_max}] holds fewer than {length} exponents"

    return True, ""


def validate_seed(seed: Union[str, int]) -> tuple[bool, str]:
    """
    Validate a seed for the sampling streams

    Args:
        seed: Seed as given by flag, config file or environment

    Returns:
        Tuple of (is_valid, error_message); the seed must fit in 64 bits
    """
    try:
        seed_int = int(seed)
    except (ValueError, TypeError):
        return False, "Seed must be an integer"

    if not 0 <= seed_int < 2 ** 64:
        return False, "Seed must be a non-negative 64-bit integer"

    return True, ""
