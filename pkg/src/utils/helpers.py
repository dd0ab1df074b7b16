"""
Helper utilities for logging, console summaries, and parsing list-valued options
"""

import logging
import re
import sys
from datetime import datetime
from typing import List, Optional, Tuple

from .errors import InvalidInputError


def setup_logging(log_level: str = "INFO", log_file: str = None) -> None:
    """
    Set up logging configuration

    The console handler writes to stderr so artifacts printed on stdout
    stay machine-readable.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional log file path
    """
    level = getattr(logging, log_level.upper(), logging.INFO)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)


def print_separator(title: str = "", char: str = "=", width: int = 60) -> None:
    """
    Print a formatted separator line with optional title

    Args:
        title: Optional title to center in separator
        char: Character to use for separator
        width: Total width of separator
    """
    if title:
        title = f" {title} "
        remaining_width = width - len(title)
        left_padding = remaining_width // 2
        right_padding = remaining_width - left_padding
        print(f"{char * left_padding}{title}{char * right_padding}")
    else:
        print(char * width)


def print_summary_table(stats: dict, title: str = "Summary") -> None:
    """
    Print a formatted summary table

    Args:
        stats: Dictionary of statistics to display
        title: Table title
    """
    print_separator(title)

    max_key_length = max(len(str(key)) for key in stats.keys()) if stats else 0

    for key, value in stats.items():
        formatted_key = str(key).replace('_', ' ')
        if isinstance(value, float):
            formatted_value = f"{value:.6g}"
        else:
            formatted_value = str(value)
        print(f"{formatted_key:<{max_key_length + 2}}: {formatted_value}")

    print_separator()


def get_timestamp_string(format_string: str = "%Y%m%d_%H%M%S") -> str:
    """
    Current local time for default artifact names

    Args:
        format_string: strftime format

    Returns:
        Formatted timestamp
    """
    return datetime.now().strftime(format_string)


def parse_int_list(text: str) -> Tuple[int, ...]:
    """'1,2,7' -> (1, 2, 7)"""
    try:
        return tuple(int(item) for item in str(text).split(",") if item.strip())
    except ValueError:
        raise InvalidInputError(f"Expected comma-separated integers, got '{text}'")


def parse_float_list(text: str) -> Tuple[float, ...]:
    """
    Parse comma-separated numbers, e.g. '1e-2,1e-3' -> (0.01, 0.001)

    Args:
        text: Flag or config-file value

    Returns:
        Tuple of floats; empty items are skipped
    """
    try:
        return tuple(float(item) for item in str(text).split(",") if item.strip())
    except ValueError:
        raise InvalidInputError(f"Expected comma-separated numbers, got '{text}'")


def parse_sequence_list(text: str) -> List[Tuple[int, ...]]:
    """'1,2;1,3' -> [(1, 2), (1, 3)]"""
    return [parse_int_list(chunk) for chunk in str(text).split(";") if chunk.strip()]


def parse_range(text: str) -> Tuple[int, int]:
    """
    Parse an inclusive exponent range

    Args:
        text: Range written as 'k_min:k_max', e.g. '1:10'

    Returns:
        (k_min, k_max)
    """
    match = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", str(text))
    if not match:
        raise InvalidInputError(f"Expected a range 'k_min:k_max', got '{text}'")
    return int(match.group(1)), int(match.group(2))


def parse_base(text: str) -> int:
    """
    Product-formula name to order: 's1' -> 1, 's2' -> 2, 's4' -> 4

    Args:
        text: Formula name, case-insensitive

    Returns:
        Order of the formula, 1 or even
    """
    match = re.fullmatch(r"[sS](\d+)", str(text).strip())
    if not match:
        raise InvalidInputError(f"Expected a product formula like s1, s2 or s4, got '{text}'")
    order = int(match.group(1))
    if order < 1 or (order > 1 and order % 2):
        raise InvalidInputError(f"Product formula order must be 1 or even, got {order}")
    return order


def parse_symmetric(text) -> Optional[bool]:
    """'auto' -> None (follow the base order), otherwise a boolean"""
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value == "auto":
        return None
    if value in ("true", "yes", "1"):
        return True
    if value in ("false", "no", "0"):
        return False
    raise InvalidInputError(f"Expected auto, true or false, got '{text}'")
