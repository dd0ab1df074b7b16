"""
Experiment configuration: defaults, an optional key=value file and flag overrides
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional

from config.settings import DEFAULT_SEED, EXPERIMENT_DEFAULTS, SEED_ENV_VAR, TOOL_NAME, VERSION
from ..utils.errors import InvalidInputError
from ..utils.validators import validate_seed

logger = logging.getLogger(__name__)


def read_config_file(path: str) -> Dict[str, str]:
    """
    Parse a flat key=value file

    Blank lines and lines starting with '#' are skipped; whitespace around
    keys and values is stripped.
    """
    if not os.path.exists(path):
        raise InvalidInputError(f"Config file not found: {path}")

    values = {}
    with open(path, 'r', encoding='utf-8') as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{line_number}: expected key=value, got '{line}'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise InvalidInputError(f"{path}:{line_number}: empty key")
            values[key] = value
    return values


def _coerce(key: str, value: Any, default: Any) -> Any:
    try:
        if isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, str):
                as_float = float(value)
                if not as_float.is_integer():
                    raise ValueError
                return int(as_float)
            return int(value)
        if isinstance(default, float):
            return float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"Invalid value '{value}' for '{key}' (expected {type(default).__name__})")
    return str(value)


def _parse_seed(value: Any, source: str) -> int:
    is_valid, message = validate_seed(value)
    if not is_valid:
        raise InvalidInputError(f"{message} (from {source}), got '{value}'")
    return int(value)


@dataclass
class ExperimentConfig:
    """
    Fully resolved parameters of one run

    Attributes:
        experiment: Subcommand name
        parameters: Every key of the experiment's defaults, typed like them
        seed: RNG seed of the run
        output: Artifact path, None for the default location
    """
    experiment: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    output: Optional[str] = None

    @classmethod
    def resolve(
        cls,
        experiment: str,
        overrides: Optional[Mapping[str, Any]] = None,
        config_file: Optional[str] = None,
        seed: Optional[int] = None,
        output: Optional[str] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> "ExperimentConfig":
        """
        Merge defaults, config file and flags (flags win)

        Seed precedence: flag, then the file's `seed`, then the environment
        variable, then the built-in default.
        """
        if experiment not in EXPERIMENT_DEFAULTS:
            raise InvalidInputError(f"Unknown experiment '{experiment}'")
        defaults = EXPERIMENT_DEFAULTS[experiment]
        environ = os.environ if environ is None else environ

        file_values = read_config_file(config_file) if config_file else {}
        file_seed = file_values.pop("seed", None)

        given = dict(file_values)
        given.update({key: value for key, value in (overrides or {}).items() if value is not None})
        unknown = sorted(set(given) - set(defaults))
        if unknown:
            raise InvalidInputError(f"Unknown keys for {experiment}: {', '.join(unknown)}")

        parameters = {
            key: _coerce(key, given[key], default) if key in given else default
            for key, default in defaults.items()
        }

        if seed is not None:
            resolved_seed = _parse_seed(seed, "--seed")
        elif file_seed is not None:
            resolved_seed = _parse_seed(file_seed, config_file)
        elif environ.get(SEED_ENV_VAR):
            resolved_seed = _parse_seed(environ[SEED_ENV_VAR], SEED_ENV_VAR)
        else:
            resolved_seed = DEFAULT_SEED

        logger.debug(f"Resolved {experiment} config with seed {resolved_seed}: {parameters}")
        return cls(experiment, parameters, resolved_seed, output)

    def __getitem__(self, key: str) -> Any:
        return self.parameters[key]

    def header_line(self) -> str:
        """`# mpf-lab v<version> seed=<n> experiment=<name> key=value ...`, keys sorted"""
        pairs = " ".join(f"{key}={self.parameters[key]}" for key in sorted(self.parameters))
        return f"# {TOOL_NAME} v{VERSION} seed={self.seed} experiment={self.experiment} {pairs}".rstrip()

    def meta(self) -> Dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "version": VERSION,
            "seed": self.seed,
            "experiment": self.experiment,
            "parameters": {key: self.parameters[key] for key in sorted(self.parameters)},
        }
