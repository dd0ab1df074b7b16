import pytest

from config.settings import DEFAULT_SEED, EXPERIMENT_DEFAULTS
from src.models.experiment import ExperimentConfig, read_config_file
from src.utils.errors import InvalidInputError
from src.utils.helpers import (
    parse_base,
    parse_float_list,
    parse_int_list,
    parse_range,
    parse_sequence_list,
    parse_symmetric,
)
from src.utils.validators import (
    validate_exponents,
    validate_probability,
    validate_search_range,
    validate_seed,
    validate_tolerance,
)


def test_defaults_fill_every_key():
    config = ExperimentConfig.resolve("zne-demo", environ={})
    assert config.parameters == EXPERIMENT_DEFAULTS["zne-demo"]
    assert config.seed == DEFAULT_SEED
    assert config["shots"] == 100000


def test_seed_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("seed = 21\n")
    environ = {"MPF_LAB_SEED": "8"}

    assert ExperimentConfig.resolve("weights", environ=environ).seed == 8
    assert ExperimentConfig.resolve("weights", config_file=str(path), environ=environ).seed == 21
    assert ExperimentConfig.resolve("weights", config_file=str(path), seed=4, environ=environ).seed == 4


def test_bad_seeds():
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("weights", environ={"MPF_LAB_SEED": "abc"})
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("weights", seed=-1, environ={})
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("weights", seed=2 ** 64, environ={})
    assert ExperimentConfig.resolve("weights", seed=2 ** 64 - 1, environ={}).seed == 2 ** 64 - 1


def test_values_are_coerced_to_default_types():
    config = ExperimentConfig.resolve("zne-demo", {"shots": "1e3", "b": "2"}, environ={})
    assert config["shots"] == 1000 and isinstance(config["shots"], int)
    assert config["b"] == 2.0 and isinstance(config["b"], float)
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("zne-demo", {"shots": "2.5"}, environ={})
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("zne-demo", {"b": "fast"}, environ={})


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("points = 8\nrepeats = 3\n")
    config = ExperimentConfig.resolve("zne-demo", {"points": 12, "repeats": None}, config_file=str(path), environ={})
    assert config["points"] == 12
    assert config["repeats"] == 3


def test_unknown_experiment_and_keys():
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("teleport", environ={})
    with pytest.raises(InvalidInputError):
        ExperimentConfig.resolve("weights", {"shots": 10}, environ={})


def test_read_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\n\n  k =  1,2,7 \nbase=s2\n")
    assert read_config_file(str(path)) == {"k": "1,2,7", "base": "s2"}

    path.write_text("k 1,2\n")
    with pytest.raises(InvalidInputError):
        read_config_file(str(path))
    with pytest.raises(InvalidInputError):
        read_config_file(str(tmp_path / "missing.cfg"))


def test_header_line_sorts_keys():
    config = ExperimentConfig.resolve("scaling", environ={}, seed=7)
    assert config.header_line() == "# mpf-lab v0.1.0 seed=7 experiment=scaling alpha=0.0 eps=0.0001 nq=11 t=10.0"
    assert list(config.meta()["parameters"]) == ["alpha", "eps", "nq", "t"]


def test_list_parsers():
    assert parse_int_list("1, 2,7") == (1, 2, 7)
    assert parse_float_list("1e-2,1e-3") == (1e-2, 1e-3)
    assert parse_sequence_list("1,2;1,3;") == [(1, 2), (1, 3)]
    assert parse_range(" 2 : 9 ") == (2, 9)
    with pytest.raises(InvalidInputError):
        parse_int_list("1,two")
    with pytest.raises(InvalidInputError):
        parse_range("2-9")


def test_base_and_symmetry_parsers():
    assert [parse_base(name) for name in ("s1", "S2", "s4")] == [1, 2, 4]
    for bad in ("s3", "s0", "trotter"):
        with pytest.raises(InvalidInputError):
            parse_base(bad)
    assert parse_symmetric("auto") is None
    assert parse_symmetric("Yes") is True
    assert parse_symmetric(False) is False
    with pytest.raises(InvalidInputError):
        parse_symmetric("maybe")


def test_validators():
    assert validate_exponents((1, 2, 7)) == (True, "")
    assert not validate_exponents(())[0]
    assert not validate_exponents((0, 2))[0]
    assert not validate_exponents((3, 3))[0]
    assert validate_probability("0.3")[0]
    assert not validate_probability(1.0)[0]
    assert validate_tolerance(1e-4)[0]
    assert not validate_tolerance("x")[0]
    assert not validate_tolerance(0)[0]
    assert validate_search_range(1, 5, 2)[0]
    assert not validate_search_range(6, 6, 2)[0]
    assert not validate_search_range(0, 5, 2)[0]
    assert validate_seed("42")[0]
    assert not validate_seed(2 ** 64)[0]
