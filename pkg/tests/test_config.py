import json

import pytest

from resonpy.config import (
    FIELDS,
    Command,
    ExperimentConfig,
    GcdMode,
    LemmaName,
    boolean,
    fields_for,
    integer,
)
from resonpy.exceptions import InvalidConfig
from resonpy.limits import DEFAULT_CAPS
from resonpy.zeta import ZetaMethod


@pytest.mark.parametrize(("value", "expected"), [(3, 3), (3.0, 3), ("1e5", 100000), ("12", 12)])
def test_integer(value, expected):
    assert integer(value) == expected


@pytest.mark.parametrize("value", [True, 2.5, "abc"])
def test_integer_rejects(value):
    with pytest.raises(ValueError):
        integer(value)


@pytest.mark.parametrize(("value", "expected"), [(True, True), ("yes", True), ("0", False), ("False", False)])
def test_boolean(value, expected):
    assert boolean(value) is expected


def test_flags_are_unique():
    flags = [f.flag for f in FIELDS]
    assert len(flags) == len(set(flags))
    assert "--mn-limit" in flags


def test_fields_for_command():
    names = {f.name for f in fields_for(Command.GCD_SUM)}
    assert {"alpha", "M", "R", "k", "mode"} <= names
    assert "T" not in names
    assert "samples" not in names


def test_defaults():
    config = ExperimentConfig("gcd-sum", alpha=0.75, M=4)
    assert config.mode is GcdMode.PRODUCT
    assert config.k == 0
    assert config.log_level == "WARNING"
    assert config.resource_caps == DEFAULT_CAPS
    assert config.T is None


def test_coercion():
    config = ExperimentConfig("zeta", alpha="0.75", t="10", method="reference", digits="20")
    assert config.alpha == 0.75
    assert config.method is ZetaMethod.REFERENCE
    assert config.digits == 20


def test_unknown_command():
    with pytest.raises(InvalidConfig):
        ExperimentConfig("integrate", alpha=0.75)


def test_unknown_key():
    with pytest.raises(InvalidConfig):
        ExperimentConfig("search", alpha=0.75, T=100, colour="red")


def test_key_of_other_command():
    with pytest.raises(InvalidConfig):
        ExperimentConfig("search", alpha=0.75, T=100, samples=10)


def test_wrong_type():
    with pytest.raises(InvalidConfig):
        ExperimentConfig("gcd-sum", alpha=0.75, M="four")


def test_from_json_file(search_config_path):
    config = ExperimentConfig.from_json(search_config_path)
    assert config.command is Command.SEARCH
    assert config.T == 100
    assert config.step == 0.1
    assert config.validate() is config


def test_overrides_take_precedence(search_config_path):
    config = ExperimentConfig.from_json(search_config_path, T=200.0, refine=0)
    assert config.T == 200
    assert config.refine == 0
    assert config.alpha == 0.75


def test_from_json_dict_and_round_trip():
    d = {"command": "measure", "alpha": 0.75, "tau": 0.05, "T": 1e4, "samples": 1000, "seed": 7}
    config = ExperimentConfig.from_json(d)
    assert ExperimentConfig.from_json(config.to_dict()) == config
    assert config.to_dict()["command"] == "measure"
    assert json.loads(json.dumps(config.to_dict())) == config.to_dict()


def test_missing_command():
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_json({"alpha": 0.75})


def test_unreadable_file(tmpdir):
    path = tmpdir.join("broken.json")
    path.write("{not json")
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_json(str(path))
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_json(str(tmpdir.join("missing.json")))


def test_caps_from_file(capped_config_path):
    config = ExperimentConfig.from_json(capped_config_path)
    assert config.resource_caps.max_exact_M == 6
    assert config.resource_caps.max_search_T == DEFAULT_CAPS.max_search_T


def test_unknown_cap():
    config = ExperimentConfig("construct", alpha=0.75, T=1e4, caps={"max_everything": 1})
    with pytest.raises(InvalidConfig):
        config.validate()


@pytest.mark.parametrize(
    "values",
    [
        {"command": "search", "T": 100},
        {"command": "search", "alpha": 0.75},
        {"command": "measure", "alpha": 0.75, "T": 1e4, "samples": 10},
        {"command": "lemma-check"},
        {"command": "lemma-check", "lemma": "1b", "alpha": 0.75},
        {"command": "lemma-check", "lemma": "1", "alpha": 0.75},
    ],
)
def test_missing_required(values):
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_json(values).validate()


@pytest.mark.parametrize(
    "values",
    [
        {"command": "search", "alpha": 0.5, "T": 100},
        {"command": "search", "alpha": 1.0, "T": 100},
        {"command": "search", "alpha": 0.75, "T": 10},
        {"command": "search", "alpha": 0.75, "T": 100, "step": 0.5},
        {"command": "search", "alpha": 0.75, "T": 100, "refine": -1},
        {"command": "search", "alpha": 0.75, "T": 100, "threads": 0},
        {"command": "search", "alpha": 0.75, "T": 100, "log_level": "LOUD"},
        {"command": "measure", "alpha": 0.75, "tau": 0.5, "T": 1e4, "samples": 10},
        {"command": "measure", "alpha": 0.75, "tau": 0.05, "T": 1e4, "samples": 0},
        {"command": "measure", "alpha": 0.75, "tau": 0.05, "T": 1e4, "samples": 10, "seed": -1},
        {"command": "gcd-sum", "alpha": 0.75, "M": 0},
    ],
)
def test_invalid_values(values):
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_json(values).validate()


def test_lemma_without_parameters():
    config = ExperimentConfig("lemma-check", lemma="stirling").validate()
    assert config.lemma is LemmaName.STIRLING


def test_lemma1_takes_T_instead_of_M():
    ExperimentConfig("lemma-check", lemma="1", alpha=0.75, T=1e6).validate()
    ExperimentConfig("lemma-check", lemma="1", alpha=0.75, M=16).validate()


@pytest.mark.parametrize(
    "values",
    [
        {"alpha": 0.75},
        {"alpha": 0.75, "t": 10, "t_start": 0, "t_stop": 1, "t_step": 0.1, "method": "reference"},
        {"alpha": 0.75, "t_start": 0, "t_stop": 1, "t_step": 0, "method": "reference"},
        {"alpha": 0.75, "t": 10},
    ],
)
def test_invalid_zeta(values):
    with pytest.raises(InvalidConfig):
        ExperimentConfig("zeta", **values).validate()


def test_t_grid_includes_stop():
    config = ExperimentConfig("zeta", alpha=0.75, t_start=10, t_stop=11, t_step=0.1, T=100)
    grid = config.t_grid()
    assert len(grid) == 11
    assert grid[0] == 10
    assert grid[-1] == pytest.approx(11)
