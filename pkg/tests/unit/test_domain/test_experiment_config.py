import sys
from pathlib import Path

import pytest
from pydantic import ValidationError

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.domain.experiment_config import (  # noqa: E402
    COMMANDS,
    ExperimentConfig,
    MapSpecModel,
    RingSpecModel,
)

CUBE = {
    "space": "projective",
    "dim": 1,
    "polys": [
        {"monomials": [{"exps": [3, 0], "coeff": "1"}]},
        {"monomials": [{"exps": [0, 3], "coeff": 1}]},
    ],
}


def test_defaults():
    config = ExperimentConfig(command="power-map", q=2, p=3)
    assert config.k_max == 10
    assert config.format == "json"
    assert config.output is None
    assert config.deterministic is True


def test_every_command_is_accepted():
    assert len(COMMANDS) == 11
    for command in COMMANDS:
        with pytest.raises(ValidationError) as exc:
            ExperimentConfig(command=command)
        assert f"{command} needs" in str(exc.value)


def test_dynamics_commands_need_a_map():
    with pytest.raises(ValidationError) as exc:
        ExperimentConfig(command="census", ring={"p": 5})
    assert "map or map_path" in str(exc.value)
    config = ExperimentConfig(command="census", ring={"p": 5}, map=CUBE)
    assert config.map.polys[0].monomials[0].exps == [3, 0]
    assert config.ring.eisenstein == "default"


def test_certify_needs_point():
    with pytest.raises(ValidationError):
        ExperimentConfig(command="certify", ring={"p": 3}, map=CUBE)


def test_unknown_keys_are_rejected():
    with pytest.raises(ValidationError):
        ExperimentConfig(command="density", p=5, colour="blue")
    with pytest.raises(ValidationError):
        RingSpecModel(p=5, ramification=2)


def test_deterministic_cannot_be_disabled():
    with pytest.raises(ValidationError):
        ExperimentConfig(command="density", p=5, deterministic=False)


def test_unknown_format_rejected():
    with pytest.raises(ValidationError):
        ExperimentConfig(command="density", p=5, format="pdf")


def test_ring_model_accepts_presets_and_lists():
    assert RingSpecModel(p=3, e=2, eisenstein="zeta_p").eisenstein == "zeta_p"
    assert RingSpecModel(p=3, e=2, eisenstein=[3, 3, 1]).eisenstein == [3, 3, 1]
    with pytest.raises(ValidationError):
        RingSpecModel(p=3, eisenstein="nonsense")
    with pytest.raises(ValidationError):
        RingSpecModel(p=1)


def test_map_model_shape_checks():
    assert MapSpecModel.model_validate(CUBE).dim == 1
    short = dict(CUBE, polys=CUBE["polys"][:1])
    with pytest.raises(ValidationError):
        MapSpecModel.model_validate(short)
    wrong_arity = {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [1, 1], "coeff": 1}]}]}
    with pytest.raises(ValidationError):
        MapSpecModel.model_validate(wrong_arity)


def test_monomial_checks():
    negative = {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [-1], "coeff": 1}]}]}
    with pytest.raises(ValidationError):
        MapSpecModel.model_validate(negative)
    bad_coeff = {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [1], "coeff": "1.5"}]}]}
    with pytest.raises(ValidationError):
        MapSpecModel.model_validate(bad_coeff)
    big = {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [1], "coeff": str(10**30)}]}]}
    assert MapSpecModel.model_validate(big).polys[0].monomials[0].coeff == str(10**30)
