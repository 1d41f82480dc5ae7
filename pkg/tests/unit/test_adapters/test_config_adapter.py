import json
import sys
from pathlib import Path
from unittest.mock import Mock

import pytest

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.adapters.config_adapter import ConfigAdapter  # noqa: E402
from periodlab.adapters.file_adapter import FileAdapter  # noqa: E402
from periodlab.domain.exceptions import NotEisenstein, SchemaError  # noqa: E402
from periodlab.domain.experiment_config import ExperimentConfig  # noqa: E402
from periodlab.domain.settings import LabSettings  # noqa: E402

SQUARE = {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [2], "coeff": "1"}]}]}


def make_adapter():
    logger = __import__("logging").getLogger("test")
    return ConfigAdapter(logger)


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_build_config_wraps_validation_errors():
    adapter = make_adapter()
    with pytest.raises(SchemaError) as exc:
        adapter.build_config({"command": "sieve", "q": 2})
    assert "sieve needs p" in str(exc.value)
    assert exc.value.details["errors"][0]["loc"] == []


def test_load_config_merges_overrides(tmp_path):
    adapter = make_adapter()
    path = write_json(tmp_path / "run.json", {"command": "power-map", "q": 2, "p": 3, "k_max": 4})

    config = adapter.load_config(path, {"k_max": 2, "format": None})

    assert config.k_max == 2
    assert config.format == "json"


def test_load_config_merges_ring_overrides_key_by_key(tmp_path):
    adapter = make_adapter()
    path = write_json(
        tmp_path / "run.json",
        {"command": "census", "map": SQUARE, "ring": {"p": 7, "e": 2, "eisenstein": "variant"}},
    )

    config = adapter.load_config(path, {"ring": {"precision": 8, "f": None}})

    assert (config.ring.p, config.ring.e, config.ring.precision) == (7, 2, 8)
    assert config.ring.eisenstein == "variant"
    assert config.ring.f == 1


def test_load_config_missing_and_malformed(tmp_path):
    adapter = make_adapter()
    with pytest.raises(SchemaError) as exc:
        adapter.load_config(str(tmp_path / "absent.json"))
    assert "not found" in str(exc.value)

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError) as exc:
        adapter.load_config(str(broken))
    assert "not valid JSON" in str(exc.value)

    listing = write_json(tmp_path / "list.json", [1, 2])
    with pytest.raises(SchemaError):
        adapter.load_config(listing)


def test_load_map_inline_and_from_file(tmp_path):
    adapter = make_adapter()
    inline = ExperimentConfig(command="census", ring={"p": 7}, map=SQUARE)
    path = write_json(tmp_path / "square.json", SQUARE)
    on_disk = ExperimentConfig(command="census", ring={"p": 7}, map_path=path)

    assert adapter.load_map(inline) == adapter.load_map(on_disk)
    assert adapter.load_map(inline).degrees == (2,)


def test_load_map_rejects_malformed_file(tmp_path):
    adapter = make_adapter()
    bad = dict(SQUARE, dim=2)
    path = write_json(tmp_path / "bad.json", bad)
    config = ExperimentConfig(command="census", ring={"p": 7}, map_path=path)

    with pytest.raises(SchemaError) as exc:
        adapter.load_map(config)
    assert "bad.json" in str(exc.value)


def test_load_map_reads_through_file_adapter():
    file_adapter = Mock(spec=FileAdapter)
    file_adapter.file_exists.return_value = True
    file_adapter.read_json.return_value = SQUARE
    adapter = ConfigAdapter(__import__("logging").getLogger("test"), file_adapter)
    config = ExperimentConfig(command="census", ring={"p": 7}, map_path="maps/square.json")

    adapter.load_map(config)

    file_adapter.read_json.assert_called_once_with("maps/square.json")


def test_load_ring():
    adapter = make_adapter()
    config = ExperimentConfig(
        command="census", ring={"p": 3, "e": 2, "eisenstein": "zeta_p"}, map=SQUARE
    )
    ring = adapter.load_ring(config, LabSettings())
    assert ring.eisenstein == (3, 3, 1)
    assert ring.precision == 12

    bad = ExperimentConfig(command="census", ring={"p": 5, "e": 2, "eisenstein": "zeta_p"}, map=SQUARE)
    with pytest.raises(NotEisenstein):
        adapter.load_ring(bad, LabSettings())
