import json
import sys
from io import BytesIO
from pathlib import Path
from unittest.mock import Mock

import pytest

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.adapters.config_adapter import ConfigAdapter  # noqa: E402
from periodlab.adapters.file_adapter import FileAdapter  # noqa: E402
from periodlab.algebra.dvr_tower import dvr_make  # noqa: E402
from periodlab.domain.census import FiberCensus  # noqa: E402
from periodlab.domain.exceptions import NotCoprime  # noqa: E402
from periodlab.domain.experiment_config import ExperimentConfig  # noqa: E402
from periodlab.domain.period_reports import (  # noqa: E402
    BoundReport,
    VerificationReport,
    VerificationRun,
)
from periodlab.domain.settings import LabSettings  # noqa: E402
from periodlab.services.dynamics_core import MapSpec  # noqa: E402
from periodlab.services.experiment_runner import (  # noqa: E402
    EXIT_INTERNAL,
    EXIT_OK,
    ExperimentRunner,
)

SQUARE = MapSpec.from_dict(
    {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [2], "coeff": "1"}]}]}
)


@pytest.fixture
def adapters():
    config_adapter = Mock(spec=ConfigAdapter)
    file_adapter = Mock(spec=FileAdapter)
    file_adapter.compute_hash.return_value = "ab" * 32
    return config_adapter, file_adapter


def make_runner(adapters):
    config_adapter, file_adapter = adapters
    logger = __import__("logging").getLogger("test")
    return ExperimentRunner(config_adapter, file_adapter, logger, LabSettings(threads=1))


def test_power_map_to_stdout(adapters):
    runner = make_runner(adapters)
    config = ExperimentConfig(command="power-map", q=2, p=3, k_max=3, format="csv")
    out = BytesIO()

    code = runner.run(config, out)

    assert code == EXIT_OK
    assert out.getvalue() == b"k,order,p_valuation\n1,2,0\n2,6,1\n3,18,2\n"
    adapters[1].write_report.assert_not_called()


def test_report_written_to_output(adapters, tmp_path):
    runner = make_runner(adapters)
    path = str(tmp_path / "sieve.json")
    config = ExperimentConfig(command="sieve", q=2, p=5, output=path)

    code = runner.run(config)

    assert code == EXIT_OK
    adapters[1].write_report.assert_called_once()
    args, _ = adapters[1].write_report.call_args
    assert args[0] == path
    assert json.loads(args[1])["primes"][0]["ell"] == "3"


def test_census_uses_adapters(adapters):
    config_adapter, _ = adapters
    config_adapter.load_map.return_value = SQUARE
    config_adapter.load_ring.return_value = dvr_make(7, 1, 1)
    runner = make_runner(adapters)
    config = ExperimentConfig(command="bounds", ring={"p": 7}, map_path="square.json")

    result = runner.execute(config)

    assert result.exit_code == EXIT_OK
    assert result.report.B_coprime == 42
    config_adapter.load_map.assert_called_with(config)


def test_certify_reads_point(adapters):
    config_adapter, _ = adapters
    zeta_shift = MapSpec.from_dict(
        {"space": "affine", "dim": 1, "polys": [{"monomials": [{"exps": [1], "coeff": [1, 1]}]}]}
    )
    config_adapter.load_map.return_value = zeta_shift
    config_adapter.load_ring.return_value = dvr_make(3, 1, 2, "zeta_p")
    runner = make_runner(adapters)
    config = ExperimentConfig(
        command="certify", ring={"p": 3, "e": 2, "eisenstein": "zeta_p"}, map_path="z.json", point=[1]
    )

    report = runner.execute(config).report

    assert (report.n, report.t) == (3, 1)


def test_density_ladder_and_tower(adapters):
    runner = make_runner(adapters)
    ladder = runner.execute(ExperimentConfig(command="density", p=3, X=1000, a_max=2)).report
    assert len(ladder.levels) == 2
    tower = runner.execute(
        ExperimentConfig(command="tower", v_delta=6, p=3, e_seq=[2, 6, 18])
    ).report
    assert tower.stable


def test_ec_torsion(adapters):
    runner = make_runner(adapters)
    report = runner.execute(ExperimentConfig(command="ec-torsion", p=5, a4=1, a6=0)).report
    assert report.primes == (2,)


def test_verification_counterexample_exits_one(adapters, mocker):
    census = FiberCensus("affine", 5, 5, 1, (1, 1, 1), (1,), 2)
    bounds = BoundReport(5, 5, 1, 1, 5, 20, 100)
    run = VerificationRun(1, "default", (-5, 1), 6, census, bounds, ())
    failed = VerificationReport(census, (run,), False, ({"kind": "census", "e": 1},))
    mocker.patch(
        "periodlab.services.experiment_runner.verify_theorem", return_value=failed
    )
    adapters[0].load_map.return_value = SQUARE
    runner = make_runner(adapters)
    config = ExperimentConfig(command="verify", p=5, e_list=[1], map_path="square.json")

    result = runner.execute(config)

    assert result.exit_code == EXIT_INTERNAL
    assert json.loads(result.data)["ok"] is False


def test_domain_errors_propagate(adapters):
    runner = make_runner(adapters)
    with pytest.raises(NotCoprime):
        runner.execute(ExperimentConfig(command="power-map", q=3, p=3))
