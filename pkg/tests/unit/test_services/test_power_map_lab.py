import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.algebra.dvr_tower import dvr_make, teichmuller_lift  # noqa: E402
from periodlab.algebra.residue_field import ff_enumerate, ff_mult_order  # noqa: E402
from periodlab.domain.exceptions import BadInput, NotCoprime, NotPrime  # noqa: E402
from periodlab.domain.settings import LabSettings  # noqa: E402
from periodlab.services.dynamics_core import MapSpec, make_point  # noqa: E402
from periodlab.services.period_lab import certify_period  # noqa: E402
from periodlab.services.power_map_lab import (  # noqa: E402
    cyclotomic_period,
    prime_to_p_contrast,
    rou_period,
    unboundedness_report,
)
from periodlab.services.torsion_sieve import sieve  # noqa: E402


def test_order_table_for_q2_p3():
    table = unboundedness_report(2, 3, 3)
    assert table.rows == ((1, 2), (2, 6), (3, 18))
    assert table.p_valuations == (0, 1, 2)
    assert table.k0 == 1
    assert table.ok


def test_order_table_starting_at_one():
    table = unboundedness_report(4, 3, 2)
    assert table.rows == ((1, 1), (2, 3))
    assert table.k0 == 1
    assert table.ok


def test_order_table_with_late_growth():
    # 10 = 1 mod 9, so the orders only start growing at k0 = 2
    table = unboundedness_report(10, 3, 3)
    assert table.rows == ((1, 1), (2, 1), (3, 3))
    assert table.k0 == 2
    assert table.growth_ok


def test_order_table_dict_and_table():
    table = unboundedness_report(2, 3, 2)
    data = table.to_dict()
    assert data["rows"][1] == {"k": 2, "order": "6", "p_valuation": 1}
    headers, rows = table.to_table()
    assert headers == ["k", "order", "p_valuation"]
    assert rows == [[1, "2", 0], [2, "6", 1]]


def test_order_table_limits():
    with pytest.raises(BadInput):
        unboundedness_report(2, 3, 0)
    with pytest.raises(BadInput):
        unboundedness_report(2, 3, 65)
    with pytest.raises(NotCoprime):
        unboundedness_report(6, 3, 2)


def test_cyclotomic_period_argument_checks():
    assert cyclotomic_period(2, 5, 1) == 4
    with pytest.raises(BadInput):
        cyclotomic_period(2, 2, 3)
    with pytest.raises(NotPrime):
        cyclotomic_period(2, 9, 1)
    with pytest.raises(BadInput):
        cyclotomic_period(1, 3, 1)
    with pytest.raises(BadInput):
        cyclotomic_period(2, 3, 0)


def test_rou_period():
    assert rou_period(3, 4) == 2
    assert rou_period(2, 7) == 3
    assert rou_period(5, 1) == 1
    with pytest.raises(NotCoprime):
        rou_period(2, 4)
    with pytest.raises(BadInput):
        rou_period(2, 0)


def test_contrast_keeps_teichmueller_periods_bounded():
    report = prime_to_p_contrast(5, 3, 2, 5)
    assert report.B_coprime == 80
    assert report.teichmuller == ((1, 1), (2, 1), (4, 1), (8, 2))
    assert report.bounded_ok
    assert [order for _, order in report.table.rows] == [2, 6, 18, 54, 162]
    assert report.exceeds_at == 5


def test_contrast_skips_roots_of_order_sharing_q():
    report = prime_to_p_contrast(2, 3, 1, 3)
    assert report.teichmuller == ((1, 1),)
    assert report.B_coprime == 8
    assert report.exceeds_at == 3
    headers, rows = report.to_table()
    assert headers == ["kind", "level", "period", "B_coprime"]
    assert rows[0] == ["teichmuller", 1, 1, "8"]
    assert len(rows) == 4


@settings(max_examples=40, deadline=None)
@given(
    q=st.integers(min_value=2, max_value=50),
    p=st.sampled_from([3, 5, 7, 11]),
)
def test_ratio_law_holds(q, p):
    if q % p == 0:
        return
    table = unboundedness_report(q, p, 5)
    assert table.ratio_law_ok
    assert table.growth_ok


CUBE = MapSpec.from_dict(
    {
        "space": "projective",
        "dim": 1,
        "polys": [
            {"monomials": [{"exps": [3, 0], "coeff": "1"}]},
            {"monomials": [{"exps": [0, 3], "coeff": "1"}]},
        ],
    }
)


@pytest.mark.parametrize("p, f", [(5, 1), (5, 2), (7, 1)])
def test_rou_period_matches_certified_period_of_teichmueller_points(p, f):
    # roots of order divisible by 3 fall onto lower orders under cubing
    ring = dvr_make(p, f, 1, "default", 3)
    for x in ff_enumerate(ring.residue_field)[1:]:
        if ff_mult_order(x) % 3 == 0:
            continue
        point = make_point("projective", [teichmuller_lift(x, ring), ring.one()])
        cert = certify_period(CUBE, point, LabSettings(threads=1))
        assert cert.n == rou_period(3, ff_mult_order(x))
        assert cert.t == 0


@pytest.mark.parametrize("q, p, a, m_max", [(2, 5, 1, 6), (3, 5, 2, 4), (10, 7, 1, 4)])
def test_sieve_witnesses_are_multiples_of_rou_period(q, p, a, m_max):
    box = {m * p**b for m in range(1, m_max + 1) if m % p for b in range(a)}
    for s in sieve(q, p, a, m_max, LabSettings(threads=1)).primes:
        order = rou_period(q, s.ell)
        exponent = s.m * p**s.b
        assert exponent % order == 0
        if order in box:
            assert exponent == order
