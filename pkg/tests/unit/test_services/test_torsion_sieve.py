import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import primerange

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.algebra.residue_field import ff_make  # noqa: E402
from periodlab.config import SIEVE_CAP  # noqa: E402
from periodlab.domain.exceptions import (  # noqa: E402
    BadInput,
    BadTower,
    CapExceeded,
    NotPrime,
    SingularCurve,
)
from periodlab.domain.settings import LabSettings  # noqa: E402
from periodlab.domain.torsion_reports import SievePrime  # noqa: E402
from periodlab.services.torsion_sieve import (  # noqa: E402
    component_stability,
    density_estimate,
    density_ladder,
    elliptic_point_count,
    good_reduction_torsion_primes,
    sieve,
)

SETTINGS = LabSettings(threads=2)


def test_sieve_q2_p5():
    result = sieve(2, 5, 1, 6, SETTINGS)
    assert result.primes == (
        SievePrime(3, 2, 0, False),
        SievePrime(5, 4, 0, True),
        SievePrime(7, 3, 0, False),
    )
    assert not result.incomplete
    headers, rows = result.to_table()
    assert headers == ["ell", "m", "b", "exponent", "is_p"]
    assert rows[1] == ["5", 4, 0, 4, True]


def test_sieve_flags_p_itself():
    result = sieve(2, 3, 1, 4, SETTINGS)
    assert [(s.ell, s.is_p) for s in result.primes] == [(3, True), (5, False)]


def test_sieve_uses_p_power_exponents():
    # 7 | 2^3 - 1 and 3 is in the box only once b = 1 is allowed
    result = sieve(2, 3, 2, 2, SETTINGS)
    assert result.primes == (SievePrime(3, 2, 0, True), SievePrime(7, 1, 1, False))
    assert [s.ell for s in sieve(2, 3, 1, 2, SETTINGS).primes] == [3]


def test_sieve_drops_primes_one_mod_p_power():
    # 31 | 2^5 - 1 but 31 = 1 mod 3
    result = sieve(2, 3, 1, 6, SETTINGS)
    assert [s.ell for s in result.primes] == [3, 5]


def test_sieve_argument_checks():
    with pytest.raises(BadInput):
        sieve(2, 5, 1, 0, SETTINGS)
    with pytest.raises(BadInput):
        sieve(1, 5, 1, 6, SETTINGS)
    with pytest.raises(BadInput):
        sieve(3, 2, 1, 6, SETTINGS)
    with pytest.raises(NotPrime):
        sieve(2, 15, 1, 6, SETTINGS)


def test_density_close_to_dirichlet():
    five = density_estimate(5, 10**5)
    three = density_estimate(3, 10**5)
    assert five.prime_count == 9592
    assert abs(five.ratio - 0.25) < 0.01
    assert abs(three.ratio - 0.5) < 0.01
    assert five.to_dict()["expected"] == 0.25


def test_density_ladder_levels():
    ladder = density_ladder(3, 10**5, 2)
    assert [lvl.a for lvl in ladder.levels] == [1, 2]
    assert abs(ladder.levels[1].ratio - 1 / 6) < 0.01
    headers, rows = ladder.to_table()
    assert headers == ["a", "X", "count_1modp", "prime_count", "ratio", "expected"]
    assert len(rows) == 2


def test_density_small_cutoff():
    estimate = density_estimate(3, 20)
    # primes 2 3 5 7 11 13 17 19, of which 7 13 19 are 1 mod 3
    assert (estimate.count_1modp, estimate.prime_count) == (3, 8)


def test_density_argument_checks():
    with pytest.raises(CapExceeded):
        density_estimate(3, SIEVE_CAP + 1)
    with pytest.raises(NotPrime):
        density_estimate(4, 100)
    with pytest.raises(BadInput):
        density_estimate(3, 0)
    with pytest.raises(BadInput):
        density_ladder(3, 100, 0)


def test_curve_over_f5():
    curve = elliptic_point_count(1, 0, ff_make(5, 1))
    assert curve.order == 4
    assert curve.structure == (2, 2)
    assert curve.hasse_ok


def test_curve_over_f25():
    curve = elliptic_point_count(1, 0, ff_make(5, 2))
    assert curve.order == 32
    assert curve.hasse_ok


def test_torsion_primes_flag_p():
    result = good_reduction_torsion_primes(1, 0, ff_make(5, 1))
    assert result.primes == (2,)
    assert result.p == 5
    assert not result.p_divides_order
    headers, rows = result.to_table()
    assert rows[-1] == [5, "undetermined by reduction"]


def test_curve_input_checks():
    with pytest.raises(SingularCurve):
        elliptic_point_count(0, 0, ff_make(5, 1))
    with pytest.raises(BadInput):
        elliptic_point_count(1, 1, ff_make(3, 1))


def test_component_stability_along_wild_tower():
    report = component_stability(6, [2, 6, 18, 54], 3)
    assert report.values == (12, 36, 108, 324)
    assert report.prime_to_p == (4, 4, 4, 4)
    assert report.stable
    assert report.stable_from == 0
    assert report.component_bound is None


def test_component_stability_tame_tower_is_unstable():
    report = component_stability(6, [1, 2, 4], 3)
    assert not report.stable
    assert report.prime_to_p == (2, 4, 8)


def test_component_stability_non_split_bound():
    report = component_stability(5, [1, 3], 3, "other")
    assert report.component_bound == 4
    assert report.to_dict()["values"] == ["5", "15"]


def test_component_stability_rejects_bad_towers():
    with pytest.raises(BadTower):
        component_stability(6, [2, 3], 3)
    with pytest.raises(BadTower):
        component_stability(6, [], 3)
    with pytest.raises(BadInput):
        component_stability(6, [1, 3], 3, "nodal")


@settings(max_examples=50, deadline=None)
@given(
    p=st.sampled_from([5, 7, 11, 13, 101]),
    a4=st.integers(min_value=0, max_value=200),
    a6=st.integers(min_value=0, max_value=200),
)
def test_point_counts_respect_hasse(p, a4, a6):
    assume((4 * a4**3 + 27 * a6**2) % p)
    curve = elliptic_point_count(a4, a6, ff_make(p, 1))
    assert curve.hasse_ok
    n1, n2 = curve.structure
    assert n1 * n2 == curve.order
    assert n1 % n2 == 0


def _trial_division_primes(n):
    primes, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            primes.add(d)
            n //= d
        d += 1
    if n > 1:
        primes.add(n)
    return primes


SIEVE_BOXES = [(2, 5, 1, 6), (3, 5, 2, 4), (2, 3, 2, 5), (7, 3, 1, 6), (10, 7, 1, 4)]


@pytest.mark.parametrize("q, p, a, m_max", SIEVE_BOXES)
def test_sieve_witnesses_check_out(q, p, a, m_max):
    result = sieve(q, p, a, m_max, SETTINGS)
    box = sorted(m * p**b for m in range(1, m_max + 1) if m % p for b in range(a))
    for s in result.primes:
        exponent = s.m * p**s.b
        assert pow(q, exponent, s.ell) == 1
        assert all(pow(q, smaller, s.ell) != 1 for smaller in box if smaller < exponent)
        assert s.ell % p**a != 1
        assert q % s.ell
        assert s.is_p == (s.ell == p)


@pytest.mark.parametrize("q, p, a, m_max", SIEVE_BOXES)
def test_sieve_finds_every_prime_that_trial_division_finds(q, p, a, m_max):
    result = sieve(q, p, a, m_max, SETTINGS)
    expected = set()
    for m in range(1, m_max + 1):
        if m % p == 0:
            continue
        for b in range(a):
            expected |= _trial_division_primes(q ** (m * p**b) - 1)
    expected = {ell for ell in expected if q % ell and ell % p**a != 1}
    assert not result.incomplete
    assert {s.ell for s in result.primes} == expected


def test_density_at_one_million():
    five = density_estimate(5, 10**6)
    three = density_estimate(3, 10**6)
    assert five.prime_count == 78498
    assert abs(five.ratio - 0.25) < 0.01
    assert abs(three.ratio - 0.50) < 0.01


@pytest.mark.parametrize("p", [3, 5, 7])
def test_density_ladder_converges_to_dirichlet(p):
    ladder = density_ladder(p, 10**6, 3)
    ratios = [level.ratio for level in ladder.levels]
    assert ratios == sorted(ratios, reverse=True)
    for a, level in enumerate(ladder.levels, start=1):
        assert level.expected == pytest.approx(1 / (p ** (a - 1) * (p - 1)))
        assert abs(level.ratio - level.expected) < 0.005
    coarse = density_ladder(p, 10**3, 1).levels[0]
    assert abs(ratios[0] - coarse.expected) <= abs(coarse.ratio - coarse.expected) + 0.005


HASSE_PRIMES = list(primerange(5, 1000))
HASSE_EXTENSIONS = [
    (5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (11, 2),
    (13, 2), (17, 2), (19, 2), (23, 2), (29, 2), (31, 2),
]


def _hasse_curves(count=100, seed=2026):
    """Nonsingular curves over every listed extension field, then random prime fields."""
    rng = np.random.default_rng(seed)
    curves = []
    while len(curves) < count:
        if len(curves) < len(HASSE_EXTENSIONS):
            p, f = HASSE_EXTENSIONS[len(curves)]
        else:
            p, f = HASSE_PRIMES[int(rng.integers(len(HASSE_PRIMES)))], 1
        field = ff_make(p, f)
        a4 = [int(c) for c in rng.integers(0, p, size=f)]
        a6 = [int(c) for c in rng.integers(0, p, size=f)]
        if f == 1:
            a4, a6 = a4[0], a6[0]
        A, B = field.element_from_json(a4), field.element_from_json(a6)
        if (field.from_int(4) * A * A * A + field.from_int(27) * B * B).is_zero():
            continue
        curves.append((a4, a6, field))
    return curves


def _legendre_count(a4, a6, p):
    total = 1
    for x in range(p):
        rhs = (x**3 + a4 * x + a6) % p
        total += 1 if rhs == 0 else (2 if pow(rhs, (p - 1) // 2, p) == 1 else 0)
    return total


def test_hasse_bound_on_a_hundred_curves():
    curves = _hasse_curves()
    assert sum(field.f > 1 for _, _, field in curves) == len(HASSE_EXTENSIONS)
    for a4, a6, field in curves:
        curve = elliptic_point_count(a4, a6, field)
        assert curve.hasse_ok
        n1, n2 = curve.structure
        assert n1 * n2 == curve.order
        assert n1 % n2 == 0
        if field.f == 1:
            assert curve.order == _legendre_count(a4, a6, field.p)
