import pickle
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.algebra.dvr_tower import dvr_make  # noqa: E402
from periodlab.algebra.residue_field import ff_make  # noqa: E402
from periodlab.domain.census import FiberCensus  # noqa: E402
from periodlab.domain.exceptions import (  # noqa: E402
    BadInput,
    BranchBudgetExceeded,
    DegenerateCycle,
    NotPeriodicAtPrecision,
)
from periodlab.domain.settings import LabSettings  # noqa: E402
from periodlab.services.dynamics_core import (  # noqa: E402
    MapSpec,
    make_point,
    point_from_json,
    special_fiber_census,
)
from periodlab.services.period_lab import (  # noqa: E402
    certify_period,
    compute_bounds,
    find_periodic_points,
    hensel_lift_cycle,
    lift_all_cycles,
    verify_theorem,
)

SETTINGS = LabSettings(threads=2)


def affine_map(coeffs):
    return MapSpec.from_dict(
        {
            "space": "affine",
            "dim": 1,
            "polys": [{"monomials": [{"exps": [k], "coeff": c} for k, c in coeffs.items()]}],
        }
    )


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
SQUARE = affine_map({2: "1"})
ZETA_SHIFT = affine_map({1: [1, 1]})


@lru_cache(maxsize=None)
def _minimal_periods(coeffs, p, N, n_max):
    """Least n <= n_max with f^n(y) = y mod p^(2N), for every residue y (0 if none)."""
    modulus = p ** (2 * N)
    ys = np.arange(modulus, dtype=np.int64)
    x = ys.copy()
    period = np.zeros(modulus, dtype=np.int64)
    degree = max(k for k, _ in coeffs)
    table = dict(coeffs)
    for n in range(1, n_max + 1):
        acc = np.zeros(modulus, dtype=np.int64)
        for k in range(degree, -1, -1):
            acc = (acc * x + table.get(k, 0)) % modulus
        x = acc
        period[(x == ys) & (period == 0)] = n
    return period


def brute_force_periodic(coeffs, p, N, n_max):
    """Residues y mod p^N with f^n(y) = y mod p^(2N) for some n <= n_max."""
    period = _minimal_periods(tuple(sorted(coeffs.items())), p, N, 4)
    ys = np.nonzero((period > 0) & (period <= n_max))[0]
    return {int(y) % p**N for y in ys}


def searched_points(coeffs, p, N, n_max):
    ring = dvr_make(p, 1, 1, "default", N)
    m = affine_map({k: str(c) for k, c in coeffs.items()})
    result = find_periodic_points(m, n_max, ring, SETTINGS)
    return {c.point.coords[0].digits[0][0] for c in result.certificates}


GRID_MAPS = [{2: 1}, {2: 1, 0: 1}, {3: 1}, {1: 1, 0: 1}, {1: 2, 0: 1}]


@pytest.mark.parametrize("n_max", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("coeffs", GRID_MAPS, ids=["x2", "x2+1", "x3", "x+1", "2x+1"])
def test_search_matches_brute_force(coeffs, p, N, n_max):
    assert searched_points(coeffs, p, N, n_max) == brute_force_periodic(coeffs, p, N, n_max)


def test_compute_bounds_for_cube_map():
    census = special_fiber_census(CUBE, ff_make(5, 1))
    bounds = compute_bounds(census, 1, 5)
    assert (bounds.B_coprime, bounds.B_all) == (24, 120)
    assert compute_bounds(census, 2, 5).B_all == 600
    assert bounds.to_dict()["coprime"] == "24"
    assert not bounds.vacuous


def test_compute_bounds_affine_f3_ramified():
    census = special_fiber_census(SQUARE, ff_make(3, 1))
    bounds = compute_bounds(census, 2, 3)
    assert (bounds.B_coprime, bounds.B_all) == (6, 54)


def test_compute_bounds_vacuous_for_dimension_zero():
    census = FiberCensus("affine", 5, 1, 0, (1,), (1,), 0)
    bounds = compute_bounds(census, 1, 5)
    assert bounds.vacuous
    assert bounds.B_coprime == 0


def test_hensel_lift_of_two_cycle_mod_49():
    ring = dvr_make(7, 1, 1, "default", 2)
    F7 = ring.residue_field
    residue = [make_point("affine", [F7.from_int(2)]), make_point("affine", [F7.from_int(4)])]
    cycle = hensel_lift_cycle(SQUARE, residue, ring)
    assert [pt.to_json() for pt in cycle] == [[[[30]]], [[[18]]]]


def test_hensel_lift_is_stable_under_precision():
    F7 = ff_make(7, 1)
    residue = [make_point("affine", [F7.from_int(2)]), make_point("affine", [F7.from_int(4)])]
    low = dvr_make(7, 1, 1, "default", 2)
    high = dvr_make(7, 1, 1, "default", 4)
    lifted_low = hensel_lift_cycle(SQUARE, residue, low)
    lifted_high = hensel_lift_cycle(SQUARE, residue, high)
    assert [pt.at_precision(low) for pt in lifted_high] == lifted_low


def test_hensel_lift_rejects_non_cycles():
    ring = dvr_make(7, 1, 1, "default", 2)
    F7 = ring.residue_field
    with pytest.raises(BadInput):
        hensel_lift_cycle(SQUARE, [make_point("affine", [F7.from_int(3)])], ring)
    with pytest.raises(BadInput):
        hensel_lift_cycle(SQUARE, [], ring)


def test_degenerate_residue_cycle():
    ring = dvr_make(3, 1, 2, "zeta_p")
    F3 = ring.residue_field
    with pytest.raises(DegenerateCycle):
        hensel_lift_cycle(ZETA_SHIFT, [make_point("affine", [F3.from_int(1)])], ring)
    report = lift_all_cycles(ZETA_SHIFT, ring, SETTINGS)
    assert report.lifted == ()
    assert len(report.degenerate) == 3


def test_lift_all_cycles_of_cube_map():
    ring = dvr_make(5, 1, 1)
    report = lift_all_cycles(CUBE, ring, SETTINGS)
    assert sorted(len(c) for c in report.lifted) == [1, 1, 1, 1, 2]
    assert report.degenerate == ()
    headers, rows = report.to_table()
    assert headers == ["status", "length", "cycle"]
    assert len(rows) == 5


def test_certify_zeta_shift_has_wild_period():
    ring = dvr_make(3, 1, 2, "zeta_p")
    cert = certify_period(ZETA_SHIFT, point_from_json("affine", [1], ring), SETTINGS)
    assert (cert.n, cert.m, cert.r, cert.t) == (3, 1, 1, 1)
    assert cert.ok
    assert cert.precision == 12


def test_certify_rejects_preperiodic_and_field_points():
    ring = dvr_make(7, 1, 1, "default", 2)
    with pytest.raises(NotPeriodicAtPrecision):
        certify_period(SQUARE, point_from_json("affine", [3], ring), SETTINGS)
    with pytest.raises(BadInput):
        certify_period(SQUARE, point_from_json("affine", [3], ring.residue_field), SETTINGS)


def test_find_periodic_points_of_cube_map():
    result = find_periodic_points(CUBE, 2, dvr_make(5, 1, 1), SETTINGS)
    periods = [c.n for c in result.certificates]
    assert periods == [1, 1, 1, 1, 2, 2]
    assert all(c.ok for c in result.certificates)
    assert result.bounds.B_coprime == 24


def test_find_periodic_points_is_deterministic():
    ring = dvr_make(5, 1, 1)
    first = find_periodic_points(CUBE, 2, ring, LabSettings(threads=1)).to_dict()
    second = find_periodic_points(CUBE, 2, ring, LabSettings(threads=4)).to_dict()
    assert first == second


def test_translation_has_no_short_periods():
    result = find_periodic_points(affine_map({1: "1", 0: "1"}), 4, dvr_make(5, 1, 1), SETTINGS)
    assert result.certificates == ()


def test_find_periodic_points_input_checks():
    with pytest.raises(BadInput):
        find_periodic_points(CUBE, 0, dvr_make(5, 1, 1), SETTINGS)
    with pytest.raises(BranchBudgetExceeded):
        find_periodic_points(CUBE, 4, dvr_make(5, 1, 1), LabSettings(threads=1, branch_budget=2))


def test_verify_theorem_on_cube_map():
    report = verify_theorem(CUBE, 5, 1, [1, 2], 2, settings=SETTINGS)
    assert report.ok
    assert report.invariance_ok
    assert [(run.e, run.eisenstein) for run in report.runs] == [
        (1, "default"),
        (1, "variant"),
        (2, "default"),
        (2, "variant"),
    ]
    data = report.to_dict()
    assert data["bounds"] == {"coprime": "24", "all": "600"}
    assert data["max_p_part"] == 0
    assert len(data["certificates"]) == 24
    assert report.runs[2].precision == 12


def test_verify_theorem_needs_e_list():
    with pytest.raises(BadInput):
        verify_theorem(CUBE, 5, 1, [], 2, settings=SETTINGS)


def test_zeta_shift_search_stops_on_identity_discs():
    ring = dvr_make(3, 1, 2, "zeta_p")
    result = find_periodic_points(ZETA_SHIFT, 3, ring, SETTINGS)
    by_point = {c.point: c for c in result.certificates}
    one = by_point[point_from_json("affine", [1], ring)]
    assert (one.n, one.m, one.r, one.t) == (3, 1, 1, 1)
    assert one.ok
    assert by_point[point_from_json("affine", [0], ring)].n == 1
    assert result.families
    assert all(disc.n == 3 for disc in result.families)
    assert "families" in result.to_dict()


def test_periodic_points_are_stable_as_precision_grows():
    low = dvr_make(5, 1, 1, "default", 2)
    coarse = find_periodic_points(CUBE, 2, low, SETTINGS)
    fine = find_periodic_points(CUBE, 2, dvr_make(5, 1, 1, "default", 4), SETTINGS)
    assert [(c.point.at_precision(low), c.n) for c in fine.certificates] == [
        (c.point, c.n) for c in coarse.certificates
    ]
    assert coarse.families == () and "families" not in coarse.to_dict()


def test_verify_theorem_reports_census_changes(mocker):
    stable = FiberCensus("projective", 5, 6, 1, (1, 1, 1, 1, 2), (1, 2), 0)
    changed = FiberCensus("projective", 5, 6, 1, (1, 1, 1, 1, 1, 1), (1,), 0)
    mocker.patch(
        "periodlab.services.period_lab.special_fiber_census", side_effect=[stable, changed]
    )
    report = verify_theorem(CUBE, 5, 1, [1], 2, settings=LabSettings(threads=1))
    assert not report.invariance_ok
    assert not report.ok
    assert [c["kind"] for c in report.counterexamples] == ["census"]
    assert report.counterexamples[0]["eisenstein"] == "variant"
    assert report.counterexamples[0]["census"]["cycles"] == [1, 1, 1, 1, 1, 1]


def test_verify_theorem_runs_in_sequence_without_worker_processes(mocker):
    pool = mocker.patch(
        "periodlab.services.period_lab.ProcessPoolExecutor", side_effect=OSError("no fork")
    )
    report = verify_theorem(CUBE, 5, 1, [1], 2, settings=SETTINGS)
    pool.assert_called_once()
    assert report.ok
    assert len(report.runs) == 2


def test_errors_survive_pickling_for_worker_processes():
    error = pickle.loads(pickle.dumps(DegenerateCycle("det(J - I) is not a unit", 2)))
    assert isinstance(error, DegenerateCycle)
    assert error.cycle_length == 2
    assert str(error) == "det(J - I) is not a unit"
    budget = pickle.loads(pickle.dumps(BranchBudgetExceeded("too many nodes", {"n": 4})))
    assert budget.details == {"n": 4}


@pytest.mark.slow
def test_verify_cube_map_through_period_24_over_three_ramifications():
    start = time.perf_counter()
    report = verify_theorem(CUBE, 5, 1, [1, 2, 3], 24, settings=LabSettings())
    elapsed = time.perf_counter() - start
    assert report.ok
    assert max(run.max_prime_to_p for run in report.runs) == 2
    assert max(run.max_p_part for run in report.runs) == 0
    assert elapsed < 10.0
