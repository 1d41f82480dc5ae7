"""Torsion sieve service.

Primes that can carry rational torsion, the density of the congruence
classes that eventually contain them, torsion primes of elliptic curves with
good reduction, and component-group stability along ramified towers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import divisors, factorint, isprime, primefactors

from periodlab.algebra.number_theory import (
    Factorization,
    cyclotomic_value,
    factor_with_budget,
    prime_to_p_part,
)
from periodlab.algebra.residue_field import FieldElem, FieldSpec, ff_enumerate
from periodlab.config import (
    EC_COUNT_CAP,
    EC_STRUCTURE_CAP,
    FACTOR_BIT_LIMIT,
    LOG_EMOJI_DATA,
    LOG_EMOJI_TARGET,
    LOG_EMOJI_WARNING,
    SIEVE_CAP,
)
from periodlab.domain.exceptions import (
    BadInput,
    BadTower,
    CapExceeded,
    FactorizationTimeout,
    FieldTooLarge,
    NotPrime,
    SingularCurve,
)
from periodlab.domain.settings import LabSettings
from periodlab.domain.torsion_reports import (
    CurveReport,
    DensityEstimate,
    DensityLadder,
    SievePrime,
    SieveResult,
    StabilityReport,
    TorsionPrimes,
)

logger = logging.getLogger(__name__)

REDUCTION_TYPES = ("split", "other")

Coefficient = Union[int, Sequence[int], FieldElem]
Point = Optional[Tuple[FieldElem, FieldElem]]


def _box_exponents(p: int, a: int, m_max: int) -> List[Tuple[int, int, int]]:
    """(m * p^b, m, b) for gcd(m, p) = 1, m <= m_max, b < a, ascending."""
    box = [(m * p**b, m, b) for m in range(1, m_max + 1) if m % p for b in range(a)]
    return sorted(box)


def sieve(
    q: int, p: int, a: int, m_max: int, settings: Optional[LabSettings] = None
) -> SieveResult:
    """Primes ell dividing some q^(m p^b) - 1 in the box with ell != 1 mod p^a.

    q^E - 1 is split into cyclotomic values Phi_d(q) for d | E, each factored
    once within the factorization budget; every survivor carries its
    smallest witness exponent.

    Raises:
        BadInput: If a parameter is out of range
        FactorizationTimeout: If some Phi_d(q) exceeds the factorization bit limit
    """
    if q < 2:
        raise BadInput(f"q must be >= 2, got {q}")
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if p == 2:
        raise BadInput("the sieve works with odd primes only")
    if a < 1:
        raise BadInput(f"a must be >= 1, got {a}")
    if m_max < 1:
        raise BadInput(f"m_max must be >= 1, got {m_max}")
    settings = settings or LabSettings()
    box = _box_exponents(p, a, m_max)
    degrees = sorted({d for exponent, _, _ in box for d in divisors(exponent)})
    values = {d: cyclotomic_value(d, q) for d in degrees}
    for d, value in values.items():
        if value.bit_length() > FACTOR_BIT_LIMIT:
            raise FactorizationTimeout(
                f"Phi_{d}({q}) has {value.bit_length()} bits, limit is {FACTOR_BIT_LIMIT}",
                {"d": d, "bits": value.bit_length()},
            )

    logger.info("%s sieving %d cyclotomic values for q=%d p=%d", LOG_EMOJI_TARGET, len(values), q, p)
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        factorizations: List[Factorization] = list(
            pool.map(factor_with_budget, [values[d] for d in degrees])
        )

    primes = set()
    cofactors = set()
    probable = False
    for fac in factorizations:
        primes.update(fac.factors)
        cofactors.update(fac.cofactors)
        probable = probable or fac.probable

    modulus = p**a
    survivors = []
    for ell in sorted(primes):
        if q % ell == 0 or ell % modulus == 1:
            continue
        _, m, b = next(w for w in box if pow(q, w[0], ell) == 1)
        survivors.append(SievePrime(ell, m, b, ell == p))
    if cofactors:
        logger.warning(
            "%s %d composite cofactors left unsplit; result is incomplete",
            LOG_EMOJI_WARNING,
            len(cofactors),
        )
    return SieveResult(q, p, a, m_max, tuple(survivors), tuple(sorted(cofactors)), probable)


def _prime_mask(X: int) -> np.ndarray:
    """Boolean primality table for 0..X (sieve of Eratosthenes)."""
    mask = np.ones(X + 1, dtype=bool)
    mask[:2] = False
    for n in range(2, int(X**0.5) + 1):
        if mask[n]:
            mask[n * n :: n] = False
    return mask


def _density(p: int, X: int, a: int, primes: np.ndarray) -> DensityEstimate:
    count = int(np.count_nonzero(primes % p**a == 1))
    return DensityEstimate(p, X, count, int(primes.size), a)


def _check_density_args(p: int, X: int) -> None:
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if X < 1:
        raise BadInput(f"cutoff X must be >= 1, got {X}")
    if X > SIEVE_CAP:
        raise CapExceeded(f"X = {X} exceeds the sieve cap {SIEVE_CAP}")


def density_estimate(p: int, X: int) -> DensityEstimate:
    """Share of primes ell <= X with ell = 1 mod p; Dirichlet predicts 1/(p - 1).

    Raises:
        CapExceeded: If X exceeds SIEVE_CAP
    """
    _check_density_args(p, X)
    primes = np.flatnonzero(_prime_mask(X))
    estimate = _density(p, X, 1, primes)
    logger.info("%s density p=%d X=%d: %.6f", LOG_EMOJI_DATA, p, X, estimate.ratio)
    return estimate


def density_ladder(p: int, X: int, a_max: int) -> DensityLadder:
    """Density of ell = 1 mod p^a for a = 1..a_max from one sieve pass."""
    _check_density_args(p, X)
    if a_max < 1:
        raise BadInput(f"a_max must be >= 1, got {a_max}")
    primes = np.flatnonzero(_prime_mask(X))
    return DensityLadder(p, X, tuple(_density(p, X, a, primes) for a in range(1, a_max + 1)))


def _coefficient(value: Coefficient, field: FieldSpec) -> FieldElem:
    if isinstance(value, FieldElem):
        return value
    return field.element_from_json(value)


def _curve_setup(a4: Coefficient, a6: Coefficient, field: FieldSpec) -> Tuple[FieldElem, FieldElem]:
    if field.p <= 3:
        raise BadInput(f"short Weierstrass form needs p > 3, got p = {field.p}")
    if field.q > EC_COUNT_CAP:
        raise FieldTooLarge(f"F_{field.q} exceeds the point-count cap {EC_COUNT_CAP}")
    A, B = _coefficient(a4, field), _coefficient(a6, field)
    disc = field.from_int(4) * A * A * A + field.from_int(27) * B * B
    if disc.is_zero():
        raise SingularCurve("4 a4^3 + 27 a6^2 vanishes: the curve is singular")
    return A, B


def _count_prime_field(a4: int, a6: int, p: int) -> int:
    xs = np.arange(p, dtype=np.int64)
    squares = np.bincount(xs * xs % p, minlength=p)
    rhs = (xs * xs % p * xs + a4 * xs + a6) % p
    return 1 + int(squares[rhs].sum())


def _points(A: FieldElem, B: FieldElem, field: FieldSpec) -> List[Point]:
    roots: Dict[FieldElem, List[FieldElem]] = {}
    elems = ff_enumerate(field)
    for y in elems:
        roots.setdefault(y * y, []).append(y)
    points: List[Point] = [None]
    for x in elems:
        for y in roots.get(x * x * x + A * x + B, []):
            points.append((x, y))
    return points


def _add(P: Point, Q: Point, A: FieldElem) -> Point:
    """Chord-and-tangent addition, None being the point at infinity."""
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    field = x1.field
    if x1 == x2:
        if (y1 + y2).is_zero():
            return None
        slope = (field.from_int(3) * x1 * x1 + A) * (field.from_int(2) * y1).inverse()
    else:
        slope = (y2 - y1) * (x2 - x1).inverse()
    x3 = slope * slope - x1 - x2
    return (x3, slope * (x1 - x3) - y1)


def _multiply(k: int, P: Point, A: FieldElem) -> Point:
    result: Point = None
    while k:
        if k & 1:
            result = _add(result, P, A)
        P = _add(P, P, A)
        k >>= 1
    return result


def _point_order(P: Point, A: FieldElem, group_order: int, factors: Dict[int, int]) -> int:
    order = group_order
    for ell, exp in factors.items():
        for _ in range(exp):
            if _multiply(order // ell, P, A) is None:
                order //= ell
            else:
                break
    return order


def elliptic_point_count(a4: Coefficient, a6: Coefficient, field: FieldSpec) -> CurveReport:
    """#E(F_q) for y^2 = x^3 + a4 x + a6, with the group structure when q is small.

    Raises:
        BadInput: If p <= 3
        SingularCurve: If the discriminant vanishes in k
        FieldTooLarge: If q exceeds EC_COUNT_CAP
    """
    A, B = _curve_setup(a4, a6, field)
    structure = None
    if field.f == 1:
        order = _count_prime_field(A.coeffs[0], B.coeffs[0], field.p)
    else:
        order = len(_points(A, B, field))
    if field.q <= EC_STRUCTURE_CAP:
        points = _points(A, B, field)
        factors = factorint(order)
        exponent = 1
        for P in points:
            exponent = lcm(exponent, _point_order(P, A, order, factors))
            if exponent == order:
                break
        structure = (exponent, order // exponent)
    report = CurveReport(A.to_json(), B.to_json(), field.q, order, structure)
    if not report.hasse_ok:
        logger.error("Hasse bound fails for %s", report.to_dict())
    return report


def good_reduction_torsion_primes(a4: Coefficient, a6: Coefficient, field: FieldSpec) -> TorsionPrimes:
    """Prime divisors of #E(k) other than p; p itself is flagged separately."""
    curve = elliptic_point_count(a4, a6, field)
    primes = tuple(ell for ell in primefactors(curve.order) if ell != field.p)
    return TorsionPrimes(curve, primes, field.p, curve.order % field.p == 0)


def _is_p_power(n: int, p: int) -> bool:
    return prime_to_p_part(n, p)[0] == 1


def component_stability(
    v_delta: int, e_seq: Sequence[int], p: int, reduction: str = "split"
) -> StabilityReport:
    """Component-group orders v_n(Delta) = e_n v_delta along a tower.

    The prime-to-p parts are constant from the first stage after which every
    ratio e_{n+1}/e_n is a power of p.

    Raises:
        BadTower: If e_seq is empty, non-positive or not a divisibility chain
    """
    if v_delta < 1:
        raise BadInput(f"v_delta must be >= 1, got {v_delta}")
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if reduction not in REDUCTION_TYPES:
        raise BadInput(f"unknown reduction type {reduction!r}; expected one of {REDUCTION_TYPES}")
    e_seq = tuple(int(e) for e in e_seq)
    if not e_seq or any(e < 1 for e in e_seq):
        raise BadTower("ramification indices must be a non-empty list of positive integers")
    for prev, nxt in zip(e_seq, e_seq[1:]):
        if nxt % prev:
            raise BadTower(f"{prev} does not divide {nxt}")
    values = tuple(e * v_delta for e in e_seq)
    prime_to_p = tuple(prime_to_p_part(v, p)[0] for v in values)
    stable_from = len(e_seq) - 1
    while stable_from > 0 and _is_p_power(e_seq[stable_from] // e_seq[stable_from - 1], p):
        stable_from -= 1
    report = StabilityReport(v_delta, p, e_seq, values, prime_to_p, stable_from, reduction)
    logger.debug("tower %s: stable=%s from stage %d", list(e_seq), report.stable, stable_from)
    return report

