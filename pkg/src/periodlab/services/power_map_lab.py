"""Power map laboratory.

The map [x : y] -> [x^q : y^q] has the roots of unity as periodic points,
and the period of a primitive n-th root of unity is ord(q mod n). Over the
p-power roots of unity these orders grow without bound, while over the
prime-to-p roots of a fixed residue field they stay below the period bound.
"""

import logging
from math import gcd
from typing import List, Tuple

from sympy import divisors, isprime

from periodlab.algebra.dvr_tower import p_valuation
from periodlab.algebra.number_theory import multiplicative_order, order_mod_prime_power
from periodlab.config import LOG_EMOJI_DATA, UNBOUNDEDNESS_K_MAX
from periodlab.domain.exceptions import BadInput, NotCoprime, NotPrime
from periodlab.domain.power_reports import ContrastReport, OrderTable

logger = logging.getLogger(__name__)


def _check_odd_prime(p: int) -> None:
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if p == 2:
        raise BadInput("the power map lab works with odd primes only")


def cyclotomic_period(q: int, p: int, k: int) -> int:
    """Smallest n >= 1 with q^n = 1 mod p^k.

    Raises:
        NotCoprime: If p divides q
        BadInput: If q < 2, k < 1 or p = 2
    """
    if q < 2:
        raise BadInput(f"q must be >= 2, got {q}")
    if k < 1:
        raise BadInput(f"level k must be >= 1, got {k}")
    _check_odd_prime(p)
    if gcd(q, p) != 1:
        raise NotCoprime(f"q = {q} is divisible by p = {p}")
    return order_mod_prime_power(q, p, k)


def unboundedness_report(q: int, p: int, k_max: int) -> OrderTable:
    """Order table for k = 1..k_max with the ratio law and growth checks.

    Raises:
        NotCoprime: If p divides q
        BadInput: If k_max is outside 1..UNBOUNDEDNESS_K_MAX
    """
    if not 1 <= k_max <= UNBOUNDEDNESS_K_MAX:
        raise BadInput(f"k_max must lie in 1..{UNBOUNDEDNESS_K_MAX}, got {k_max}")
    rows = [(k, cyclotomic_period(q, p, k)) for k in range(1, k_max + 1)]
    vals = tuple(p_valuation(order, p) for _, order in rows)
    k0 = p_valuation(pow(q, rows[0][1]) - 1, p)
    ratio_law_ok = True
    growth_ok = True
    for (k, prev), (_, nxt) in zip(rows, rows[1:]):
        ratio, rem = divmod(nxt, prev)
        if rem or ratio not in (1, p):
            ratio_law_ok = False
        if ratio != (p if k >= k0 else 1):
            growth_ok = False
    table = OrderTable(q, p, tuple(rows), vals, k0, ratio_law_ok, growth_ok)
    logger.info(
        "%s order table q=%d p=%d up to k=%d, k0=%d", LOG_EMOJI_DATA, q, p, k_max, k0
    )
    if not table.ok:
        logger.warning("order table for q=%d p=%d breaks the ratio law", q, p)
    return table


def rou_period(q: int, n: int) -> int:
    """Period of a primitive n-th root of unity under x -> x^q, i.e. ord(q mod n).

    Raises:
        NotCoprime: If gcd(q, n) != 1
    """
    if n < 1:
        raise BadInput(f"root order must be >= 1, got {n}")
    if gcd(q, n) != 1:
        raise NotCoprime(f"gcd({q}, {n}) != 1")
    return multiplicative_order(q, n)


def prime_to_p_contrast(q: int, p: int, f: int, k_max: int) -> ContrastReport:
    """Teichmueller periods over F_{p^f} next to the p-power order table.

    The Teichmueller points of P^1 over the unramified extension with residue
    field F_{p^f} are the roots of unity of order n | p^f - 1; under x -> x^q
    (q coprime to n) their periods are ord(q mod n), all bounded by
    B_coprime = (p^f + 1)(p^f - 1).
    """
    if f < 1:
        raise BadInput(f"residue degree must be >= 1, got {f}")
    table = unboundedness_report(q, p, k_max)
    size = p**f
    b_coprime = (size + 1) * (size - 1)
    teich: List[Tuple[int, int]] = [
        (n, rou_period(q, n)) for n in divisors(size - 1) if gcd(n, q) == 1
    ]
    exceeds_at = next((k for k, order in table.rows if order > b_coprime), None)
    return ContrastReport(q, p, f, b_coprime, tuple(teich), table, exceeds_at)
