"""Number theory helpers: budgeted factorization and multiplicative orders.

Factorization runs sympy trial division up to a limit, then Pollard rho on
the composite survivors; anything rho cannot split within its budget is kept
as a composite cofactor and the result is marked incomplete.
"""

import logging
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Dict, Tuple

from sympy import cyclotomic_poly, factorint, isprime, n_order
from sympy.ntheory import pollard_rho

from periodlab.config import (
    DETERMINISTIC_PRIMALITY_BOUND,
    RHO_MAX_STEPS,
    RHO_RETRIES,
    TRIAL_DIVISION_LIMIT,
)
from periodlab.domain.exceptions import BadInput, NotCoprime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization with honesty flags.

    Attributes:
        n: Factored integer
        factors: Prime -> exponent
        cofactors: Composite survivors rho could not split
        probable: True if some listed prime is only a probable prime
    """

    n: int
    factors: Dict[int, int] = field(default_factory=dict)
    cofactors: Tuple[int, ...] = ()
    probable: bool = False

    @property
    def complete(self) -> bool:
        return not self.cofactors

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.factors))


def is_probable_prime(n: int) -> Tuple[bool, bool]:
    """Primality with a proof flag.

    Returns:
        (is_prime, proven); sympy's test is deterministic below 2^64
    """
    return bool(isprime(n)), n < DETERMINISTIC_PRIMALITY_BOUND


def factor_with_budget(
    n: int,
    trial_limit: int = TRIAL_DIVISION_LIMIT,
    rho_retries: int = RHO_RETRIES,
    rho_steps: int = RHO_MAX_STEPS,
) -> Factorization:
    """Factor n >= 1 within a trial-division and Pollard rho budget.

    Raises:
        BadInput: If n < 1
    """
    if n < 1:
        raise BadInput(f"cannot factor {n}")
    factors: Dict[int, int] = {}
    cofactors = []
    pending = []
    for f, k in factorint(n, limit=trial_limit).items():
        pending.extend([int(f)] * k)
    while pending:
        m = pending.pop()
        if m == 1:
            continue
        if isprime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = pollard_rho(m, retries=rho_retries, max_steps=rho_steps)
        if d is None or d in (1, m):
            logger.debug("rho budget exhausted on a %d-bit cofactor", m.bit_length())
            cofactors.append(m)
            continue
        pending.extend([int(d), m // int(d)])
    probable = any(prime >= DETERMINISTIC_PRIMALITY_BOUND for prime in factors)
    return Factorization(n, dict(sorted(factors.items())), tuple(sorted(cofactors)), probable)


def order_by_descent(a: int, modulus: int, group_order: int, factors: Dict[int, int]) -> int:
    """Order of a modulo modulus, descending from a known multiple.

    Args:
        a: Unit modulo modulus
        modulus: Modulus
        group_order: A multiple of the order (e.g. the totient)
        factors: Prime factorization of group_order
    """
    order = group_order
    for ell, exp in factors.items():
        for _ in range(exp):
            if pow(a, order // ell, modulus) == 1:
                order //= ell
            else:
                break
    return order


def order_mod_prime_power(a: int, ell: int, k: int) -> int:
    """Order of a modulo ell^k by descent on phi(ell^k) = ell^(k-1)(ell - 1)."""
    modulus = ell**k
    if gcd(a, ell) != 1:
        raise NotCoprime(f"{a} is not a unit modulo {ell}^{k}")
    if modulus == 2:
        return 1
    part = factor_with_budget(ell - 1)
    factors = dict(part.factors)
    if not part.complete:
        # ell - 1 too hard to split: fall back to sympy's order routine
        return int(n_order(a, modulus))
    if k > 1:
        factors[ell] = factors.get(ell, 0) + k - 1
    return order_by_descent(a % modulus, modulus, ell ** (k - 1) * (ell - 1), factors)


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n, combined over prime powers by lcm.

    Raises:
        NotCoprime: If gcd(a, n) != 1
        BadInput: If n < 1
    """
    if n < 1:
        raise BadInput(f"modulus must be >= 1, got {n}")
    if gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) != 1")
    if n == 1:
        return 1
    result = 1
    for ell, k in factorint(n).items():
        result = lcm(result, order_mod_prime_power(a, int(ell), int(k)))
    return result


def cyclotomic_value(d: int, q: int) -> int:
    """Phi_d(q), so that q^E - 1 is the product of Phi_d(q) over d | E."""
    return int(cyclotomic_poly(d, polys=True).eval(q))


def prime_to_p_part(n: int, p: int) -> Tuple[int, int]:
    """Split n = r * p^t with p not dividing r; returns (r, t)."""
    t = 0
    while n % p == 0:
        n //= p
        t += 1
    return n, t
