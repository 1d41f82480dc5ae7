"""Torsion sieve domain models.

Records for the prime sieve, Dirichlet density estimates, elliptic curve
counts and component-group stability along ramified towers.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class SievePrime:
    """A surviving prime with its minimal witness exponent m * p^b.

    Attributes:
        ell: The prime
        m: Prime-to-p part of the witness exponent
        b: p-adic exponent of the witness
        is_p: True for ell = p, which the sieve condition does not address
    """

    ell: int
    m: int
    b: int
    is_p: bool = False


@dataclass(frozen=True)
class SieveResult:
    """Primes dividing some q^(m p^b) - 1 in the search box, outside 1 mod p^a.

    Attributes:
        q: Isogeny degree
        p: Prime
        a: Congruence level
        m_max: Period bound for the box
        primes: Survivors sorted by ell
        cofactors: Composite cofactors the factorization budget left unsplit
        probable: True if some prime is only a probable prime
    """

    q: int
    p: int
    a: int
    m_max: int
    primes: Tuple[SievePrime, ...]
    cofactors: Tuple[int, ...] = ()
    probable: bool = False

    @property
    def incomplete(self) -> bool:
        return bool(self.cofactors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "p": self.p,
            "a": self.a,
            "m_max": self.m_max,
            "primes": [
                {"ell": str(s.ell), "m": s.m, "b": s.b, "is_p": s.is_p} for s in self.primes
            ],
            "incomplete": self.incomplete,
            "cofactors": [str(c) for c in self.cofactors],
            "probable": self.probable,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["ell", "m", "b", "exponent", "is_p"]
        rows = [[str(s.ell), s.m, s.b, s.m * self.p**s.b, s.is_p] for s in self.primes]
        return headers, rows


@dataclass(frozen=True)
class DensityEstimate:
    """Share of primes up to X that are 1 mod p^a.

    Attributes:
        p: Prime
        X: Cutoff
        count_1modp: Primes ell <= X with ell = 1 mod p^a
        prime_count: Primes ell <= X
        a: Congruence level (1 for the plain estimate)
    """

    p: int
    X: int
    count_1modp: int
    prime_count: int
    a: int = 1

    @property
    def ratio(self) -> float:
        return self.count_1modp / self.prime_count if self.prime_count else 0.0

    @property
    def expected(self) -> float:
        """Dirichlet density 1/phi(p^a)."""
        return 1.0 / (self.p ** (self.a - 1) * (self.p - 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "a": self.a,
            "X": self.X,
            "count_1modp": self.count_1modp,
            "prime_count": self.prime_count,
            "ratio": round(self.ratio, 12),
            "expected": round(self.expected, 12),
        }

    def row(self) -> List[Any]:
        return [self.a, self.X, self.count_1modp, self.prime_count, round(self.ratio, 12), round(self.expected, 12)]

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        return list(DENSITY_HEADERS), [self.row()]


DENSITY_HEADERS = ["a", "X", "count_1modp", "prime_count", "ratio", "expected"]


@dataclass(frozen=True)
class DensityLadder:
    """Density estimates for a = 1..a_max at one cutoff."""

    p: int
    X: int
    levels: Tuple[DensityEstimate, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "X": self.X, "levels": [lvl.to_dict() for lvl in self.levels]}

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        return list(DENSITY_HEADERS), [lvl.row() for lvl in self.levels]


@dataclass(frozen=True)
class CurveReport:
    """Point count and group structure of y^2 = x^3 + a4 x + a6 over F_q.

    Attributes:
        a4: Coefficient of x (JSON form of the field element)
        a6: Constant coefficient (JSON form)
        q: Field size
        order: #E(F_q), point at infinity included
        structure: (n1, n2) with E(F_q) = Z/n1 x Z/n2 and n2 | n1, if computed
    """

    a4: Any
    a6: Any
    q: int
    order: int
    structure: Optional[Tuple[int, int]] = None

    @property
    def hasse_ok(self) -> bool:
        trace = self.q + 1 - self.order
        return trace * trace <= 4 * self.q

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a4": self.a4,
            "a6": self.a6,
            "q": self.q,
            "order": self.order,
            "structure": list(self.structure) if self.structure else None,
            "hasse_ok": self.hasse_ok,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        structure = " x ".join(f"Z/{n}" for n in self.structure) if self.structure else ""
        return ["q", "order", "structure", "hasse_ok"], [[self.q, self.order, structure, self.hasse_ok]]


@dataclass(frozen=True)
class TorsionPrimes:
    """Primes that can carry torsion on a curve with good reduction.

    Attributes:
        curve: The reduced curve's count
        primes: Prime divisors of #E(k) other than p
        p: Residue characteristic, always flagged as undetermined by reduction
        p_divides_order: Whether p itself divides #E(k)
    """

    curve: CurveReport
    primes: Tuple[int, ...]
    p: int
    p_divides_order: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "curve": self.curve.to_dict(),
            "primes": list(self.primes),
            "p_flagged": self.p,
            "p_divides_order": self.p_divides_order,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        rows: List[List[Any]] = [[ell, "divides #E(k)"] for ell in self.primes]
        rows.append([self.p, "undetermined by reduction"])
        return ["prime", "status"], rows


@dataclass(frozen=True)
class StabilityReport:
    """Component-group orders along a ramified tower.

    Attributes:
        v_delta: Valuation of the discriminant at the first stage
        p: Residue characteristic
        e_seq: Ramification indices of the stages
        values: v_n(Delta) = e_n * v_delta per stage
        prime_to_p: Prime-to-p part of each value
        stable_from: First stage from which every ratio e_{n+1}/e_n is a p-power
        reduction: "split" or "other"
    """

    v_delta: int
    p: int
    e_seq: Tuple[int, ...]
    values: Tuple[int, ...]
    prime_to_p: Tuple[int, ...]
    stable_from: int
    reduction: str = "split"

    @property
    def stable(self) -> bool:
        return len(self.e_seq) == 1 or self.stable_from < len(self.e_seq) - 1

    @property
    def component_bound(self) -> Optional[int]:
        """Non-split reduction only guarantees a component group of order at most 4."""
        return None if self.reduction == "split" else 4

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v_delta": self.v_delta,
            "p": self.p,
            "e_seq": list(self.e_seq),
            "values": [str(v) for v in self.values],
            "prime_to_p": [str(v) for v in self.prime_to_p],
            "stable": self.stable,
            "stable_from": self.stable_from,
            "reduction": self.reduction,
            "component_bound": self.component_bound,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["stage", "e", "v_n", "prime_to_p"]
        rows = [
            [i, e, str(v), str(r)]
            for i, (e, v, r) in enumerate(zip(self.e_seq, self.values, self.prime_to_p))
        ]
        return headers, rows
