"""Truncated ramified DVR module: exact arithmetic in O/pi^N.

O is the ring of integers of a totally ramified degree-e extension of the
unramified degree-f extension W of Z_p, cut out by an Eisenstein polynomial
E(pi) = 0. An element is sum_{i<e} a_i pi^i with a_i in W, and slot i is kept
modulo p^ceil((N - i)/e), which is exactly O/pi^N.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from periodlab.algebra.residue_field import FieldElem, FieldSpec, ff_enumerate, ff_make, poly_mulmod
from periodlab.config import DEFAULT_PRECISION_FACTOR, ENUMERATION_CAP
from periodlab.domain.exceptions import (
    BadInput,
    BadPrecision,
    FieldTooLarge,
    NonUnitInverse,
    NotEisenstein,
)

logger = logging.getLogger(__name__)

EISENSTEIN_PRESETS = ("default", "zeta_p", "variant")
DVR_OPS = ("add", "sub", "mul", "inv")

Slot = Tuple[int, ...]


def p_valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def eisenstein_polynomial(p: int, e: int, choice: Union[str, Sequence[int]]) -> Tuple[int, ...]:
    """Resolve a preset name or coefficient list to E, low-to-high.

    Presets:
        default: x^e - p
        zeta_p: ((1 + x)^p - 1)/x, requires e = p - 1
        variant: x^e + p(1 + x + ... + x^(e-1))

    Raises:
        NotEisenstein: If the polynomial fails the criterion
    """
    if isinstance(choice, str):
        if choice == "default":
            coeffs: Tuple[int, ...] = (-p,) + (0,) * (e - 1) + (1,)
        elif choice == "zeta_p":
            if e != p - 1:
                raise NotEisenstein(f"zeta_p preset needs e = p - 1 = {p - 1}, got e = {e}")
            coeffs = tuple(comb(p, k + 1) for k in range(p))
        elif choice == "variant":
            coeffs = (p,) * e + (1,)
        else:
            raise NotEisenstein(
                f"unknown Eisenstein preset {choice!r}; expected one of {EISENSTEIN_PRESETS}"
            )
    else:
        coeffs = tuple(int(c) for c in choice)
    check_eisenstein(coeffs, p, e)
    return coeffs


def check_eisenstein(coeffs: Sequence[int], p: int, e: int) -> None:
    """Raise NotEisenstein unless coeffs is an Eisenstein polynomial of degree e."""
    if len(coeffs) != e + 1 or coeffs[-1] != 1:
        raise NotEisenstein(f"E must be monic of degree {e}, got {list(coeffs)}")
    if any(c % p for c in coeffs[:-1]):
        raise NotEisenstein(f"non-leading coefficients of {list(coeffs)} must be divisible by {p}")
    if coeffs[0] % (p * p) == 0:
        raise NotEisenstein(f"constant term {coeffs[0]} must not be divisible by {p}^2")


def eisenstein_variants(p: int, e: int) -> List[Tuple[str, Tuple[int, ...]]]:
    """Two distinct Eisenstein polynomials of degree e."""
    return [(name, eisenstein_polynomial(p, e, name)) for name in ("default", "variant")]


@dataclass(frozen=True)
class RingSpec:
    """Truncated ring O/pi^N.

    Attributes:
        base: Residue field (gives p and f)
        e: Ramification index
        eisenstein: Eisenstein polynomial E, low-to-high, integer coefficients
        precision: Pi-adic precision N
        preset: Preset name E came from, if any (not part of equality)
    """

    base: FieldSpec
    e: int
    eisenstein: Tuple[int, ...]
    precision: int
    preset: Optional[str] = field(default=None, compare=False)

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def f(self) -> int:
        return self.base.f

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def residue_field(self) -> FieldSpec:
        return self.base

    @cached_property
    def p_precision(self) -> int:
        """M = ceil(N/e), the p-adic precision of slot 0."""
        return -(-self.precision // self.e)

    @cached_property
    def slot_moduli(self) -> Tuple[int, ...]:
        p, e, n = self.p, self.e, self.precision
        return tuple(p ** max(0, -(-(n - i) // e)) for i in range(e))

    @cached_property
    def _pm(self) -> int:
        return self.p**self.p_precision

    @cached_property
    def _pi_shift_unit(self) -> int:
        # E_0 = p * w0 with w0 a unit
        return pow(self.eisenstein[0] // self.p, -1, self._pm)

    def with_precision(self, precision: int) -> "RingSpec":
        if precision < 1:
            raise BadPrecision(f"precision must be >= 1, got {precision}")
        return replace(self, precision=precision)

    def make(self, slots: Sequence[Sequence[int]]) -> "DvrElement":
        """Canonical element from e slot vectors (missing slots are zero)."""
        f = self.f
        if f == 1:
            return DvrElement(
                tuple(
                    ((slots[i][0] if i < len(slots) and slots[i] else 0) % modulus,)
                    for i, modulus in enumerate(self.slot_moduli)
                ),
                self,
            )
        out = []
        for i, modulus in enumerate(self.slot_moduli):
            slot = slots[i] if i < len(slots) else ()
            padded = list(slot) + [0] * (f - len(slot))
            out.append(tuple(c % modulus for c in padded))
        return DvrElement(tuple(out), self)

    def zero(self) -> "DvrElement":
        return self.make([])

    def one(self) -> "DvrElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "DvrElement":
        return self.make([(n,)])

    def from_field(self, x: FieldElem) -> "DvrElement":
        """Naive lift of a residue: the same coefficient vector in slot 0."""
        if x.field != self.base:
            raise BadInput("residue element belongs to a different field")
        return self.make([x.coeffs])

    def pi(self) -> "DvrElement":
        if self.e == 1:
            # E = x + E_0, so pi = -E_0
            return self.from_int(-self.eisenstein[0])
        return self.make([(), (1,)])

    def from_pi_digits(self, digits: Sequence[int]) -> "DvrElement":
        """Element sum_i c_i pi^i for integers c_i (any number of digits)."""
        if len(digits) <= self.e and self.e > 1:
            return self.make([(c,) for c in digits])
        pi = self.pi()
        result = self.zero()
        for c in reversed(digits):
            result = result * pi + self.from_int(c)
        return result

    def element_from_json(self, data: Union[int, Sequence[Any]]) -> "DvrElement":
        """Inverse of DvrElement.to_json; an int is embedded via Z -> O."""
        if isinstance(data, int):
            return self.from_int(data)
        return self.make([tuple(int(c) for c in slot) for slot in data])

    def to_dict(self) -> Dict[str, Any]:
        eis: Union[str, List[int]] = (
            self.preset if self.preset in ("default", "zeta_p") else list(self.eisenstein)
        )
        return {"p": self.p, "f": self.f, "e": self.e, "eisenstein": eis, "precision": self.precision}

    def describe(self) -> str:
        return f"O(p={self.p}, f={self.f}, e={self.e}, E={list(self.eisenstein)})/pi^{self.precision}"


@dataclass(frozen=True)
class DvrElement:
    """Element of O/pi^N in canonical form (slot i reduced mod p^ceil((N-i)/e))."""

    digits: Tuple[Slot, ...]
    ring: RingSpec

    def _check(self, other: "DvrElement") -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise BadInput("elements belong to different rings")

    def __add__(self, other: "DvrElement") -> "DvrElement":
        self._check(other)
        return self.ring.make(
            [tuple(a + b for a, b in zip(x, y)) for x, y in zip(self.digits, other.digits)]
        )

    def __sub__(self, other: "DvrElement") -> "DvrElement":
        self._check(other)
        return self.ring.make(
            [tuple(a - b for a, b in zip(x, y)) for x, y in zip(self.digits, other.digits)]
        )

    def __neg__(self) -> "DvrElement":
        return self.ring.make([tuple(-a for a in x) for x in self.digits])

    def __mul__(self, other: "DvrElement") -> "DvrElement":
        self._check(other)
        ring = self.ring
        e, f, pm = ring.e, ring.f, ring._pm
        modulus = ring.base.modulus
        if e == 1:
            return ring.make([poly_mulmod(self.digits[0], other.digits[0], modulus, pm)])
        if f == 1:
            return self._mul_prime_field(other)
        prod = [[0] * f for _ in range(2 * e - 1)]
        for i, a in enumerate(self.digits):
            if not any(a):
                continue
            for j, b in enumerate(other.digits):
                if not any(b):
                    continue
                c = poly_mulmod(a, b, modulus, pm)
                row = prod[i + j]
                for k in range(f):
                    row[k] += c[k]
        # pi^e = -(E_0 + E_1 pi + ... + E_{e-1} pi^{e-1})
        eis = ring.eisenstein
        for k in range(2 * e - 2, e - 1, -1):
            top = prod[k]
            if not any(top):
                continue
            for i in range(e):
                if eis[i]:
                    row = prod[k - e + i]
                    for t in range(f):
                        row[t] -= eis[i] * top[t]
        return ring.make(prod[:e])

    def _mul_prime_field(self, other: "DvrElement") -> "DvrElement":
        """Product for f = 1, where every slot is a single integer."""
        ring = self.ring
        e = ring.e
        a = [slot[0] for slot in self.digits]
        b = [slot[0] for slot in other.digits]
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        eis = ring.eisenstein
        for k in range(2 * e - 2, e - 1, -1):
            top = prod[k]
            if top:
                for i in range(e):
                    if eis[i]:
                        prod[k - e + i] -= eis[i] * top
        return DvrElement(
            tuple((c % modulus,) for c, modulus in zip(prod, ring.slot_moduli)), ring
        )

    def __pow__(self, n: int) -> "DvrElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k: int) -> "DvrElement":
        """Multiply by the integer k."""
        return self.ring.make([tuple(k * a for a in x) for x in self.digits])

    def inverse(self) -> "DvrElement":
        """Inverse of a unit by Newton iteration y <- y(2 - a y).

        Raises:
            NonUnitInverse: If the element has positive valuation
        """
        if not self.is_unit():
            raise NonUnitInverse(f"element of valuation {self.valuation()} is not a unit")
        ring = self.ring
        y = ring.from_field(self.reduce().inverse())
        two = ring.from_int(2)
        for _ in range(ring.precision.bit_length() + 1):
            y = y * (two - self * y)
        return y

    def is_zero(self) -> bool:
        return not any(any(slot) for slot in self.digits)

    def is_unit(self) -> bool:
        return any(c % self.ring.p for c in self.digits[0])

    def valuation(self) -> int:
        """Pi-adic valuation, capped at the precision N."""
        ring = self.ring
        best = ring.precision
        for i, slot in enumerate(self.digits):
            for c in slot:
                if c:
                    best = min(best, ring.e * p_valuation(c, ring.p) + i)
        return best

    def reduce(self) -> FieldElem:
        """Image in the residue field."""
        return self.ring.base.element(self.digits[0])

    def shift(self, k: int) -> "DvrElement":
        """Exact division by pi^k; the result is meaningful modulo pi^(N-k).

        Raises:
            BadInput: If the valuation is below k
        """
        if k == 0:
            return self
        if self.valuation() < k:
            raise BadInput(f"cannot divide an element of valuation {self.valuation()} by pi^{k}")
        ring = self.ring
        e, p, eis = ring.e, ring.p, ring.eisenstein
        w0_inv = ring._pi_shift_unit
        digits = [list(slot) for slot in self.digits]
        for _ in range(k):
            c = [(a // p) * w0_inv for a in digits[0]]
            nxt = [list(slot) for slot in digits[1:]] + [[0] * ring.f]
            # p/pi = -(pi^{e-1} + E_{e-1} pi^{e-2} + ... + E_1) / w0
            for j in range(1, e):
                for t, ct in enumerate(c):
                    nxt[j - 1][t] -= eis[j] * ct
            for t, ct in enumerate(c):
                nxt[e - 1][t] -= ct
            digits = [list(s) for s in ring.make(nxt).digits]
        return ring.make(digits)

    def truncate(self, k: int) -> "DvrElement":
        """Reduce modulo pi^k (k <= N), keeping the same ring."""
        ring = self.ring
        e, p = ring.e, ring.p
        slots = []
        for i, slot in enumerate(self.digits):
            modulus = p ** max(0, -(-(k - i) // e))
            slots.append(tuple(c % modulus for c in slot))
        return ring.make(slots)

    def at_precision(self, ring: RingSpec) -> "DvrElement":
        """Move the representative into the same ring at another precision."""
        if replace(ring, precision=self.ring.precision) != self.ring:
            raise BadInput("rings differ in more than precision")
        return ring.make(self.digits)

    def sort_key(self) -> Tuple[int, ...]:
        return tuple(c for slot in self.digits for c in slot)

    def to_json(self) -> List[List[int]]:
        return [list(slot) for slot in self.digits]

    def __repr__(self) -> str:
        if self.ring.e == 1 and self.ring.f == 1:
            return f"DvrElement({self.digits[0][0]} mod {self.ring.p}^{self.ring.precision})"
        return f"DvrElement({self.to_json()} in {self.ring.describe()})"


def dvr_make(
    p: int,
    f: int,
    e: int,
    eisenstein: Union[str, Sequence[int]] = "default",
    precision: Optional[int] = None,
    cap: int = ENUMERATION_CAP,
) -> RingSpec:
    """Build O/pi^N from (p, f, e, E, N).

    Args:
        p: Residue characteristic
        f: Residue degree
        e: Ramification index
        eisenstein: Preset name or coefficient list (low-to-high)
        precision: N, defaults to 6e
        cap: Residue field enumeration cap

    Returns:
        Validated RingSpec

    Raises:
        NotEisenstein: If E fails the criterion
        BadPrecision: If N < 1
    """
    if e < 1:
        raise BadInput(f"ramification index must be >= 1, got {e}")
    if precision is None:
        precision = DEFAULT_PRECISION_FACTOR * e
    if not isinstance(precision, int) or precision < 1:
        raise BadPrecision(f"precision must be a positive integer, got {precision!r}")
    base = ff_make(p, f, cap)
    coeffs = eisenstein_polynomial(p, e, eisenstein)
    preset = eisenstein if isinstance(eisenstein, str) else None
    ring = RingSpec(base, e, coeffs, precision, preset)
    logger.debug("built %s", ring.describe())
    return ring


def ring_from_dict(data: Dict[str, Any], cap: int = ENUMERATION_CAP) -> RingSpec:
    """Build a ring from its JSON form."""
    return dvr_make(
        int(data["p"]),
        int(data.get("f", 1)),
        int(data.get("e", 1)),
        data.get("eisenstein", "default"),
        data.get("precision"),
        cap,
    )


def dvr_arith(a: DvrElement, b: Optional[DvrElement], op: str) -> DvrElement:
    """Apply a ring operation (b is ignored for ``inv``).

    Raises:
        NonUnitInverse: On inverting a non-unit
    """
    if op == "inv":
        return a.inverse()
    if b is None:
        raise BadInput(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise BadInput(f"unknown ring operation {op!r}; expected one of {DVR_OPS}")


def dvr_valuation(a: DvrElement) -> int:
    return a.valuation()


def dvr_reduce(a: DvrElement) -> FieldElem:
    return a.reduce()


def teichmuller_lift(x: FieldElem, ring: RingSpec) -> DvrElement:
    """Root-of-unity representative of x: fixed point of y -> y^q.

    Each application of y -> y^q gains at least one digit of precision, so
    N + 1 rounds always reach the fixed point.
    """
    y = ring.from_field(x)
    q = ring.q
    for _ in range(ring.precision + 1):
        nxt = y**q
        if nxt == y:
            return y
        y = nxt
    return y


@dataclass(frozen=True)
class RootsOfUnity:
    """Prime-to-p roots of unity of O/pi^N (the Teichmueller units).

    Attributes:
        ring: Ring they live in
        elements: Teichmueller lifts, sorted by representative
        residues: Residue of each element, same order
    """

    ring: RingSpec
    elements: Tuple[DvrElement, ...]
    residues: Tuple[FieldElem, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ring": self.ring.to_dict(),
            "order": self.order,
            "elements": [w.to_json() for w in self.elements],
            "residues": [r.to_json() for r in self.residues],
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["residue", "teichmuller"]
        rows = [[str(r.to_json()), str(w.to_json())] for r, w in zip(self.residues, self.elements)]
        return headers, rows


def mu_prime_to_p(ring: RingSpec, cap: int = ENUMERATION_CAP) -> RootsOfUnity:
    """Teichmueller lifts of k^x; the order is q - 1 for every e and N.

    Raises:
        FieldTooLarge: If q exceeds cap
    """
    if ring.q > cap:
        raise FieldTooLarge(f"F_{ring.q} exceeds the enumeration cap {cap}")
    pairs = [
        (teichmuller_lift(x, ring), x) for x in ff_enumerate(ring.base, cap) if not x.is_zero()
    ]
    pairs.sort(key=lambda pair: pair[0].sort_key())
    return RootsOfUnity(ring, tuple(w for w, _ in pairs), tuple(x for _, x in pairs))


def dvr_shift(a: DvrElement, k: int) -> DvrElement:
    """Exact division by pi^k (see DvrElement.shift)."""
    return a.shift(k)
