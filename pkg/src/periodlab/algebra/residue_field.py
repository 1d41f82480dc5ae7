"""Residue field module for exact arithmetic in F_q, q = p^f.

Elements are coefficient vectors (low-to-high) of polynomials in x reduced by
a monic irreducible modulus over F_p. Specs and elements are immutable.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from periodlab.config import ENUMERATION_CAP
from periodlab.domain.exceptions import (
    BadInput,
    DivisionByZero,
    FieldTooLarge,
    NotPrime,
    ZeroElement,
)

logger = logging.getLogger(__name__)

FIELD_OPS = ("add", "sub", "mul", "inv", "pow")


def poly_mulmod(
    a: Sequence[int], b: Sequence[int], modulus: Sequence[int], m: int
) -> Tuple[int, ...]:
    """Multiply two residues of (Z/m)[x]/(modulus).

    Args:
        a: Coefficients low-to-high, length deg(modulus)
        b: Coefficients low-to-high, length deg(modulus)
        modulus: Monic modulus, low-to-high
        m: Coefficient modulus

    Returns:
        Reduced product, low-to-high
    """
    f = len(modulus) - 1
    if f == 1:
        return ((a[0] * b[0]) % m,)
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    # x^f = -(c_0 + ... + c_{f-1} x^{f-1})
    for k in range(len(prod) - 1, f - 1, -1):
        top = prod[k]
        if top:
            for i in range(f):
                prod[k - f + i] -= top * modulus[i]
    return tuple(c % m for c in prod[:f])


@dataclass(frozen=True)
class FieldSpec:
    """Finite field F_q presented as F_p[x]/(modulus).

    Attributes:
        p: Characteristic
        f: Residue degree
        modulus: Monic irreducible polynomial of degree f, low-to-high
    """

    p: int
    f: int
    modulus: Tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def precision(self) -> int:
        """Pi-adic precision of the field viewed as O/pi."""
        return 1

    @property
    def residue_field(self) -> "FieldSpec":
        return self

    def validate(self) -> None:
        """Check the field invariants.

        Raises:
            NotPrime: If p is not prime
            BadInput: If f or the modulus is malformed or reducible
        """
        if not isprime(self.p):
            raise NotPrime(f"p = {self.p} is not prime")
        if self.f < 1:
            raise BadInput(f"residue degree must be >= 1, got {self.f}")
        if len(self.modulus) != self.f + 1 or self.modulus[-1] != 1:
            raise BadInput(f"modulus must be monic of degree {self.f}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise BadInput("modulus coefficients must lie in [0, p)")
        high_to_low = [ZZ(c) for c in reversed(self.modulus)]
        if not gf_irreducible_p(high_to_low, self.p, ZZ):
            raise BadInput(f"modulus {list(self.modulus)} is reducible mod {self.p}")

    def element(self, coeffs: Sequence[int]) -> "FieldElem":
        """Build an element from a coefficient vector (low-to-high)."""
        if len(coeffs) > self.f:
            raise BadInput(f"expected at most {self.f} coefficients, got {len(coeffs)}")
        padded = list(coeffs) + [0] * (self.f - len(coeffs))
        return FieldElem(tuple(c % self.p for c in padded), self)

    def from_int(self, n: int) -> "FieldElem":
        """Image of the integer n under Z -> F_p -> F_q."""
        return FieldElem((n % self.p,) + (0,) * (self.f - 1), self)

    def element_at(self, index: int) -> "FieldElem":
        """Element whose base-p digits (low-to-high) are the coefficients."""
        coeffs = []
        for _ in range(self.f):
            index, digit = divmod(index, self.p)
            coeffs.append(digit)
        return FieldElem(tuple(coeffs), self)

    def element_from_json(self, data: Union[int, Sequence[int]]) -> "FieldElem":
        """Inverse of FieldElem.to_json; an int is embedded via Z -> F_p."""
        if isinstance(data, int):
            return self.from_int(data)
        return self.element([int(c) for c in data])

    def from_pi_digits(self, digits: Sequence[int]) -> "FieldElem":
        """Reduce a pi-expansion c_0 + c_1 pi + ... to the residue field."""
        return self.from_int(digits[0] if digits else 0)

    def zero(self) -> "FieldElem":
        return FieldElem((0,) * self.f, self)

    def one(self) -> "FieldElem":
        return self.from_int(1)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FieldSpec":
        """Load and validate a spec from its JSON form."""
        spec = cls(int(data["p"]), int(data["f"]), tuple(int(c) for c in data["modulus"]))
        spec.validate()
        return spec


@dataclass(frozen=True)
class FieldElem:
    """Element of F_q in canonical form."""

    coeffs: Tuple[int, ...]
    field: FieldSpec

    @property
    def ring(self) -> FieldSpec:
        return self.field

    def _check(self, other: "FieldElem") -> None:
        if other.field != self.field:
            raise BadInput("elements belong to different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.p
        return FieldElem(
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field
        )

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.p
        return FieldElem(
            tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field
        )

    def __neg__(self) -> "FieldElem":
        p = self.field.p
        return FieldElem(tuple((-a) % p for a in self.coeffs), self.field)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        spec = self.field
        return FieldElem(poly_mulmod(self.coeffs, other.coeffs, spec.modulus, spec.p), spec)

    def __pow__(self, n: int) -> "FieldElem":
        spec = self.field
        if n < 0:
            return self.inverse() ** (-n)
        if spec.f == 1:
            return FieldElem((pow(self.coeffs[0], n, spec.p),), spec)
        result = spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse.

        Raises:
            DivisionByZero: If the element is zero
        """
        if self.is_zero():
            raise DivisionByZero("zero has no inverse in the residue field")
        spec = self.field
        if spec.f == 1:
            return FieldElem((pow(self.coeffs[0], -1, spec.p),), spec)
        return self ** (spec.q - 2)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return not self.is_zero()

    def valuation(self) -> int:
        """Valuation of the element viewed in O/pi: 0 for units, 1 for zero."""
        return 1 if self.is_zero() else 0

    def to_int(self) -> int:
        """Enumeration index: coefficients read as base-p digits."""
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def sort_key(self) -> Tuple[int, ...]:
        return (self.to_int(),)

    def to_json(self) -> Union[int, List[int]]:
        if self.field.f == 1:
            return self.coeffs[0]
        return list(self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElem({self.to_json()} in F_{self.field.q})"


@lru_cache(maxsize=256)
def _smallest_irreducible(p: int, f: int) -> Tuple[int, ...]:
    # n runs over x^f + c_{f-1} x^{f-1} + ... + c_0 with c_0 the least significant
    # base-p digit, i.e. lexicographic order of the high-to-low coefficient list.
    for n in range(p**f):
        low = []
        rest = n
        for _ in range(f):
            rest, digit = divmod(rest, p)
            low.append(digit)
        high_to_low = [ZZ(1)] + [ZZ(c) for c in reversed(low)]
        if gf_irreducible_p(high_to_low, p, ZZ):
            return tuple(low) + (1,)
    raise AssertionError(f"no irreducible polynomial of degree {f} over F_{p}")


def ff_make(p: int, f: int, cap: int = ENUMERATION_CAP) -> FieldSpec:
    """Build F_{p^f} with a deterministically chosen modulus.

    Args:
        p: Prime characteristic
        f: Residue degree (>= 1)
        cap: Largest field size allowed

    Returns:
        FieldSpec whose modulus is the smallest irreducible in
        lexicographic order of its high-to-low coefficient list

    Raises:
        NotPrime: If p is not prime
        BadInput: If f < 1
        FieldTooLarge: If p^f exceeds cap
    """
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if f < 1:
        raise BadInput(f"residue degree must be >= 1, got {f}")
    if p**f > cap:
        raise FieldTooLarge(f"F_{p}^{f} has {p**f} elements, cap is {cap}")
    modulus = _smallest_irreducible(p, f)
    logger.debug("F_%d^%d modulus %s", p, f, modulus)
    return FieldSpec(p, f, modulus)


def ff_arith(
    a: FieldElem, b: Optional[Union[FieldElem, int]], op: str
) -> FieldElem:
    """Apply a field operation.

    Args:
        a: Left operand
        b: Right operand; an integer exponent for ``pow``, ignored for ``inv``
        op: One of add, sub, mul, inv, pow

    Returns:
        Canonical result

    Raises:
        DivisionByZero: On inverting zero
        BadInput: On an unknown op or mismatched operands
    """
    if op == "inv":
        return a.inverse()
    if op == "pow":
        if not isinstance(b, int):
            raise BadInput("pow expects an integer exponent")
        return a**b
    if not isinstance(b, FieldElem):
        raise BadInput(f"{op} expects a field element operand")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise BadInput(f"unknown field operation {op!r}; expected one of {FIELD_OPS}")


def ff_mult_order(a: FieldElem) -> int:
    """Multiplicative order of a nonzero element.

    Raises:
        ZeroElement: If a is zero
    """
    if a.is_zero():
        raise ZeroElement("zero has no multiplicative order")
    one = a.field.one()
    order = a.field.q - 1
    for ell, exp in factorint(order).items():
        for _ in range(exp):
            if a ** (order // ell) == one:
                order //= ell
            else:
                break
    return order


def ff_enumerate(spec: FieldSpec, cap: int = ENUMERATION_CAP) -> List[FieldElem]:
    """All elements of the field in enumeration-index order.

    Raises:
        FieldTooLarge: If q exceeds cap
    """
    if spec.q > cap:
        raise FieldTooLarge(f"F_{spec.q} exceeds the enumeration cap {cap}")
    return [spec.element_at(i) for i in range(spec.q)]


def ff_from_dict(data: Dict[str, Any], cap: int = ENUMERATION_CAP) -> FieldSpec:
    """Field from JSON: an explicit modulus is validated, otherwise the default one is chosen."""
    if "modulus" in data:
        spec = FieldSpec.from_dict(data)
        if spec.q > cap:
            raise FieldTooLarge(f"F_{spec.q} exceeds the enumeration cap {cap}")
        return spec
    return ff_make(int(data["p"]), int(data.get("f", 1)), cap)
