"""Dynamics core service for polynomial self-maps of A^d and P^d.

Maps are stored once, with integer (or pi-expansion) coefficients, and are
reduced into a ring only when evaluated, so one MapSpec serves every base
change. Points over a ring O/pi^N or over its residue field share one record
type; projective points are normalized so their first unit coordinate is 1.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Add, Integer, Mul, Poly, Symbol, expand, symbols

from periodlab.algebra.matrices import Matrix, mat_mul
from periodlab.algebra.residue_field import FieldSpec, ff_enumerate
from periodlab.config import DEFAULT_MAX_ITER, ENUMERATION_CAP
from periodlab.domain.census import FiberCensus, OrbitRecord
from periodlab.domain.exceptions import (
    BadInput,
    BaseLocusNonempty,
    DimensionMismatch,
    FieldTooLarge,
    InhomogeneousMap,
    IterationBudgetExceeded,
    PrecisionExhausted,
)

logger = logging.getLogger(__name__)

SPACES = ("affine", "projective")
ORBIT_METHODS = ("visited", "brent")

Coefficient = Tuple[int, ...]
Term = Tuple[Tuple[int, ...], Coefficient]


def _trim(digits: Sequence[int]) -> Coefficient:
    out = list(digits)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with pi-expansion coefficients.

    Attributes:
        nvars: Number of variables
        terms: Sorted (exponent vector, coefficient digits) pairs, no zero terms
    """

    nvars: int
    terms: Tuple[Term, ...]

    @classmethod
    def from_terms(
        cls, nvars: int, terms: Iterable[Tuple[Sequence[int], Union[int, Sequence[int]]]]
    ) -> "Polynomial":
        acc: Dict[Tuple[int, ...], List[int]] = {}
        for exps, coeff in terms:
            key = tuple(int(x) for x in exps)
            if len(key) != nvars:
                raise DimensionMismatch(
                    f"monomial {list(key)} has {len(key)} exponents, expected {nvars}"
                )
            if any(x < 0 for x in key):
                raise BadInput(f"negative exponent in {list(key)}")
            digits = [int(coeff)] if isinstance(coeff, int) else [int(c) for c in coeff]
            slot = acc.setdefault(key, [])
            slot.extend([0] * (len(digits) - len(slot)))
            for i, c in enumerate(digits):
                slot[i] += c
        cleaned = sorted((key, _trim(c)) for key, c in acc.items() if _trim(c))
        return cls(nvars, tuple(cleaned))

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(exps) for exps, _ in self.terms}) <= 1

    def derivative(self, j: int) -> "Polynomial":
        terms = []
        for exps, coeff in self.terms:
            if exps[j]:
                lowered = exps[:j] + (exps[j] - 1,) + exps[j + 1 :]
                terms.append((lowered, tuple(exps[j] * c for c in coeff)))
        return Polynomial.from_terms(self.nvars, terms)

    def reduce(self, p: int) -> "Polynomial":
        """Coefficientwise image over F_p (pi maps to 0)."""
        return Polynomial.from_terms(self.nvars, [(e, c[0] % p) for e, c in self.terms])

    def to_sympy(self, gens: Sequence[Symbol], pi: Symbol) -> Any:
        parts = []
        for exps, coeff in self.terms:
            c = Add(*[Integer(ck) * pi**k for k, ck in enumerate(coeff)])
            parts.append(c * Mul(*[g**x for g, x in zip(gens, exps)]))
        return Add(*parts)

    @classmethod
    def from_sympy(cls, expr: Any, gens: Sequence[Symbol], pi: Symbol) -> "Polynomial":
        nvars = len(gens)
        terms = []
        for monom, coeff in Poly(expand(expr), *gens, pi).terms():
            if coeff == 0:
                continue
            digits = [0] * monom[nvars] + [int(coeff)]
            terms.append((monom[:nvars], digits))
        return cls.from_terms(nvars, terms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "monomials": [
                {"exps": list(exps), "coeff": str(c[0]) if len(c) == 1 else list(c)}
                for exps, c in self.terms
            ]
        }


@dataclass(frozen=True)
class MapSpec:
    """Polynomial self-map of A^d (d polys in d variables) or P^d (d + 1 forms).

    Attributes:
        space: "affine" or "projective"
        dim: Ambient dimension d
        polys: The coordinate polynomials
    """

    space: str
    dim: int
    polys: Tuple[Polynomial, ...]

    @property
    def nvars(self) -> int:
        return self.dim + 1 if self.space == "projective" else self.dim

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(poly.degree for poly in self.polys)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MapSpec":
        """Build a map from its JSON form (coefficients as int strings or digit lists)."""
        space = data["space"]
        if space not in SPACES:
            raise BadInput(f"unknown space {space!r}; expected one of {SPACES}")
        dim = int(data["dim"])
        nvars = dim + 1 if space == "projective" else dim
        polys = []
        for poly in data["polys"]:
            terms = []
            for mono in poly["monomials"]:
                raw = mono["coeff"]
                coeff: Union[int, List[int]] = (
                    [int(c) for c in raw] if isinstance(raw, list) else int(raw)
                )
                terms.append((mono["exps"], coeff))
            polys.append(Polynomial.from_terms(nvars, terms))
        return cls(space, dim, tuple(polys))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "dim": self.dim,
            "polys": [poly.to_dict() for poly in self.polys],
        }

    def reduce(self, p: int) -> "MapSpec":
        return MapSpec(self.space, self.dim, tuple(poly.reduce(p) for poly in self.polys))

    def compose(self, inner: "MapSpec") -> "MapSpec":
        """The map self o inner, expanded symbolically."""
        if (inner.space, inner.dim) != (self.space, self.dim):
            raise DimensionMismatch("can only compose maps on the same ambient space")
        gens = symbols(f"x0:{self.nvars}")
        pi = Symbol("pi")
        inner_exprs = {g: poly.to_sympy(gens, pi) for g, poly in zip(gens, inner.polys)}
        polys = tuple(
            Polynomial.from_sympy(poly.to_sympy(gens, pi).xreplace(inner_exprs), gens, pi)
            for poly in self.polys
        )
        return MapSpec(self.space, self.dim, polys)

    def iterate(self, n: int) -> "MapSpec":
        if n < 1:
            raise BadInput(f"iterate count must be >= 1, got {n}")
        result = self
        for _ in range(n - 1):
            result = self.compose(result)
        return result


@dataclass(frozen=True)
class PointRec:
    """Point of A^d or P^d over a ring O/pi^N or a residue field.

    Attributes:
        space: "affine" or "projective"
        coords: Coordinates (DvrElement or FieldElem)
        normalized: True once the first unit coordinate has been scaled to 1
    """

    space: str
    coords: Tuple[Any, ...]
    normalized: bool = True

    @property
    def ring(self) -> Any:
        return self.coords[0].ring

    @property
    def chart_index(self) -> Optional[int]:
        if self.space != "projective":
            return None
        return next(i for i, x in enumerate(self.coords) if x.is_unit())

    def chart_coords(self) -> Tuple[Any, ...]:
        c = self.chart_index
        if c is None:
            return self.coords
        return self.coords[:c] + self.coords[c + 1 :]

    def with_chart_coords(self, values: Sequence[Any]) -> "PointRec":
        """Same chart, new affine chart coordinates."""
        values = tuple(values)
        c = self.chart_index
        if c is None:
            return PointRec(self.space, values)
        return PointRec(self.space, values[:c] + (self.coords[c],) + values[c:])

    def at_precision(self, ring: Any) -> "PointRec":
        return PointRec(self.space, tuple(x.at_precision(ring) for x in self.coords))

    def sort_key(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(x.sort_key() for x in self.coords)

    def to_json(self) -> List[Any]:
        return [x.to_json() for x in self.coords]

    def __repr__(self) -> str:
        inner = ", ".join(str(x.to_json()) for x in self.coords)
        return f"[{inner.replace(', ', ' : ')}]" if self.space == "projective" else f"({inner})"


def _first_unit(values: Sequence[Any]) -> Optional[int]:
    return next((i for i, x in enumerate(values) if x.is_unit()), None)


def make_point(space: str, coords: Sequence[Any]) -> PointRec:
    """Build a point, normalizing projective coordinates.

    Raises:
        BadInput: If no coordinate is a unit or the space is unknown
    """
    if space not in SPACES:
        raise BadInput(f"unknown space {space!r}")
    coords = tuple(coords)
    if not coords:
        raise BadInput("a point needs at least one coordinate")
    if space == "affine":
        return PointRec(space, coords)
    c = _first_unit(coords)
    if c is None:
        raise BadInput("projective point needs a unit coordinate")
    scale = coords[c].inverse()
    normalized = tuple(x * scale for x in coords)
    return PointRec(space, normalized[:c] + (coords[c].ring.one(),) + normalized[c + 1 :])


def point_from_json(space: str, data: Sequence[Any], ring: Any) -> PointRec:
    """Point from JSON coordinates (ints, or digit lists) over ring."""
    return make_point(space, [ring.element_from_json(x) for x in data])


class _CompiledMap:
    """A MapSpec with coefficients and partial derivatives placed in one ring.

    A compiled polynomial is a list of (exponents, coefficient) pairs, with
    coefficient None standing for 1. Identically zero partials compile to
    an empty list.
    """

    def __init__(self, m: MapSpec, ring: Any) -> None:
        self.space = m.space
        self.nvars = m.nvars
        self.ring = ring
        self.one = ring.one()
        self.zero_elem = ring.zero()
        self.m = m
        self.polys = [self._compile(poly) for poly in m.polys]
        self.partials = [
            [self._compile(poly.derivative(j)) for j in range(m.nvars)] for poly in m.polys
        ]
        self.max_degree = max(max(m.degrees, default=1), 1)

    @cached_property
    def second_partials(self) -> List[List[List[List[Tuple[Tuple[int, ...], Any]]]]]:
        return [
            [
                [self._compile(poly.derivative(u).derivative(v)) for v in range(self.nvars)]
                for u in range(self.nvars)
            ]
            for poly in self.m.polys
        ]

    def _compile(self, poly: Polynomial) -> List[Tuple[Tuple[int, ...], Any]]:
        compiled = []
        for exps, c in poly.terms:
            coeff = self.ring.from_pi_digits(c)
            compiled.append((exps, None if coeff == self.one else coeff))
        return compiled

    def _powers(self, xs: Sequence[Any]) -> List[List[Any]]:
        table = []
        for x in xs:
            row = [self.one, x]
            for _ in range(self.max_degree - 1):
                row.append(row[-1] * x)
            table.append(row)
        return table

    def _eval(self, compiled: List[Tuple[Tuple[int, ...], Any]], pows: List[List[Any]]) -> Any:
        acc = None
        for exps, coeff in compiled:
            term = coeff
            for j, x in enumerate(exps):
                if x:
                    term = pows[j][x] if term is None else term * pows[j][x]
            if term is None:
                term = self.one
            acc = term if acc is None else acc + term
        return self.zero_elem if acc is None else acc

    def values(self, xs: Sequence[Any]) -> List[Any]:
        pows = self._powers(xs)
        return [self._eval(poly, pows) for poly in self.polys]

    def values_and_partials(self, xs: Sequence[Any]) -> Tuple[List[Any], List[List[Any]]]:
        pows = self._powers(xs)
        vals = [self._eval(poly, pows) for poly in self.polys]
        jac = [[self._eval(d, pows) for d in row] for row in self.partials]
        return vals, jac

    def second_order(
        self, xs: Sequence[Any]
    ) -> Tuple[List[Any], List[List[Optional[Any]]], List[List[List[Optional[Any]]]]]:
        """Values with first and second partials; identically zero partials are None."""
        pows = self._powers(xs)
        vals = [self._eval(poly, pows) for poly in self.polys]
        first = [[self._eval(d, pows) if d else None for d in row] for row in self.partials]
        second = [
            [[self._eval(d, pows) if d else None for d in row] for row in block]
            for block in self.second_partials
        ]
        return vals, first, second


@lru_cache(maxsize=128)
def _compiled(m: MapSpec, ring: Any) -> _CompiledMap:
    return _CompiledMap(m, ring)


def _no_image(ring: Any) -> Exception:
    if isinstance(ring, FieldSpec):
        return BaseLocusNonempty("point lies in the base locus of the reduced map")
    return PrecisionExhausted(
        f"every output coordinate has valuation >= {ring.precision}"
    )


def evaluate(m: MapSpec, P: PointRec) -> PointRec:
    """Image of P, renormalized for projective maps.

    Raises:
        PrecisionExhausted: If no output coordinate is a unit at precision N
        BaseLocusNonempty: If P is a base point of a map over the residue field
    """
    ring = P.ring
    vals = _compiled(m, ring).values(P.coords)
    if m.space == "affine":
        return PointRec("affine", tuple(vals))
    c = _first_unit(vals)
    if c is None:
        raise _no_image(ring)
    scale = vals[c].inverse()
    out = [v * scale for v in vals]
    out[c] = ring.one()
    return PointRec("projective", tuple(out))


@dataclass(frozen=True)
class ChartStep:
    """One application of a map with its chart Jacobian.

    Attributes:
        image: Normalized image point
        jacobian: d x d derivative matrix from the chart of the input to the
            chart of the image
    """

    image: PointRec
    jacobian: Matrix


def chart_step(m: MapSpec, P: PointRec) -> ChartStep:
    """Evaluate m at P together with its Jacobian in affine charts.

    For projective points the input chart is the one where the normalized
    coordinate c equals 1, and the output chart is the one of the image's
    normalized coordinate c'; with s = 1/F_c' and Y = s F,
    d(F_i/F_c')/dx_j = s (dF_i/dx_j - Y_i dF_c'/dx_j).
    """
    ring = P.ring
    vals, partials = _compiled(m, ring).values_and_partials(P.coords)
    if m.space == "affine":
        return ChartStep(PointRec("affine", tuple(vals)), tuple(tuple(r) for r in partials))
    c_in = P.chart_index
    c_out = _first_unit(vals)
    if c_out is None:
        raise _no_image(ring)
    s = vals[c_out].inverse()
    image = [v * s for v in vals]
    image[c_out] = ring.one()
    cols = [j for j in range(m.nvars) if j != c_in]
    rows = []
    for i in range(m.nvars):
        if i == c_out:
            continue
        rows.append(
            tuple(s * (partials[i][j] - image[i] * partials[c_out][j]) for j in cols)
        )
    return ChartStep(PointRec("projective", tuple(image)), tuple(rows))


def jacobian(m: MapSpec, P: PointRec) -> Matrix:
    """Derivative matrix of m at P (affine chart for projective points)."""
    return chart_step(m, P).jacobian


def orbit_jacobian(m: MapSpec, P: PointRec, n: int) -> ChartStep:
    """f^n(P) with the Jacobian of f^n by the chain rule along the orbit."""
    step = chart_step(m, P)
    point, jac = step.image, step.jacobian
    for _ in range(n - 1):
        step = chart_step(m, point)
        point, jac = step.image, mat_mul(step.jacobian, jac, P.ring)
    return ChartStep(point, jac)


@dataclass(frozen=True)
class OrbitJet:
    """Homogeneous value of f^k near a point with its first two derivatives.

    Derivatives are taken with respect to the chart coordinates of the
    starting point. Projective values are never rescaled, so no inverse is
    needed along the orbit; good reduction keeps them primitive.

    Attributes:
        values: Coordinates of f^k (the image itself for affine maps)
        first: first[u][a], derivative of coordinate u along chart variable a
        second: second[u][a][b], symmetric in a and b
    """

    values: Tuple[Any, ...]
    first: Matrix
    second: Tuple[Matrix, ...]


@dataclass(frozen=True)
class ChartJet:
    """f^k near P in affine charts.

    Attributes:
        image: Normalized image point
        jacobian: d x d derivative matrix into the chart of the image
        hessian: hessian[i][a][b], second derivatives of image coordinate i
    """

    image: PointRec
    jacobian: Matrix
    hessian: Tuple[Matrix, ...]


def _sum(terms: Iterable[Any], zero: Any) -> Any:
    acc = None
    for t in terms:
        acc = t if acc is None else acc + t
    return zero if acc is None else acc


def jet_start(P: PointRec) -> OrbitJet:
    """The identity map at P, as the k = 0 jet."""
    ring = P.ring
    one, zero = ring.one(), ring.zero()
    c = P.chart_index
    cols = [u for u in range(len(P.coords)) if u != c]
    d = len(cols)
    first = tuple(tuple(one if u == col else zero for col in cols) for u in range(len(P.coords)))
    flat = tuple(tuple(zero for _ in range(d)) for _ in range(d))
    return OrbitJet(P.coords, first, tuple(flat for _ in P.coords))


def jet_step(m: MapSpec, jet: OrbitJet, ring: Any) -> OrbitJet:
    """Compose one more application of m by the first and second order chain rule."""
    vals, dF, d2F = _compiled(m, ring).second_order(jet.values)
    zero = ring.zero()
    nv = len(jet.values)
    d = len(jet.first[0]) if jet.first else 0
    J, H = jet.first, jet.second
    first = []
    second = []
    for i in range(len(vals)):
        row = dF[i]
        live = [u for u in range(nv) if row[u] is not None]
        first.append(
            tuple(
                _sum((row[u] * J[u][a] for u in live if not J[u][a].is_zero()), zero)
                for a in range(d)
            )
        )
        block = [[zero] * d for _ in range(d)]
        for a in range(d):
            for b in range(a, d):
                terms = [row[u] * H[u][a][b] for u in live if not H[u][a][b].is_zero()]
                for u in range(nv):
                    if J[u][a].is_zero():
                        continue
                    for v in range(nv):
                        h = d2F[i][u][v]
                        if h is not None and not J[v][b].is_zero():
                            terms.append(h * J[u][a] * J[v][b])
                block[a][b] = block[b][a] = _sum(terms, zero)
        second.append(tuple(tuple(r) for r in block))
    return OrbitJet(tuple(vals), tuple(first), tuple(second))


def jet_chart(m: MapSpec, jet: OrbitJet, ring: Any) -> ChartJet:
    """Normalize a jet into the affine chart of its image.

    With w the first unit coordinate, Y = u / w gives
    dY = (du - Y dw) / w and
    d2Y = (d2u - Y d2w - dY_a dw_b - dY_b dw_a) / w.

    Raises:
        PrecisionExhausted: If no coordinate of the value is a unit
    """
    if m.space == "affine":
        return ChartJet(PointRec("affine", jet.values), jet.first, jet.second)
    vals = jet.values
    c = _first_unit(vals)
    if c is None:
        raise _no_image(ring)
    s = vals[c].inverse()
    image = [v * s for v in vals]
    image[c] = ring.one()
    dw, d2w = jet.first[c], jet.second[c]
    d = len(dw)
    rows = []
    hessian = []
    for i in range(len(vals)):
        if i == c:
            continue
        dY = tuple(s * (jet.first[i][a] - image[i] * dw[a]) for a in range(d))
        block = [[ring.zero()] * d for _ in range(d)]
        for a in range(d):
            for b in range(a, d):
                value = s * (
                    jet.second[i][a][b] - image[i] * d2w[a][b] - dY[a] * dw[b] - dY[b] * dw[a]
                )
                block[a][b] = block[b][a] = value
        rows.append(dY)
        hessian.append(tuple(tuple(r) for r in block))
    return ChartJet(PointRec("projective", tuple(image)), tuple(rows), tuple(hessian))


def orbit_jet(m: MapSpec, P: PointRec, n: int) -> ChartJet:
    """f^n near P with its chart Jacobian and Hessian."""
    jet = jet_start(P)
    for _ in range(n):
        jet = jet_step(m, jet, P.ring)
    return jet_chart(m, jet, P.ring)


def reduce_through_ring(m: MapSpec, ring: Any) -> MapSpec:
    """Special fiber of m after base change to ring.

    Each coefficient is placed in O/pi^N and sent to the residue field of
    that ring, so pi-expansion coefficients are read in the ring's own
    uniformizer.
    """
    polys = []
    for poly in m.polys:
        terms = [(exps, ring.from_pi_digits(c).reduce().coeffs[0]) for exps, c in poly.terms]
        polys.append(Polynomial.from_terms(poly.nvars, terms))
    return MapSpec(m.space, m.dim, tuple(polys))


def map_validate(m: MapSpec, ring: Any, cap: int = ENUMERATION_CAP) -> MapSpec:
    """Check dimensions, homogeneity and the base locus over the residue field.

    Args:
        m: Map to check
        ring: RingSpec or FieldSpec the map will be used over
        cap: Enumeration cap for the base-locus scan

    Returns:
        The same map, now known to be a self-map of the ambient space

    Raises:
        DimensionMismatch: Wrong number of polynomials or variables
        InhomogeneousMap: Projective forms not homogeneous of one degree
        BaseLocusNonempty: Forms share a zero over the residue field
    """
    if m.space not in SPACES:
        raise BadInput(f"unknown space {m.space!r}")
    expected = m.dim + 1 if m.space == "projective" else m.dim
    if len(m.polys) != expected:
        raise DimensionMismatch(
            f"{m.space} map of dimension {m.dim} needs {expected} polynomials, got {len(m.polys)}"
        )
    if any(poly.nvars != m.nvars for poly in m.polys):
        raise DimensionMismatch(f"every polynomial must have {m.nvars} variables")
    if m.space == "affine":
        return m
    degrees = {sum(exps) for poly in m.polys for exps, _ in poly.terms}
    if len(degrees) > 1:
        raise InhomogeneousMap(f"projective forms mix degrees {sorted(degrees)}")
    field = ring.residue_field
    reduced = m.reduce(field.p)
    cm = _compiled(reduced, field)
    for point in enumerate_points("projective", m.dim, field, cap):
        if not any(v.is_unit() for v in cm.values(point.coords)):
            raise BaseLocusNonempty(
                f"forms vanish simultaneously at {point!r} over F_{field.q}",
                {"point": point.to_json()},
            )
    return m


def point_count(space: str, d: int, q: int) -> int:
    if space == "affine":
        return q**d
    return (q ** (d + 1) - 1) // (q - 1)


def enumerate_points(space: str, d: int, field: FieldSpec, cap: int = ENUMERATION_CAP) -> List[PointRec]:
    """All k-points of A^d or P^d in a fixed order.

    Raises:
        FieldTooLarge: If the point count exceeds cap
    """
    count = point_count(space, d, field.q)
    if count > cap:
        raise FieldTooLarge(f"{space} space of dimension {d} over F_{field.q} has {count} points")
    elems = ff_enumerate(field, cap)
    if space == "affine":
        return [PointRec("affine", tuple(c)) for c in product(elems, repeat=d)]
    zero, one = field.zero(), field.one()
    points = []
    for c in range(d + 1):
        for tail in product(elems, repeat=d - c):
            points.append(PointRec("projective", (zero,) * c + (one,) + tuple(tail)))
    return points


def _functional_graph(
    m: MapSpec, field: FieldSpec, cap: int
) -> Tuple[List[PointRec], List[int], List[List[int]]]:
    reduced = m.reduce(field.p)
    points = enumerate_points(m.space, m.dim, field, cap)
    index = {pt: i for i, pt in enumerate(points)}
    succ = [index[evaluate(reduced, pt)] for pt in points]
    state = [0] * len(points)
    cycles: List[List[int]] = []
    for start in range(len(points)):
        if state[start]:
            continue
        path: Dict[int, int] = {}
        x = start
        while state[x] == 0:
            state[x] = 1
            path[x] = len(path)
            x = succ[x]
        if state[x] == 1:
            members = list(path)[path[x] :]
            first = min(members)
            rot = members.index(first)
            cycles.append(members[rot:] + members[:rot])
        for y in path:
            state[y] = 2
    cycles.sort(key=lambda cyc: cyc[0])
    return points, succ, cycles


def fiber_structure(
    m: MapSpec, field: FieldSpec, cap: int = ENUMERATION_CAP
) -> Tuple[FiberCensus, List[Tuple[PointRec, ...]]]:
    """Census and the residue cycles themselves from one functional-graph pass.

    Raises:
        FieldTooLarge: If #X_s(k) exceeds cap
    """
    map_validate(m, field, cap)
    points, _, cycles = _functional_graph(m, field, cap)
    lengths = tuple(sorted(len(c) for c in cycles))
    census = FiberCensus(
        space=m.space,
        q=field.q,
        N_pts=len(points),
        d=m.dim,
        cycles=lengths,
        per_set=tuple(sorted(set(lengths))),
        tails=len(points) - sum(lengths),
    )
    logger.debug("census: %s", census.get_summary())
    return census, [tuple(points[i] for i in cyc) for cyc in cycles]


def special_fiber_census(m: MapSpec, field: FieldSpec, cap: int = ENUMERATION_CAP) -> FiberCensus:
    """Cycle structure of the reduced map on X_s(k).

    Raises:
        FieldTooLarge: If #X_s(k) exceeds cap
    """
    return fiber_structure(m, field, cap)[0]


def residue_cycles(m: MapSpec, field: FieldSpec, cap: int = ENUMERATION_CAP) -> List[Tuple[PointRec, ...]]:
    """Every cycle of the reduced map, each starting at its smallest enumerated point."""
    return fiber_structure(m, field, cap)[1]


def prime_to_p_periods(per_set: Iterable[int], p: int) -> Tuple[int, ...]:
    return tuple(sorted(n for n in per_set if n % p))


def reduce_point(P: PointRec) -> PointRec:
    if isinstance(P.ring, FieldSpec):
        return P
    return make_point(P.space, [x.reduce() for x in P.coords])


def reduce_map_and_point(m: MapSpec, P: PointRec) -> Tuple[MapSpec, PointRec]:
    """Coefficientwise reduction of the map and reduction of the point."""
    field = P.ring.residue_field
    return m.reduce(field.p), reduce_point(P)


def orbit(
    m: MapSpec, P: PointRec, max_iter: Optional[int] = None, method: str = "visited"
) -> OrbitRecord:
    """Tail and cycle length of the orbit of P.

    Args:
        m: Validated map
        P: Starting point
        max_iter: Iteration budget; defaults to 10 * #X(k) over a residue field
            and to 10^6 otherwise
        method: "visited" (hash-set membership) or "brent" (constant memory)

    Raises:
        IterationBudgetExceeded: If the orbit does not close within max_iter
    """
    if max_iter is None:
        ring = P.ring
        if isinstance(ring, FieldSpec):
            dim = len(P.coords) - (1 if P.space == "projective" else 0)
            max_iter = 10 * point_count(P.space, dim, ring.q)
        else:
            max_iter = DEFAULT_MAX_ITER
    if method == "visited":
        return _orbit_visited(m, P, max_iter)
    if method == "brent":
        return _orbit_brent(m, P, max_iter)
    raise BadInput(f"unknown orbit method {method!r}; expected one of {ORBIT_METHODS}")


def _orbit_visited(m: MapSpec, P: PointRec, max_iter: int) -> OrbitRecord:
    seen = {P: 0}
    x = P
    for i in range(1, max_iter + 1):
        x = evaluate(m, x)
        if x in seen:
            return OrbitRecord(seen[x], i - seen[x], "visited")
        seen[x] = i
    raise IterationBudgetExceeded(f"orbit of {P!r} did not close within {max_iter} steps")


def _orbit_brent(m: MapSpec, P: PointRec, max_iter: int) -> OrbitRecord:
    power = lam = 1
    tortoise = P
    hare = evaluate(m, P)
    steps = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = evaluate(m, hare)
        lam += 1
        steps += 1
        if steps > max_iter:
            raise IterationBudgetExceeded(
                f"orbit of {P!r} did not close within {max_iter} steps"
            )
    tortoise = hare = P
    for _ in range(lam):
        hare = evaluate(m, hare)
    mu = 0
    while tortoise != hare:
        tortoise = evaluate(m, tortoise)
        hare = evaluate(m, hare)
        mu += 1
    return OrbitRecord(mu, lam, "brent")
