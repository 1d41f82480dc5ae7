"""Period laboratory service.

Explicit period bounds from the special fiber, Hensel lifting of residue
cycles, the pi-adic branching search for periodic points, period
certificates n = m * r * p^t, and base-change verification sweeps.

A point y counts as periodic of level n at precision N when
f^n(y) = y modulo pi^(2N); the search reports such points modulo pi^N, so
every reported point is stable under doubling the precision.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from periodlab.algebra.dvr_tower import RingSpec, dvr_make, eisenstein_variants
from periodlab.algebra.matrices import (
    Matrix,
    adjugate,
    determinant,
    identity,
    mat_sub,
    mat_vec,
    min_valuation,
)
from periodlab.algebra.number_theory import prime_to_p_part
from periodlab.algebra.residue_field import ff_enumerate
from periodlab.config import (
    DEFAULT_PRECISION_FACTOR,
    LOG_EMOJI_PROGRESS,
    LOG_EMOJI_SUCCESS,
    LOG_EMOJI_WARNING,
    SEARCH_PRECISION_FACTOR,
)
from periodlab.domain.census import FiberCensus
from periodlab.domain.exceptions import (
    BadInput,
    BranchBudgetExceeded,
    DegenerateCycle,
    IterationBudgetExceeded,
    NotPeriodicAtPrecision,
    PrecisionExhausted,
)
from periodlab.domain.period_reports import (
    BoundReport,
    CertificateList,
    LiftReport,
    PeriodCertificate,
    PeriodicDisc,
    VerificationReport,
    VerificationRun,
)
from periodlab.domain.settings import LabSettings
from periodlab.services.dynamics_core import (
    ChartJet,
    MapSpec,
    OrbitJet,
    PointRec,
    evaluate,
    fiber_structure,
    jet_chart,
    jet_start,
    jet_step,
    map_validate,
    orbit,
    orbit_jacobian,
    reduce_point,
    reduce_through_ring,
    special_fiber_census,
)

logger = logging.getLogger(__name__)


def compute_bounds(census: FiberCensus, e: int, p: int) -> BoundReport:
    """B_coprime = N_pts (q^d - 1) and B_all = B_coprime p^e, exactly."""
    b_coprime = census.N_pts * (census.q**census.d - 1)
    bounds = BoundReport(
        N_pts=census.N_pts,
        q=census.q,
        d=census.d,
        e=e,
        p=p,
        B_coprime=b_coprime,
        B_all=b_coprime * p**e,
    )
    if bounds.vacuous:
        logger.warning("%s d = 0: the period bound is vacuous", LOG_EMOJI_WARNING)
    return bounds


def _lift(P: PointRec, ring: RingSpec) -> PointRec:
    """Naive lift of a residue point (same coefficient vectors, chart coordinate 1)."""
    return PointRec(P.space, tuple(ring.from_field(x) for x in P.coords))


def _residual(x: PointRec, image: PointRec) -> Optional[Tuple[Any, ...]]:
    """f^n(x) - x in the chart of x, or None when the image leaves that chart."""
    if image.chart_index != x.chart_index:
        return None
    return tuple(a - b for a, b in zip(image.chart_coords(), x.chart_coords()))


def _vector_valuation(v: Sequence[Any], cap: int) -> int:
    return min((x.valuation() for x in v), default=cap)


def _unit_newton_step(A: Matrix, G: Sequence[Any], ring: Any) -> Tuple[Any, ...]:
    """A^-1 G for det(A) a unit."""
    inv = determinant(A, ring).inverse()
    return tuple(x * inv for x in mat_vec(adjugate(A, ring), G, ring))


def hensel_lift_cycle(
    m: MapSpec, residue_cycle: Sequence[PointRec], ring: RingSpec
) -> List[PointRec]:
    """Lift a nondegenerate residue cycle to the unique cycle over O/pi^N.

    Args:
        m: Validated map over O
        residue_cycle: Consecutive points of a cycle of the reduced map
        ring: Target ring O/pi^N

    Returns:
        The lifted cycle, starting over the first residue point

    Raises:
        BadInput: If the points do not form a cycle of the reduced map
        DegenerateCycle: If det(J(f^L) - I) vanishes in k
        PrecisionExhausted: If Newton iteration fails to converge
    """
    length = len(residue_cycle)
    if length == 0:
        raise BadInput("residue cycle is empty")
    field = ring.residue_field
    reduced = m.reduce(field.p)
    if len(set(residue_cycle)) != length:
        raise BadInput("residue cycle repeats a point")
    for i, pt in enumerate(residue_cycle):
        if pt.ring != field:
            raise BadInput("residue cycle points must lie over the ring's residue field")
        if evaluate(reduced, pt) != residue_cycle[(i + 1) % length]:
            raise BadInput(f"point {i} of the residue cycle does not map to point {(i + 1) % length}")
    start = residue_cycle[0]
    residue_jac = orbit_jacobian(reduced, start, length).jacobian
    d = len(residue_jac)
    if determinant(mat_sub(residue_jac, identity(field, d)), field).is_zero():
        raise DegenerateCycle(
            f"det(J - I) vanishes at the residue cycle of length {length}", length
        )
    x = _lift(start, ring)
    converged = False
    for _ in range(ring.precision + 2):
        step = orbit_jacobian(m, x, length)
        G = _residual(x, step.image)
        if G is None:
            raise PrecisionExhausted("image left the chart of the residue point")
        if _vector_valuation(G, ring.precision) >= ring.precision:
            converged = True
            break
        A = mat_sub(step.jacobian, identity(ring, d))
        h = _unit_newton_step(A, G, ring)
        x = x.with_chart_coords(a - b for a, b in zip(x.chart_coords(), h))
    if not converged:
        raise PrecisionExhausted(f"Newton iteration did not reach precision {ring.precision}")
    cycle = [x]
    for _ in range(length - 1):
        cycle.append(evaluate(m, cycle[-1]))
    logger.debug("lifted cycle of length %d to %s", length, ring.describe())
    return cycle


def lift_all_cycles(m: MapSpec, ring: RingSpec, settings: Optional[LabSettings] = None) -> LiftReport:
    """Hensel-lift every nondegenerate residue cycle, listing the degenerate ones."""
    settings = settings or LabSettings()
    map_validate(m, ring, settings.enumeration_cap)
    _, cycles = fiber_structure(m, ring.residue_field, settings.enumeration_cap)
    lifted = []
    degenerate = []
    for cyc in cycles:
        try:
            lifted.append(tuple(hensel_lift_cycle(m, cyc, ring)))
        except DegenerateCycle:
            degenerate.append(cyc)
    logger.info(
        "%s lifted %d cycles, %d degenerate", LOG_EMOJI_SUCCESS, len(lifted), len(degenerate)
    )
    return LiftReport(ring.to_dict(), tuple(lifted), tuple(degenerate))


class _JetCache:
    """Latest jet of f^k at every node, so each n extends the orbit it already has."""

    def __init__(self, m: MapSpec, ring: RingSpec) -> None:
        self.m = m
        self.ring = ring
        self._latest: Dict[PointRec, Tuple[int, OrbitJet]] = {}
        self.steps = 0

    def chart(self, x: PointRec, n: int) -> ChartJet:
        k, jet = self._latest.get(x, (0, None))
        if jet is None or k > n:
            k, jet = 0, jet_start(x)
        while k < n:
            jet = jet_step(self.m, jet, self.ring)
            k += 1
            self.steps += 1
        self._latest[x] = (k, jet)
        return jet_chart(self.m, jet, self.ring)


class _PeriodicSearch:
    """Digit-by-digit search for the solutions of f^n(x) = x modulo pi^(2N).

    A node (x, j) stands for the disc x + pi^j O^d. Writing G for
    f^n - id in the chart of x, A = J - I for its Jacobian and Q for its
    quadratic Taylor term, every y in the disc has
    G(y) = G(x) + A(y - x) + Q(y - x) modulo pi^(3j). Nodes whose residual
    is too small to reach pi^(2N) anywhere in the disc are pruned, discs
    where det(A) has small valuation collapse onto their unique root, and
    the rest branch over the next pi-adic digit.

    One search serves a single residue cycle for every n, so orbit jets
    and roots found for a divisor of n are reused.
    """

    def __init__(self, m: MapSpec, ring: RingSpec, budget: int) -> None:
        self.m = m
        self.N = ring.precision
        self.target = ring
        self.work = ring.with_precision(SEARCH_PRECISION_FACTOR * ring.precision)
        self.W = self.work.precision
        self.budget = budget
        self.digits = ff_enumerate(ring.residue_field)
        self.two_valuation = ring.e if ring.p == 2 else 0
        self.jets = _JetCache(m, self.work)
        self.roots: List[Tuple[int, PointRec]] = []
        self.families: Dict[PointRec, PeriodicDisc] = {}
        self.nodes = 0

    def run(self, seed: PointRec, n: int) -> List[PointRec]:
        found: Dict[PointRec, PointRec] = {}
        stack = [(_lift(seed, self.work), 1)]
        nodes = 0
        while stack:
            x, j = stack.pop()
            if j >= self.N and x.at_precision(self.target) in found:
                continue
            nodes += 1
            if nodes > self.budget:
                raise BranchBudgetExceeded(
                    f"period {n}: more than {self.budget} branching nodes",
                    {"n": n, "budget": self.budget},
                )
            stack.extend(self._expand(x, j, n, found))
        self.nodes += nodes
        return list(found.values())

    def _accept(self, z: PointRec, found: Dict[PointRec, PointRec]) -> PointRec:
        key = z.at_precision(self.target)
        return found.setdefault(key, key)

    def _expand(
        self, x: PointRec, j: int, n: int, found: Dict[PointRec, PointRec]
    ) -> List[Tuple[PointRec, int]]:
        N, W, work = self.N, self.W, self.work
        jet = self.jets.chart(x, n)
        G = _residual(x, jet.image)
        if G is None:
            return []
        vG = _vector_valuation(G, W)
        d = len(G)
        A = mat_sub(jet.jacobian, identity(work, d))
        mu = min_valuation(A, W)
        hv = min((min_valuation(block, W) for block in jet.hessian), default=W)
        s2 = max(0, hv - self.two_valuation)
        if vG < min(j + mu, 2 * j + s2, 3 * j, 2 * N):
            return []
        if vG >= W and mu >= W and hv >= W:
            key = self._accept(x, found)
            self.families.setdefault(key, PeriodicDisc(key, j, n))
            logger.debug("f^%d is the identity to working precision on %r + pi^%d", n, key, j)
            return []
        if j >= 2 * N or (j >= N and vG >= 2 * N):
            self._accept(x, found)
            return []
        det = determinant(A, work)
        delta = det.valuation()
        if delta < N and j > delta and vG > 2 * delta and j <= 2 * N - delta:
            z = self._known_root(x, j, n)
            if z is None:
                z = self._collapse(x, n, G, A, det, delta)
                if z is not None:
                    self.roots.append((n, z))
            if z is not None and _distance(z, x, W) >= j:
                self._accept(z, found)
            return []
        return self._branch(x, j, G, A)

    def _known_root(self, x: PointRec, j: int, n: int) -> Optional[PointRec]:
        """A root found for a divisor of n that lies in the disc x + pi^j."""
        if j > self.N:
            return None
        for k, z in self.roots:
            if n % k == 0 and z.chart_index == x.chart_index and _distance(z, x, self.W) >= j:
                return z
        return None

    def _collapse(
        self, x: PointRec, n: int, G: Sequence[Any], A: Matrix, det: Any, delta: int
    ) -> Optional[PointRec]:
        """Newton iteration with a non-unit Jacobian, dividing by pi^delta exactly."""
        work, W = self.work, self.W
        for _ in range(W):
            if _vector_valuation(G, W) >= W - delta:
                return x
            unit_inv = det.shift(delta).inverse()
            h = tuple(v.shift(delta) * unit_inv for v in mat_vec(adjugate(A, work), G, work))
            x = x.with_chart_coords(a - b for a, b in zip(x.chart_coords(), h))
            step = orbit_jacobian(self.m, x, n)
            G = _residual(x, step.image)
            if G is None:
                return None
            A = mat_sub(step.jacobian, identity(work, len(G)))
            det = determinant(A, work)
            if det.valuation() != delta:
                return None
        return None

    def _branch(
        self, x: PointRec, j: int, G: Sequence[Any], A: Matrix
    ) -> List[Tuple[PointRec, int]]:
        work = self.work
        field = work.residue_field
        g_s = [v.shift(j).reduce() for v in G]
        A_s = [[a.reduce() for a in row] for row in A]
        d = len(G)
        pi_j = work.pi() ** j
        children = []
        for t in _vectors(self.digits, d):
            ok = all(
                (g_s[i] + _dot(A_s[i], t, field)).is_zero() for i in range(d)
            )
            if ok:
                coords = [a + pi_j * work.from_field(ti) for a, ti in zip(x.chart_coords(), t)]
                children.append((x.with_chart_coords(coords), j + 1))
        return children


def _distance(z: PointRec, x: PointRec, cap: int) -> int:
    """Valuation of z - x in the chart of x."""
    return _vector_valuation([a - b for a, b in zip(z.chart_coords(), x.chart_coords())], cap)


def _vectors(digits: Sequence[Any], d: int) -> List[Tuple[Any, ...]]:
    vectors: List[Tuple[Any, ...]] = [()]
    for _ in range(d):
        vectors = [v + (a,) for v in vectors for a in digits]
    return vectors


def _dot(row: Sequence[Any], t: Sequence[Any], field: Any) -> Any:
    acc = field.zero()
    for a, b in zip(row, t):
        acc = acc + a * b
    return acc


def _search_cycle(
    m: MapSpec, ring: RingSpec, cycle: Sequence[PointRec], n_max: int, budget: int
) -> Tuple[List[PointRec], List[PeriodicDisc]]:
    """Periodic points over one residue cycle with period at most n_max.

    Only the disc over the first residue point is searched; the points
    over the rest of the cycle are its images under f.
    """
    search = _PeriodicSearch(m, ring, budget)
    length = len(cycle)
    roots: Set[PointRec] = set()
    for n in range(length, n_max + 1, length):
        roots.update(search.run(cycle[0], n))
    points = set(roots)
    for z in roots:
        y = z
        for _ in range(length - 1):
            y = evaluate(m, y)
            points.add(y)
    logger.debug(
        "cycle of length %d: %d points, %d nodes, %d map steps",
        length,
        len(points),
        search.nodes,
        search.jets.steps,
    )
    return list(points), list(search.families.values())


def _certificate(
    m: MapSpec, P: PointRec, n: int, bounds: BoundReport, ring: RingSpec
) -> PeriodCertificate:
    reduced_map = m.reduce(ring.p)
    residue = orbit(reduced_map, reduce_point(P))
    period_m = residue.cycle
    divides = n % period_m == 0
    r, t = prime_to_p_part(n // period_m, ring.p) if divides else (0, 0)
    checks = {
        "m_divides_n": divides,
        "coprime_bound_ok": bounds.vacuous or period_m * r <= bounds.B_coprime,
        "p_part_ok": t <= ring.e,
        "all_bound_ok": bounds.vacuous or n <= bounds.B_all,
    }
    return PeriodCertificate(P, n, period_m, r, t, ring.precision, checks)


def find_periodic_points(
    m: MapSpec, n_max: int, ring: RingSpec, settings: Optional[LabSettings] = None
) -> CertificateList:
    """All periodic points of period at most n_max at precision N, certified.

    Each residue cycle of length at most n_max is searched on its own
    thread for every multiple n of its length; the results are merged,
    deduplicated by point and sorted by (n, point). A disc on which f^n - id
    vanishes with its first two derivatives is reported by its centre and
    listed under ``families``.

    Raises:
        BadInput: If n_max < 1
        BranchBudgetExceeded: If a search visits more than the node budget
    """
    if n_max < 1:
        raise BadInput(f"n_max must be >= 1, got {n_max}")
    settings = settings or LabSettings()
    map_validate(m, ring, settings.enumeration_cap)
    census, cycles = fiber_structure(m, ring.residue_field, settings.enumeration_cap)
    bounds = compute_bounds(census, ring.e, ring.p)
    tasks = [cyc for cyc in cycles if len(cyc) <= n_max]

    def _task(cycle: Sequence[PointRec]) -> Tuple[List[PointRec], List[PeriodicDisc]]:
        return _search_cycle(m, ring, cycle, n_max, settings.branch_budget)

    logger.info(
        "%s searching periods 1..%d over %s", LOG_EMOJI_PROGRESS, n_max, ring.describe()
    )
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        results = list(pool.map(_task, tasks))

    points: Set[PointRec] = set()
    families: Dict[PointRec, PeriodicDisc] = {}
    for found, discs in results:
        points.update(found)
        for disc in discs:
            families.setdefault(disc.centre, disc)
    certificates = []
    for P in points:
        record = orbit(m, P, max_iter=n_max)
        certificates.append(_certificate(m, P, record.cycle, bounds, ring))
    certificates.sort(key=lambda c: (c.n, c.point.sort_key()))
    ordered = sorted(families.values(), key=lambda disc: (disc.n, disc.centre.sort_key()))
    if ordered:
        logger.warning(
            "%s %d discs are fixed by an iterate and reported by their centre",
            LOG_EMOJI_WARNING,
            len(ordered),
        )
    logger.info("%s %d periodic points found", LOG_EMOJI_SUCCESS, len(certificates))
    return CertificateList(ring.to_dict(), bounds, tuple(certificates), tuple(ordered))


def certify_period(
    m: MapSpec, P: PointRec, settings: Optional[LabSettings] = None, max_iter: Optional[int] = None
) -> PeriodCertificate:
    """Exact period of P at the precision of its ring, decomposed as n = m r p^t.

    Raises:
        BadInput: If P does not lie over a ring O/pi^N
        NotPeriodicAtPrecision: If P is strictly preperiodic or its orbit
            does not close within the iteration budget
    """
    ring = P.ring
    if not isinstance(ring, RingSpec):
        raise BadInput("certify_period needs a point over O/pi^N")
    settings = settings or LabSettings()
    map_validate(m, ring, settings.enumeration_cap)
    try:
        record = orbit(m, P, max_iter=max_iter)
    except IterationBudgetExceeded as e:
        raise NotPeriodicAtPrecision(str(e)) from e
    if not record.is_periodic:
        raise NotPeriodicAtPrecision(
            f"{P!r} enters a cycle of length {record.cycle} after {record.tail} steps",
            record.to_dict(),
        )
    census, _ = fiber_structure(m, ring.residue_field, settings.enumeration_cap)
    bounds = compute_bounds(census, ring.e, ring.p)
    return _certificate(m, P, record.cycle, bounds, ring)


def _check_certificates(run: VerificationRun) -> List[Dict[str, Any]]:
    failures = []
    for cert in run.certificates:
        failed = sorted(name for name, ok in cert.checks.items() if not ok)
        if failed:
            failures.append(
                {
                    "kind": "certificate",
                    "e": run.e,
                    "eisenstein": run.eisenstein,
                    "point": cert.point.to_json(),
                    "n": cert.n,
                    "failed": failed,
                }
            )
    return failures


def _verification_run(
    m: MapSpec,
    p: int,
    f: int,
    e: int,
    eisenstein: str,
    precision: Optional[int],
    n_max: int,
    settings: LabSettings,
) -> VerificationRun:
    """One base change: the search over O/pi^N and the census of its own special fiber."""
    ring = dvr_make(
        p, f, e, eisenstein, precision or DEFAULT_PRECISION_FACTOR * e, settings.enumeration_cap
    )
    result = find_periodic_points(m, n_max, ring, settings)
    census = special_fiber_census(
        reduce_through_ring(m, ring), ring.residue_field, settings.enumeration_cap
    )
    logger.debug("e = %d, %s: %s", e, eisenstein, census.get_summary())
    return VerificationRun(
        e=e,
        eisenstein=eisenstein,
        polynomial=ring.eisenstein,
        precision=ring.precision,
        census=census,
        bounds=result.bounds,
        certificates=result.certificates,
    )


def _run_base_changes(jobs: List[Tuple[Any, ...]], workers: int) -> List[VerificationRun]:
    """Run independent base changes, in worker processes when more than one is allowed."""
    if workers <= 1 or len(jobs) <= 1:
        return [_verification_run(*job) for job in jobs]
    try:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            futures = [pool.submit(_verification_run, *job) for job in jobs]
            return [future.result() for future in futures]
    except (OSError, NotImplementedError, BrokenProcessPool) as e:
        logger.warning(
            "%s worker processes unavailable (%s), running in sequence", LOG_EMOJI_WARNING, e
        )
        return [_verification_run(*job) for job in jobs]


def verify_theorem(
    m: MapSpec,
    p: int,
    f: int,
    e_list: Sequence[int],
    n_max: int,
    precision: Optional[int] = None,
    settings: Optional[LabSettings] = None,
) -> VerificationReport:
    """Sweep base changes and check census invariance and the period bounds.

    Every e in e_list is run with two distinct Eisenstein polynomials at
    precision N (default 6e). The runs are independent and go to a process
    pool of up to ``settings.threads`` workers. Each run takes the census
    of the special fiber of its own base-changed map, and every census is
    compared with the first. Failed assertions become counterexample
    entries rather than exceptions.

    Raises:
        BadInput: If e_list is empty
    """
    if not e_list:
        raise BadInput("e_list must name at least one ramification index")
    settings = settings or LabSettings()
    inner = replace(settings, threads=1)
    jobs = [
        (m, p, f, e, name, precision, n_max, inner)
        for e in e_list
        for name, _ in eisenstein_variants(p, e)
    ]
    logger.info("%s verifying %d base changes", LOG_EMOJI_PROGRESS, len(jobs))
    runs = _run_base_changes(jobs, settings.threads)
    reference = runs[0].census
    counterexamples: List[Dict[str, Any]] = []
    invariance_ok = True
    for run in runs:
        if run.census != reference:
            invariance_ok = False
            counterexamples.append(
                {"kind": "census", "e": run.e, "eisenstein": run.eisenstein, "census": run.census.to_dict()}
            )
        counterexamples.extend(_check_certificates(run))
    report = VerificationReport(reference, tuple(runs), invariance_ok, tuple(counterexamples))
    if report.ok:
        logger.info("%s %s", LOG_EMOJI_SUCCESS, report.get_summary())
    else:
        logger.warning("%s %s", LOG_EMOJI_WARNING, report.get_summary())
    return report
