"""Period laboratory domain models.

This module defines the bound, certificate, lift and verification records
returned by the period lab. Integers that can outgrow 64 bits are written
as decimal strings in ``to_dict``.
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Tuple

from periodlab.domain.census import FiberCensus

if TYPE_CHECKING:
    from periodlab.services.dynamics_core import PointRec


@dataclass(frozen=True)
class BoundReport:
    """Explicit period bounds from the special fiber.

    Attributes:
        N_pts: #X_s(k)
        q: Residue field size
        d: Ambient dimension
        e: Ramification index (v(p))
        p: Residue characteristic
        B_coprime: N_pts * (q^d - 1), the bound on prime-to-p periods
        B_all: B_coprime * p^e
    """

    N_pts: int
    q: int
    d: int
    e: int
    p: int
    B_coprime: int
    B_all: int

    @property
    def vacuous(self) -> bool:
        """d = 0 gives q^0 - 1 = 0, a bound that says nothing."""
        return self.d == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N_pts": self.N_pts,
            "q": self.q,
            "d": self.d,
            "e": self.e,
            "p": self.p,
            "coprime": str(self.B_coprime),
            "all": str(self.B_all),
            "vacuous": self.vacuous,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["N_pts", "q", "d", "e", "B_coprime", "B_all", "vacuous"]
        rows = [[self.N_pts, self.q, self.d, self.e, str(self.B_coprime), str(self.B_all), self.vacuous]]
        return headers, rows


@dataclass(frozen=True)
class PeriodCertificate:
    """Exact period of a point with its decomposition n = m * r * p^t.

    Attributes:
        point: The periodic point at precision N
        n: Exact period modulo pi^N
        m: Period of the reduced point
        r: Prime-to-p part of n / m
        t: Exponent of p in n / m
        precision: The precision N the period was measured at
        checks: m_divides_n, coprime_bound_ok, p_part_ok and all_bound_ok
    """

    point: "PointRec"
    n: int
    m: int
    r: int
    t: int
    precision: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def prime_to_p_part(self) -> int:
        return self.m * self.r

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point.to_json(),
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "t": self.t,
            "precision": self.precision,
            "checks": dict(sorted(self.checks.items())),
        }

    def row(self) -> List[Any]:
        return [repr(self.point), self.n, self.m, self.r, self.t, self.ok]

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        return list(CERTIFICATE_HEADERS), [self.row()]


CERTIFICATE_HEADERS = ["point", "n", "m", "r", "t", "ok"]


@dataclass(frozen=True)
class PeriodicDisc:
    """Disc on which f^n - id and its first two derivatives vanish at the centre.

    Every point of such a disc is reported through its centre only.

    Attributes:
        centre: Centre of the disc at precision N
        level: j, the disc is centre + pi^j O^d
        n: The iterate that fixes the disc
    """

    centre: "PointRec"
    level: int
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return {"centre": self.centre.to_json(), "level": self.level, "n": self.n}


@dataclass(frozen=True)
class CertificateList:
    """Certificates returned by the periodic point search, sorted by (n, point).

    Attributes:
        ring: Ring description
        bounds: Period bounds of the special fiber
        certificates: One certificate per periodic point found
        families: Discs reported through their centre, sorted like the certificates
    """

    ring: Dict[str, Any]
    bounds: BoundReport
    certificates: Tuple[PeriodCertificate, ...]
    families: Tuple[PeriodicDisc, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "ring": self.ring,
            "bounds": self.bounds.to_dict(),
            "certificates": [c.to_dict() for c in self.certificates],
        }
        if self.families:
            data["families"] = [disc.to_dict() for disc in self.families]
        return data

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        return list(CERTIFICATE_HEADERS), [c.row() for c in self.certificates]


@dataclass(frozen=True)
class LiftReport:
    """Residue cycles split into Hensel-lifted and degenerate ones.

    Attributes:
        ring: Ring description
        lifted: Lifted cycles, each a tuple of points at precision N
        degenerate: Residue cycles whose Jacobian criterion fails
    """

    ring: Dict[str, Any]
    lifted: Tuple[Tuple["PointRec", ...], ...]
    degenerate: Tuple[Tuple["PointRec", ...], ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ring": self.ring,
            "lifted": [[pt.to_json() for pt in cyc] for cyc in self.lifted],
            "degenerate": [[pt.to_json() for pt in cyc] for cyc in self.degenerate],
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["status", "length", "cycle"]
        rows: List[List[Any]] = []
        for cyc in self.lifted:
            rows.append(["lifted", len(cyc), " -> ".join(repr(pt) for pt in cyc)])
        for cyc in self.degenerate:
            rows.append(["degenerate", len(cyc), " -> ".join(repr(pt) for pt in cyc)])
        return headers, rows


@dataclass(frozen=True)
class VerificationRun:
    """One base change of a verification sweep."""

    e: int
    eisenstein: str
    polynomial: Tuple[int, ...]
    precision: int
    census: FiberCensus
    bounds: BoundReport
    certificates: Tuple[PeriodCertificate, ...]

    @property
    def max_prime_to_p(self) -> int:
        return max((c.prime_to_p_part for c in self.certificates), default=0)

    @property
    def max_p_part(self) -> int:
        return max((c.t for c in self.certificates), default=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "e": self.e,
            "eisenstein": self.eisenstein,
            "polynomial": [str(c) for c in self.polynomial],
            "precision": self.precision,
            "bounds": self.bounds.to_dict(),
            "certificates": [c.to_dict() for c in self.certificates],
            "max_prime_to_p": self.max_prime_to_p,
            "max_p_part": self.max_p_part,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a base-change sweep.

    Attributes:
        census: Special-fiber census of the first run
        runs: One entry per (e, Eisenstein polynomial)
        invariance_ok: True if every run produced the same census
        counterexamples: Structured descriptions of failed assertions
    """

    census: FiberCensus
    runs: Tuple[VerificationRun, ...]
    invariance_ok: bool
    counterexamples: Tuple[Dict[str, Any], ...] = ()

    @property
    def ok(self) -> bool:
        return self.invariance_ok and not self.counterexamples

    @property
    def max_p_part(self) -> int:
        return max((run.max_p_part for run in self.runs), default=0)

    @property
    def certificates(self) -> List[Dict[str, Any]]:
        out = []
        for run in self.runs:
            for cert in run.certificates:
                entry = cert.to_dict()
                entry["e"] = run.e
                entry["eisenstein"] = run.eisenstein
                out.append(entry)
        return out

    def to_dict(self) -> Dict[str, Any]:
        first = self.runs[0].bounds
        return {
            "census": self.census.to_dict(),
            "bounds": {"coprime": str(first.B_coprime), "all": str(max(r.bounds.B_all for r in self.runs))},
            "certificates": self.certificates,
            "runs": [run.to_dict() for run in self.runs],
            "max_p_part": self.max_p_part,
            "invariance_ok": self.invariance_ok,
            "counterexamples": list(self.counterexamples),
            "ok": self.ok,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = [
            "e", "eisenstein", "precision", "N_pts", "B_coprime", "B_all",
            "certificates", "max_prime_to_p", "max_p_part",
        ]
        rows = [
            [
                run.e,
                run.eisenstein,
                run.precision,
                run.census.N_pts,
                str(run.bounds.B_coprime),
                str(run.bounds.B_all),
                len(run.certificates),
                run.max_prime_to_p,
                run.max_p_part,
            ]
            for run in self.runs
        ]
        return headers, rows

    def get_summary(self) -> str:
        status = "✅ verified" if self.ok else f"❌ {len(self.counterexamples)} counterexample(s)"
        return f"{status}: {len(self.runs)} base changes, max p-part exponent {self.max_p_part}"
