"""Special-fiber census and orbit domain models.

FiberCensus carries every special-fiber ingredient of the period bound:
the residue field size q, the point count N_pts, the ambient dimension d and
the cycle structure of the reduced map.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple


@dataclass(frozen=True)
class FiberCensus:
    """Functional-graph decomposition of the reduced map on X_s(k).

    Attributes:
        space: "affine" or "projective"
        q: Residue field size
        N_pts: Number of k-points of the special fiber
        d: Ambient dimension
        cycles: Sorted multiset of cycle lengths
        per_set: Sorted set of achieved periods
        tails: Number of strictly preperiodic points
    """

    space: str
    q: int
    N_pts: int
    d: int
    cycles: Tuple[int, ...]
    per_set: Tuple[int, ...]
    tails: int

    def __post_init__(self) -> None:
        if sum(self.cycles) + self.tails != self.N_pts:
            raise ValueError("cycle lengths and tails must add up to N_pts")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "q": self.q,
            "N_pts": self.N_pts,
            "d": self.d,
            "cycles": list(self.cycles),
            "per_set": list(self.per_set),
            "tails": self.tails,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["q", "N_pts", "d", "cycles", "Per"]
        rows = [
            [
                self.q,
                self.N_pts,
                self.d,
                " ".join(str(c) for c in self.cycles),
                " ".join(str(n) for n in self.per_set),
            ]
        ]
        return headers, rows

    def get_summary(self) -> str:
        return (
            f"{self.space} fiber over F_{self.q}: {self.N_pts} points, "
            f"{len(self.cycles)} cycles, Per = {list(self.per_set)}"
        )


@dataclass(frozen=True)
class OrbitRecord:
    """Tail and cycle length of a single orbit.

    Attributes:
        tail: Steps before entering the cycle
        cycle: Cycle length
        method: Detection method ("visited" or "brent")
    """

    tail: int
    cycle: int
    method: str = "visited"

    @property
    def is_periodic(self) -> bool:
        return self.tail == 0

    def to_dict(self) -> Dict[str, Any]:
        return {"tail": self.tail, "cycle": self.cycle, "method": self.method}
