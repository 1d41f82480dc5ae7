"""Power map domain models.

OrderTable lists ord(q mod p^k) level by level; ContrastReport sets the
bounded Teichmueller periods of the same power map next to it.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class OrderTable:
    """Orders of q modulo p^k for k = 1..k_max.

    Attributes:
        q: Exponent of the power map
        p: Odd prime
        rows: (k, ord(q mod p^k)) pairs
        p_valuations: v_p of each order, same order as rows
        k0: v_p(q^ord_1 - 1), the level from which the orders gain a factor p per level
        ratio_law_ok: Every ratio ord_{k+1}/ord_k lies in {1, p}
        growth_ok: Ratios are 1 below k0 and exactly p from k0 on
    """

    q: int
    p: int
    rows: Tuple[Tuple[int, int], ...]
    p_valuations: Tuple[int, ...]
    k0: int
    ratio_law_ok: bool
    growth_ok: bool

    @property
    def ok(self) -> bool:
        return self.ratio_law_ok and self.growth_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "p": self.p,
            "k0": self.k0,
            "rows": [
                {"k": k, "order": str(order), "p_valuation": v}
                for (k, order), v in zip(self.rows, self.p_valuations)
            ],
            "ratio_law_ok": self.ratio_law_ok,
            "growth_ok": self.growth_ok,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["k", "order", "p_valuation"]
        rows = [[k, str(order), v] for (k, order), v in zip(self.rows, self.p_valuations)]
        return headers, rows


@dataclass(frozen=True)
class ContrastReport:
    """Bounded prime-to-p periods against the unbounded p-power column.

    Attributes:
        q: Exponent of the power map
        p: Residue characteristic
        f: Residue degree of the unramified base
        B_coprime: Period bound for P^1 over F_{p^f}
        teichmuller: (n, period) for each root order n | p^f - 1 coprime to q
        table: p-power order table
        exceeds_at: First level whose order passes B_coprime, if any
    """

    q: int
    p: int
    f: int
    B_coprime: int
    teichmuller: Tuple[Tuple[int, int], ...]
    table: OrderTable
    exceeds_at: Optional[int]

    @property
    def bounded_ok(self) -> bool:
        return all(period <= self.B_coprime for _, period in self.teichmuller)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "p": self.p,
            "f": self.f,
            "B_coprime": str(self.B_coprime),
            "teichmuller": [{"n": n, "period": period} for n, period in self.teichmuller],
            "bounded_ok": self.bounded_ok,
            "table": self.table.to_dict(),
            "exceeds_at": self.exceeds_at,
        }

    def to_table(self) -> Tuple[List[str], List[List[Any]]]:
        headers = ["kind", "level", "period", "B_coprime"]
        rows: List[List[Any]] = [
            ["teichmuller", n, period, str(self.B_coprime)] for n, period in self.teichmuller
        ]
        rows.extend(
            ["p_power", k, str(order), str(self.B_coprime)] for k, order in self.table.rows
        )
        return headers, rows
