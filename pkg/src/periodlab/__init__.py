"""PeriodLab - periodic points of p-adic dynamical systems.

Residue fields, truncated discrete valuation rings, polynomial dynamics over
them, period bounds and certificates, the power-map contrast and the torsion
sieve, with deterministic JSON/CSV/Markdown reports.
"""

__version__ = "1.0.0"

from .config import APP_NAME
from .domain.exceptions import PeriodLabError
from .domain.settings import LabSettings
from .services import (
    certify_period,
    compute_bounds,
    emit_report,
    find_periodic_points,
    hensel_lift_cycle,
    sieve,
    special_fiber_census,
    unboundedness_report,
    verify_theorem,
)

__all__ = [
    "__version__",
    "APP_NAME",
    "PeriodLabError",
    "LabSettings",
    "certify_period",
    "compute_bounds",
    "emit_report",
    "find_periodic_points",
    "hensel_lift_cycle",
    "sieve",
    "special_fiber_census",
    "unboundedness_report",
    "verify_theorem",
]
