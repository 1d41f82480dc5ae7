"""Lab services for PeriodLab."""

from .dynamics_core import (
    MapSpec,
    PointRec,
    evaluate,
    make_point,
    map_validate,
    orbit,
    residue_cycles,
    special_fiber_census,
)

from .period_lab import (
    certify_period,
    compute_bounds,
    find_periodic_points,
    hensel_lift_cycle,
    lift_all_cycles,
    verify_theorem,
)

from .power_map_lab import (
    cyclotomic_period,
    prime_to_p_contrast,
    rou_period,
    unboundedness_report,
)

from .torsion_sieve import (
    component_stability,
    density_estimate,
    density_ladder,
    elliptic_point_count,
    good_reduction_torsion_primes,
    sieve,
)

from .report_emitter import emit_report

__all__ = [
    # Dynamics
    "MapSpec",
    "PointRec",
    "evaluate",
    "make_point",
    "map_validate",
    "orbit",
    "residue_cycles",
    "special_fiber_census",
    # Periods
    "certify_period",
    "compute_bounds",
    "find_periodic_points",
    "hensel_lift_cycle",
    "lift_all_cycles",
    "verify_theorem",
    # Power map
    "cyclotomic_period",
    "prime_to_p_contrast",
    "rou_period",
    "unboundedness_report",
    # Torsion
    "component_stability",
    "density_estimate",
    "density_ladder",
    "elliptic_point_count",
    "good_reduction_torsion_primes",
    "sieve",
    # Reports
    "emit_report",
]
