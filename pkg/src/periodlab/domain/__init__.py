"""Domain models for PeriodLab.

Report records (frozen dataclasses), the exception hierarchy, runtime
settings and the experiment config schemas.
"""

from .census import FiberCensus, OrbitRecord
from .exceptions import BadInput, PeriodLabError, SchemaError, UnsupportedFormat
from .experiment_config import ExperimentConfig, MapSpecModel, RingSpecModel
from .period_reports import (
    BoundReport,
    CertificateList,
    LiftReport,
    PeriodCertificate,
    PeriodicDisc,
    VerificationReport,
    VerificationRun,
)
from .power_reports import ContrastReport, OrderTable
from .settings import LabSettings
from .torsion_reports import (
    CurveReport,
    DensityEstimate,
    DensityLadder,
    SievePrime,
    SieveResult,
    StabilityReport,
    TorsionPrimes,
)

__all__ = [
    # Exceptions
    "PeriodLabError",
    "BadInput",
    "SchemaError",
    "UnsupportedFormat",
    # Models
    "FiberCensus",
    "OrbitRecord",
    "BoundReport",
    "PeriodCertificate",
    "CertificateList",
    "PeriodicDisc",
    "LiftReport",
    "VerificationRun",
    "VerificationReport",
    "OrderTable",
    "ContrastReport",
    "SievePrime",
    "SieveResult",
    "DensityEstimate",
    "DensityLadder",
    "CurveReport",
    "TorsionPrimes",
    "StabilityReport",
    # Configuration
    "LabSettings",
    "ExperimentConfig",
    "MapSpecModel",
    "RingSpecModel",
]
