"""Custom exception classes for PeriodLab.

Every domain error carries a module-qualified ``code`` (for example
``residue_field.NotPrime``) so the CLI can report it as a structured message.
"""

from typing import Any, Dict, Optional


class PeriodLabError(Exception):
    """Base exception for PeriodLab domain errors.

    Attributes:
        code: Module-qualified error code
        details: Optional structured payload for reports
    """

    code = "periodlab.Error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        """Initialize PeriodLabError.

        Args:
            message: Human-readable error message
            details: Optional structured payload
        """
        self.details = details or {}
        super().__init__(message)

    def __reduce__(self) -> Any:
        # keeps subclass attributes across process boundaries
        return _restore, (type(self), str(self)), self.__dict__

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for the CLI error channel."""
        payload: Dict[str, Any] = {"error": self.code, "message": str(self)}
        if self.details:
            payload["details"] = self.details
        return payload


class BadInput(PeriodLabError, ValueError):
    """Arguments violate a documented precondition."""

    code = "periodlab.BadInput"


# residue_field


class NotPrime(PeriodLabError, ValueError):
    """Characteristic is not prime."""

    code = "residue_field.NotPrime"


class FieldTooLarge(PeriodLabError):
    """Field or point space exceeds the enumeration cap."""

    code = "residue_field.FieldTooLarge"


class DivisionByZero(PeriodLabError, ZeroDivisionError):
    """Inverse of the zero element was requested."""

    code = "residue_field.DivisionByZero"


class ZeroElement(PeriodLabError, ZeroDivisionError):
    """Multiplicative order of zero was requested."""

    code = "residue_field.ZeroElement"


# dvr_tower


class NotEisenstein(PeriodLabError, ValueError):
    """Polynomial fails the Eisenstein criterion."""

    code = "dvr_tower.NotEisenstein"


class BadPrecision(PeriodLabError, ValueError):
    """Precision is not a positive integer."""

    code = "dvr_tower.BadPrecision"


class NonUnitInverse(PeriodLabError, ZeroDivisionError):
    """Inverse of an element of positive valuation was requested."""

    code = "dvr_tower.NonUnitInverse"


# dynamics_core


class InhomogeneousMap(PeriodLabError, ValueError):
    """Projective map polynomials are not homogeneous of one degree."""

    code = "dynamics_core.InhomogeneousMap"


class BaseLocusNonempty(PeriodLabError, ValueError):
    """Projective map polynomials share a zero over the residue field."""

    code = "dynamics_core.BaseLocusNonempty"


class DimensionMismatch(PeriodLabError, ValueError):
    """Polynomial count or exponent length does not match the ambient space."""

    code = "dynamics_core.DimensionMismatch"


class PrecisionExhausted(PeriodLabError):
    """Result is indistinguishable from zero at the working precision."""

    code = "dynamics_core.PrecisionExhausted"


class IterationBudgetExceeded(PeriodLabError):
    """Orbit did not close within the iteration budget."""

    code = "dynamics_core.IterationBudgetExceeded"


# period_lab


class DegenerateCycle(PeriodLabError):
    """Jacobian criterion fails: det(J - I) is not a unit.

    Attributes:
        cycle_length: Length of the residue cycle that failed to lift
    """

    code = "period_lab.Degenerate"

    def __init__(self, message: str, cycle_length: int) -> None:
        self.cycle_length = cycle_length
        super().__init__(message, {"cycle_length": cycle_length})


class BranchBudgetExceeded(PeriodLabError):
    """Digit branching visited more nodes than the budget allows."""

    code = "period_lab.BranchBudgetExceeded"


class NotPeriodicAtPrecision(PeriodLabError):
    """Point does not return to itself at the ring precision."""

    code = "period_lab.NotPeriodicAtPrecision"


# power_map_lab


class NotCoprime(PeriodLabError, ValueError):
    """Base and modulus share a factor."""

    code = "power_map_lab.NotCoprime"


# torsion_sieve


class FactorizationTimeout(PeriodLabError):
    """Exponent is beyond the factorization budget."""

    code = "torsion_sieve.FactorizationTimeout"


class CapExceeded(PeriodLabError):
    """Requested range is beyond a configured cap."""

    code = "torsion_sieve.CapExceeded"


class SingularCurve(PeriodLabError, ValueError):
    """Weierstrass discriminant vanishes in the residue field."""

    code = "torsion_sieve.SingularCurve"


class BadTower(PeriodLabError, ValueError):
    """Ramification sequence is not a divisibility chain."""

    code = "torsion_sieve.BadTower"


# cli


class SchemaError(PeriodLabError, ValueError):
    """Config, map or ring JSON does not validate."""

    code = "cli.SchemaError"


class UnsupportedFormat(PeriodLabError, ValueError):
    """Requested report format is unknown."""

    code = "cli.UnsupportedFormat"


def _restore(cls: type, message: str) -> PeriodLabError:
    err = cls.__new__(cls)
    Exception.__init__(err, message)
    return err
