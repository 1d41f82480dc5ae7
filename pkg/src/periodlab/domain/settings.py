"""Lab settings domain model.

This module defines the LabSettings dataclass holding the brute-force caps
and the parallelism limit, with environment overrides.
"""

import os
from dataclasses import dataclass
from typing import Mapping, Optional

from periodlab.config import (
    BRANCH_BUDGET,
    BRANCH_BUDGET_ENV,
    DEFAULT_THREADS,
    ENUMERATION_CAP,
    ENUMERATION_CAP_ENV,
    THREADS_ENV,
)


@dataclass(frozen=True)
class LabSettings:
    """Runtime settings shared by the services.

    Attributes:
        threads: Upper bound on parallel workers: threads for the searches
            of one ring, processes for the base changes of a verification
        enumeration_cap: Largest field or point space enumerated by brute force
        branch_budget: Node budget for pi-adic digit branching
    """

    threads: int = DEFAULT_THREADS
    enumeration_cap: int = ENUMERATION_CAP
    branch_budget: int = BRANCH_BUDGET

    def validate(self) -> None:
        """Validate settings values.

        Raises:
            ValueError: If any value is not a positive integer
        """
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.enumeration_cap < 1:
            raise ValueError(
                f"enumeration_cap must be >= 1, got {self.enumeration_cap}"
            )
        if self.branch_budget < 1:
            raise ValueError(f"branch_budget must be >= 1, got {self.branch_budget}")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "LabSettings":
        """Build settings from environment variables.

        Args:
            environ: Mapping to read from (defaults to os.environ)

        Returns:
            Validated settings

        Raises:
            ValueError: If a variable is set but not a positive integer
        """
        env = os.environ if environ is None else environ

        def _read(name: str, default: int) -> int:
            raw = env.get(name)
            if raw is None or raw.strip() == "":
                return default
            try:
                return int(raw)
            except ValueError as e:
                raise ValueError(f"{name} must be an integer, got {raw!r}") from e

        settings = cls(
            threads=_read(THREADS_ENV, DEFAULT_THREADS),
            enumeration_cap=_read(ENUMERATION_CAP_ENV, ENUMERATION_CAP),
            branch_budget=_read(BRANCH_BUDGET_ENV, BRANCH_BUDGET),
        )
        settings.validate()
        return settings
