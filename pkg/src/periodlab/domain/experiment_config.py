"""Experiment configuration schemas.

ExperimentConfig is the JSON schema of one CLI run; MapSpecModel and
RingSpecModel validate the map and ring documents it embeds or points to.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


COMMANDS = (
    "census",
    "bounds",
    "lift",
    "find-periodic",
    "certify",
    "verify",
    "power-map",
    "sieve",
    "density",
    "ec-torsion",
    "tower",
)

Command = Literal[
    "census",
    "bounds",
    "lift",
    "find-periodic",
    "certify",
    "verify",
    "power-map",
    "sieve",
    "density",
    "ec-torsion",
    "tower",
]
ReportFormat = Literal["json", "csv", "markdown", "xlsx"]


class MonomialModel(BaseModel):
    """One term: exponent vector and integer (or pi-expansion) coefficient."""

    model_config = ConfigDict(extra="forbid")

    exps: List[int]
    coeff: Union[int, str, List[int]]

    @field_validator("exps")
    @classmethod
    def _non_negative(cls, value: List[int]) -> List[int]:
        if any(x < 0 for x in value):
            raise ValueError("exponents must be non-negative")
        return value

    @field_validator("coeff")
    @classmethod
    def _integer_string(cls, value: Union[int, str, List[int]]) -> Union[int, str, List[int]]:
        if isinstance(value, str):
            try:
                int(value)
            except ValueError as e:
                raise ValueError(f"coefficient {value!r} is not a decimal integer") from e
        return value


class PolyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    monomials: List[MonomialModel]


class MapSpecModel(BaseModel):
    """Map document: {"space": ..., "dim": d, "polys": [{"monomials": [...]}, ...]}."""

    model_config = ConfigDict(extra="forbid")

    space: Literal["affine", "projective"]
    dim: int = Field(ge=1)
    polys: List[PolyModel]

    @model_validator(mode="after")
    def _shape(self) -> "MapSpecModel":
        nvars = self.dim + 1 if self.space == "projective" else self.dim
        if len(self.polys) != nvars:
            raise ValueError(f"{self.space} map of dimension {self.dim} needs {nvars} polynomials")
        for poly in self.polys:
            for mono in poly.monomials:
                if len(mono.exps) != nvars:
                    raise ValueError(f"every exponent vector needs {nvars} entries")
        return self


class RingSpecModel(BaseModel):
    """Ring document: O/pi^N from (p, f, e, Eisenstein polynomial, N)."""

    model_config = ConfigDict(extra="forbid")

    p: int = Field(ge=2)
    f: int = Field(default=1, ge=1)
    e: int = Field(default=1, ge=1)
    eisenstein: Union[Literal["default", "zeta_p", "variant"], List[int]] = "default"
    precision: Optional[int] = Field(default=None, ge=1)


class ExperimentConfig(BaseModel):
    """Everything one run needs; a config determines the report bytes.

    Attributes:
        command: Subcommand to dispatch
        ring: Ring for the dynamics commands
        map: Inline map document
        map_path: Map document on disk (used when map is absent)
        point: Point coordinates in JSON form (certify)
        format: Report format
        output: Output path; stdout when absent
        deterministic: Always true; no command draws random numbers
    """

    model_config = ConfigDict(extra="forbid")

    command: Command
    ring: Optional[RingSpecModel] = None
    map: Optional[MapSpecModel] = None
    map_path: Optional[str] = None
    point: Optional[List[Any]] = None

    n_max: int = Field(default=4, ge=1)
    e_list: Optional[List[int]] = None
    k_max: int = Field(default=10, ge=1)
    q: Optional[int] = None
    p: Optional[int] = None
    f: int = Field(default=1, ge=1)
    a: int = Field(default=1, ge=1)
    a_max: Optional[int] = Field(default=None, ge=1)
    m_max: int = Field(default=6, ge=1)
    X: int = Field(default=100000, ge=1)
    precision: Optional[int] = Field(default=None, ge=1)
    a4: Optional[Union[int, List[int]]] = None
    a6: Optional[Union[int, List[int]]] = None
    v_delta: Optional[int] = Field(default=None, ge=1)
    e_seq: Optional[List[int]] = None
    reduction: Literal["split", "other"] = "split"
    contrast: bool = False

    format: ReportFormat = "json"
    output: Optional[str] = None
    deterministic: Literal[True] = True

    @model_validator(mode="after")
    def _required_inputs(self) -> "ExperimentConfig":
        needs: Dict[str, List[str]] = {
            "census": ["ring"],
            "bounds": ["ring"],
            "lift": ["ring"],
            "find-periodic": ["ring"],
            "certify": ["ring", "point"],
            "verify": ["p", "e_list"],
            "power-map": ["q", "p"],
            "sieve": ["q", "p"],
            "density": ["p"],
            "ec-torsion": ["p", "a4", "a6"],
            "tower": ["v_delta", "p", "e_seq"],
        }
        missing = [name for name in needs[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command} needs {', '.join(missing)}")
        dynamics = {"census", "bounds", "lift", "find-periodic", "certify", "verify"}
        if self.command in dynamics and self.map is None and self.map_path is None:
            raise ValueError(f"{self.command} needs a map or map_path")
        return self
