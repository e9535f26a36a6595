from __future__ import annotations

from enum import Enum
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .core import Alphabet


class CellHandling(str, Enum):
    DROP = "drop"
    ZERO = "zero"
    ERROR = "error"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BuildPolicy(_Section):
    """How Entailed / Missing cells become letters (or dropped columns)."""

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    alphabet: Alphabet
    entailed_handling: CellHandling = CellHandling.DROP
    missing_handling: CellHandling = CellHandling.DROP

    @classmethod
    def default_for(cls, q: int, entailed: CellHandling | str | None = None,
                    missing: CellHandling | str | None = None) -> BuildPolicy:
        # drop reproduces the binary procedure, zero the ternary encoding
        fallback = CellHandling.DROP if q == 2 else CellHandling.ZERO
        return cls(
            alphabet=Alphabet(q),
            entailed_handling=CellHandling(entailed) if entailed else fallback,
            missing_handling=CellHandling(missing) if missing else fallback,
        )

    def as_dict(self) -> dict:
        return {
            "q": self.alphabet.q,
            "entailed": self.entailed_handling.value,
            "missing": self.missing_handling.value,
        }


class AnalysisSettings(_Section):
    alphabet: int = Field(2, ge=2)
    rate_base: Union[Literal["q"], int] = "q"
    entailed: Optional[CellHandling] = None
    missing: Optional[CellHandling] = None
    singleton_slack: Optional[float] = Field(None, ge=0)
    tolerance: float = Field(1e-9, gt=0)

    @field_validator("rate_base")
    @classmethod
    def _check_base(cls, v):
        if v != "q" and v < 2:
            raise ValueError("rate_base must be 'q' or an integer >= 2")
        return v

    def policy(self) -> BuildPolicy:
        return BuildPolicy.default_for(self.alphabet, self.entailed, self.missing)


class EnsembleSettings(_Section):
    trials: int = Field(50, ge=1)
    seed: int = Field(20240101, ge=0, lt=2**64)
    progress: bool = False


class EnumerationSettings(_Section):
    cap: int = Field(200_000, ge=1)


class OutputSettings(_Section):
    format: Optional[Literal["json", "csv"]] = None
    timezone: str = "UTC"
    indent: int = Field(2, ge=0)


class LoggingSettings(_Section):
    dir: Optional[str] = None
    level: str = "INFO"


class Settings(_Section):
    analysis: AnalysisSettings = AnalysisSettings()
    ensemble: EnsembleSettings = EnsembleSettings()
    enumeration: EnumerationSettings = EnumerationSettings()
    output: OutputSettings = OutputSettings()
    logging: LoggingSettings = LoggingSettings()

    @classmethod
    def from_config(cls, config: dict | None) -> Settings:
        return cls.model_validate(config or {})
