from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Optional

import pytz

from .bounds import RegionClassification, classify_parameters
from .core import CodeParameters, ParameterTable, validate_table
from .ingest import apply_policy, encode_table
from .metrics import DistanceMatrix, code_parameters, distance_matrix
from .settings import BuildPolicy

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass
class AnalysisReport:
    """Everything measured about one language family, with the inputs needed to recompute it."""

    family: str
    inputs: dict
    policy: BuildPolicy
    retained_parameters: list[str]
    dropped_parameters: list[str]
    collisions: list[list[str]]
    codewords: dict[str, str]
    parameters: dict[str, CodeParameters]
    classification: RegionClassification
    distances: DistanceMatrix
    generated_at: str = field(default="")

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "generated_at": self.generated_at,
            "family": self.family,
            "inputs": self.inputs,
            "policy": self.policy.as_dict(),
            "retained_parameters": self.retained_parameters,
            "dropped_parameters": self.dropped_parameters,
            "collisions": self.collisions,
            "codewords": self.codewords,
            "parameters": {base: p.as_dict() for base, p in self.parameters.items()},
            "classification": self.classification.as_dict(),
            "distance_matrix": self.distances.as_dict(),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, indent=indent) + "\n"


def now_iso(timezone: str = "UTC") -> str:
    try:
        tz = pytz.timezone(timezone)
    except Exception:
        logger.warning(f"unknown timezone {timezone!r}, using UTC")
        tz = pytz.utc
    return datetime.now(tz).isoformat(timespec="seconds")


def analyze_table(table: ParameterTable, policy: BuildPolicy, family: str, inputs: dict,
                  rate_base: int | str = "q", singleton_slack: Optional[float] = None,
                  tolerance: float = 1e-9, timezone: str = "UTC") -> AnalysisReport:
    """Build the code of ``table`` under ``policy``, measure it and place it against the bounds."""
    validate_table(table)
    encoded, dropped = apply_policy(table, policy)
    code = encode_table(encoded, policy)
    q = code.q

    by_base = {"q": code_parameters(code, "q"), "2": code_parameters(code, 2)}
    chosen = code_parameters(code, rate_base)
    placed = chosen
    if chosen.rate > 1:
        # base-2 R exceeds 1 when n < log2 #C; base-q R never does
        logger.warning(f"{family}: R={chosen.rate:.6g} in base {chosen.rate_base} exceeds 1, classifying in base {q}")
        placed = by_base["q"]
    classification = classify_parameters(placed, q, singleton_slack, tolerance)
    if placed is not chosen:
        note = f"R > 1 in base {chosen.rate_base}, classified with base-{q} rate {placed.rate:.6g}"
        classification = replace(classification, notes=classification.notes + (note,))
    logger.info(f"{family}: n={chosen.n} m={chosen.m} d={chosen.d} R={chosen.rate:.6g} "
                f"delta={chosen.delta} -> {classification.verdict.value}")

    return AnalysisReport(
        family=family,
        inputs=inputs,
        policy=policy,
        retained_parameters=list(encoded.parameter_ids),
        dropped_parameters=dropped,
        collisions=code.collisions(),
        codewords={name: str(w) for name, w in code.label_map.items()},
        parameters={f"rate_base_{k}": v for k, v in by_base.items()},
        classification=classification,
        distances=distance_matrix(code),
        generated_at=now_iso(timezone),
    )
