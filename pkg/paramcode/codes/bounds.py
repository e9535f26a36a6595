"""Entropy, the classical bound curves and certified position of a code point.

The asymptotic bound itself is never evaluated. A point is certified above it
when it violates one of the known upper bounds (Plotkin, Hamming, asymptotic
Singleton) and below it when it lies strictly under the Gilbert-Varshamov
curve; anything else is Indeterminate.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Optional

from .core import CodeParameters
from .errors import DomainError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TOLERANCE = 1e-9


def _check_unit(name: str, x: Real) -> None:
    if not 0 <= x <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {x}", value=float(x))


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 2:
        raise DomainError(f"alphabet size must be an integer >= 2, got {q!r}")


def plotkin_threshold(q: int) -> Fraction:
    return Fraction(q - 1, q)


def entropy(x: Real, q: int) -> float:
    """q-ary Shannon entropy H_q(x), with 0 log 0 = 0."""
    _check_q(q)
    _check_unit("x", x)
    x = float(x)
    h = x * math.log(q - 1, q) if q > 2 else 0.0
    if 0 < x < 1:
        h -= x * math.log(x, q) + (1 - x) * math.log(1 - x, q)
    return h


def gv_value(delta: Real, q: int) -> float:
    """Gilbert-Varshamov curve 1 - H_q(delta) on [0, (q-1)/q], zero beyond."""
    _check_q(q)
    _check_unit("delta", delta)
    if delta >= plotkin_threshold(q):
        return 0.0
    return max(0.0, 1.0 - entropy(delta, q))


def hamming_value(delta: Real, q: int) -> float:
    """Sphere-packing curve 1 - H_q(delta / 2)."""
    _check_q(q)
    _check_unit("delta", delta)
    half = delta / 2
    if half >= plotkin_threshold(q):
        return 0.0
    return max(0.0, 1.0 - entropy(half, q))


def singleton_value(delta: Real) -> float:
    _check_unit("delta", delta)
    return 1.0 - float(delta)


def plotkin_exceeded(delta: Real, q: int, tol: float = TOLERANCE) -> bool:
    _check_q(q)
    _check_unit("delta", delta)
    if isinstance(delta, (int, Fraction)):
        return delta >= plotkin_threshold(q)
    return float(delta) >= float(plotkin_threshold(q)) - tol


def gv_delta(rate: float, q: int, tol: float = 1e-12) -> float:
    """Inverse of the GV curve: the delta in [0, (q-1)/q] with 1 - H_q(delta) = rate."""
    _check_q(q)
    _check_unit("rate", rate)
    lo, hi = 0.0, float(plotkin_threshold(q))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if 1.0 - entropy(mid, q) > rate:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class CodePoint:
    delta: Real
    rate: float
    q: int
    n: Optional[int] = None

    def __post_init__(self):
        _check_q(self.q)
        _check_unit("delta", self.delta)
        _check_unit("R", self.rate)


class Verdict(str, Enum):
    ABOVE_ASYMPTOTIC = "AboveAsymptotic"
    BELOW_GV = "BelowGV"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Certificate:
    bound: str
    inequality: str
    margin: float
    holds: bool

    def as_dict(self) -> dict:
        return {"bound": self.bound, "inequality": self.inequality, "margin": self.margin, "holds": self.holds}


@dataclass(frozen=True)
class RegionClassification:
    verdict: Verdict
    certificates: tuple[Certificate, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def certificate(self, bound: str) -> Certificate:
        return next(c for c in self.certificates if c.bound == bound)

    @property
    def violated_upper_bounds(self) -> list[str]:
        return [c.bound for c in self.certificates if c.bound != "gv" and c.holds]

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict.value,
            "certificates": [c.as_dict() for c in self.certificates],
            "notes": list(self.notes),
        }


def classify(point: CodePoint, singleton_slack: Optional[float] = None,
             tol: float = TOLERANCE) -> RegionClassification:
    """Every certificate is evaluated; ``holds`` means the upper bound is violated
    (plotkin, hamming, singleton) or the point is strictly under the curve (gv)."""
    delta, rate, q = point.delta, point.rate, point.q
    if rate <= 0:
        raise DomainError(f"classification needs R > 0, got {rate}", value=rate)
    if singleton_slack is None:
        singleton_slack = 1.0 / point.n if point.n else 0.0

    threshold = plotkin_threshold(q)
    plotkin = Certificate(
        "plotkin", f"delta >= {threshold} and R > 0",
        float(delta) - float(threshold),
        plotkin_exceeded(delta, q, tol),
    )
    h_margin = rate - hamming_value(delta, q)
    hamming = Certificate("hamming", "R > 1 - H_q(delta/2)", h_margin, h_margin > tol)
    s_margin = rate + float(delta) - 1.0 - singleton_slack
    singleton = Certificate("singleton", f"R + delta > 1 + {singleton_slack:.6g}", s_margin, s_margin > tol)
    g_margin = gv_value(delta, q) - rate
    gv = Certificate("gv", "R < 1 - H_q(delta)", g_margin, g_margin > tol)

    certificates = (plotkin, hamming, singleton, gv)
    notes = []
    if plotkin.holds or hamming.holds or singleton.holds:
        verdict = Verdict.ABOVE_ASYMPTOTIC
    elif gv.holds:
        verdict = Verdict.BELOW_GV
    else:
        verdict = Verdict.INDETERMINATE
        if abs(g_margin) <= tol:
            notes.append("on-GV")
        notes.append(f"between GV (margin {g_margin:.6g}) and the upper envelope (hamming margin {h_margin:.6g})")

    logger.debug(f"classify delta={delta} R={rate:.6g} q={q}: {verdict.value}")
    return RegionClassification(verdict, certificates, tuple(notes))


def classify_parameters(params: CodeParameters, q: int, singleton_slack: Optional[float] = None,
                        tol: float = TOLERANCE) -> RegionClassification:
    return classify(CodePoint(params.delta, params.rate, q, params.n), singleton_slack, tol)


@dataclass(frozen=True)
class CurveSample:
    delta: Fraction
    gv: float
    hamming: float
    singleton: float
    plotkin: bool


@dataclass(frozen=True)
class BoundCurves:
    q: int
    samples: tuple[CurveSample, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["delta", "gv", "hamming", "singleton", "plotkin"])
        for s in self.samples:
            writer.writerow([repr(float(s.delta)), repr(s.gv), repr(s.hamming), repr(s.singleton), int(s.plotkin)])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "samples": [
                {"delta": float(s.delta), "gv": s.gv, "hamming": s.hamming,
                 "singleton": s.singleton, "plotkin": s.plotkin}
                for s in self.samples
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def emit_bound_curves(q: int, samples: int) -> BoundCurves:
    _check_q(q)
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}", value=samples)
    rows = []
    for i in range(samples):
        delta = Fraction(i, samples - 1)
        rows.append(CurveSample(
            delta=delta,
            gv=gv_value(delta, q),
            hamming=hamming_value(delta, q),
            singleton=singleton_value(delta),
            plotkin=plotkin_exceeded(delta, q),
        ))
    return BoundCurves(q, tuple(rows))
