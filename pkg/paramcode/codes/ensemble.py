"""Random code ensemble sampling and exhaustive enumeration of small codes.

Seed-to-output mapping (frozen, fixtures depend on it): one
``numpy.random.Generator(PCG64(seed))`` per call to ``sample_srce``; each
trial draws an (m, n) letter matrix with ``integers(0, q, size=(m, n))``, then
walks the rows in order and redraws a row with ``integers(0, q, size=n)`` for
as long as it repeats an earlier row.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from .core import Alphabet, Code, CodeParameters, resolve_rate_base
from .errors import CapExceeded, InfeasibleConfig, TooFewWords
from .metrics import code_parameters

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class EnsembleConfig(BaseModel):
    """随机码集合的采样配置"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)
    m: int = Field(ge=2)
    q: int = Field(2, ge=2)
    trials: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    rate_base: Union[Literal["q"], int] = "q"


@dataclass(frozen=True)
class EnsembleTrial:
    """One sampled code; ``redraws`` counts the duplicate rows that were drawn again."""

    code: Code
    parameters: CodeParameters
    redraws: int


@dataclass(frozen=True)
class CloudPoint:
    delta: Fraction
    rate: float
    multiplicity: int
    provenance: str


@dataclass(frozen=True)
class PointCloud:
    """(delta, R) points with multiplicities, sorted by delta then R.

    Rows line up with the columns written by ``bounds-curve`` so the two CSV files
    can be plotted on the same axes.
    """

    q: int
    points: tuple[CloudPoint, ...]

    @classmethod
    def aggregate(cls, q: int, parameters: Iterable[CodeParameters], provenance: str) -> PointCloud:
        counts = Counter((p.delta, p.rate) for p in parameters)
        points = tuple(
            CloudPoint(delta, rate, count, provenance)
            for (delta, rate), count in sorted(counts.items())
        )
        return cls(q, points)

    @classmethod
    def from_trials(cls, config: EnsembleConfig, trials: Iterable[EnsembleTrial]) -> PointCloud:
        tag = f"srce(n={config.n},m={config.m},q={config.q},seed={config.seed})"
        return cls.aggregate(config.q, (t.parameters for t in trials), tag)

    def as_counter(self) -> Counter:
        return Counter({(p.delta, p.rate): p.multiplicity for p in self.points})

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["delta", "R", "multiplicity", "provenance"])
        for p in self.points:
            writer.writerow([repr(float(p.delta)), repr(p.rate), p.multiplicity, p.provenance])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "points": [
                {"delta": str(p.delta), "R": p.rate, "multiplicity": p.multiplicity, "provenance": p.provenance}
                for p in self.points
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def _draw_code(rng: np.random.Generator, n: int, m: int, q: int) -> tuple[np.ndarray, int]:
    # 按行顺序重抽重复的码字
    words = rng.integers(0, q, size=(m, n))
    seen: set[bytes] = set()
    redraws = 0
    for row in range(m):
        key = words[row].tobytes()
        while key in seen:
            words[row] = rng.integers(0, q, size=n)
            key = words[row].tobytes()
            redraws += 1
        seen.add(key)
    return words, redraws


def sample_srce(config: EnsembleConfig, progress: bool = False) -> list[EnsembleTrial]:
    """Draw ``config.trials`` codes of m distinct words with independent uniform letters."""
    n, m, q = config.n, config.m, config.q
    if m > q ** n:
        raise InfeasibleConfig(f"cannot draw {m} distinct words from F_{q}^{n} ({q ** n} words)", m=m, n=n, q=q)

    rng = np.random.Generator(np.random.PCG64(config.seed))
    alphabet = Alphabet(q)
    trials = []
    for t in tqdm(range(config.trials), desc="srce trials", disable=not progress):
        words, redraws = _draw_code(rng, n, m, q)
        if redraws:
            logger.debug(f"trial {t}: {redraws} duplicate words redrawn")
        code = Code.from_labeled(alphabet, n, ((f"w{j}", words[j]) for j in range(m)))
        trials.append(EnsembleTrial(code, code_parameters(code, config.rate_base), redraws))

    total = sum(t.redraws for t in trials)
    logger.info(f"sampled {config.trials} codes [n={n}, m={m}, q={q}] with seed {config.seed}, {total} redraws")
    return trials


def enumeration_size(n: int, m: int, q: int) -> int:
    """Number of m-word codes in F_q^n."""
    return math.comb(q ** n, m)


def enumerate_codes(n: int, m: int, q: int, cap: int, rate_base: int | str = "q",
                    progress: bool = False) -> PointCloud:
    """Visit every code of exactly m distinct words in F_q^n once and aggregate (delta, R)."""
    if q < 2 or n < 1:
        raise InfeasibleConfig(f"need q >= 2 and n >= 1, got q={q}, n={n}", n=n, q=q)
    if m < 2:
        raise TooFewWords(f"codes need at least 2 words, got m={m}", m=m)
    if m > q ** n:
        raise InfeasibleConfig(f"cannot pick {m} distinct words from F_{q}^{n} ({q ** n} words)", m=m, n=n, q=q)
    required = enumeration_size(n, m, q)
    if required > cap:
        raise CapExceeded(f"enumerating all {m}-word codes in F_{q}^{n} needs {required} codes, cap is {cap}",
                          required=required, cap=cap)

    alphabet = Alphabet(q)
    ambient = list(itertools.product(range(q), repeat=n))
    base = resolve_rate_base(rate_base, q)

    def parameters():
        for subset in tqdm(itertools.combinations(ambient, m), total=required,
                           desc="enumerate", disable=not progress):
            code = Code.from_labeled(alphabet, n, ((f"w{j}", w) for j, w in enumerate(subset)))
            yield code_parameters(code, base)

    cloud = PointCloud.aggregate(q, parameters(), f"enumerate(n={n},m={m},q={q})")
    logger.info(f"enumerated {required} codes into {len(cloud.points)} distinct points")
    return cloud


def oracle_code_parameters(code: Code, rate_base: int | str = "q") -> CodeParameters:
    """Naive double loop over every pair, independent of metrics.code_parameters."""
    words = [list(w.letters) for w in code.words]
    m = len(words)
    if m < 2:
        raise TooFewWords(f"code has {m} distinct words, need at least 2", m=m)
    base = code.q if rate_base == "q" else int(rate_base)

    distances = []
    for a in range(m):
        for b in range(a + 1, m):
            dist = 0
            for x, y in zip(words[a], words[b]):
                if x != y:
                    dist += 1
            distances.append(dist)

    n = code.block_length
    d = min(distances)
    k = math.log(m, base)
    return CodeParameters(n=n, m=m, k=k, d=d, rate=k / n, delta=Fraction(d, n), rate_base=base,
                          distance_multiset=tuple(sorted(distances)))
