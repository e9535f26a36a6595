from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import Code, CodeParameters, Codeword, LanguageRecord, ParameterTable, log_base, resolve_rate_base
from .errors import LengthMismatch, NoSharedParameters, TooFewWords

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def hamming_distance(w: Codeword, w2: Codeword) -> int:
    """Number of positions where the two words differ."""
    if len(w) != len(w2):
        raise LengthMismatch(f"words of length {len(w)} and {len(w2)}", left=w.label, right=w2.label)
    return sum(1 for x, y in zip(w.letters, w2.letters) if x != y)


def relative_hamming(w: Codeword, w2: Codeword) -> Fraction:
    d = hamming_distance(w, w2)
    if not len(w):
        raise LengthMismatch("relative distance of empty words is undefined")
    return Fraction(d, len(w))


def word_matrix(code: Code) -> np.ndarray:
    dtype = np.min_scalar_type(code.q - 1)
    return np.array([w.letters for w in code.words], dtype=dtype).reshape(code.size, code.block_length)


def pairwise_distances(words: np.ndarray) -> np.ndarray:
    """Condensed distance vector in (0,1), (0,2), ..., (1,2), ... order."""
    m = words.shape[0]
    if m < 2:
        return np.zeros(0, dtype=np.int64)
    parts = [(words[i + 1:] != words[i]).sum(axis=1) for i in range(m - 1)]
    return np.concatenate(parts).astype(np.int64)


def code_parameters(code: Code, rate_base: int | str = "q") -> CodeParameters:
    """n, #C, k = log_base #C, minimum distance d, R = k/n and delta = d/n."""
    m = code.size
    if m < 2:
        raise TooFewWords(f"code has {m} distinct words, need at least 2", m=m)
    base = resolve_rate_base(rate_base, code.q)
    n = code.block_length
    distances = pairwise_distances(word_matrix(code))
    d = int(distances.min())
    k = log_base(m, base)
    return CodeParameters(
        n=n,
        m=m,
        k=k,
        d=d,
        rate=k / n,
        delta=Fraction(d, n),
        rate_base=base,
        distance_multiset=tuple(sorted(int(x) for x in distances)),
    )


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    n: int
    absolute: tuple[tuple[int, ...], ...]

    @property
    def relative(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(x, self.n) for x in row) for row in self.absolute)

    def off_diagonal(self) -> list[int]:
        size = len(self.labels)
        return [self.absolute[i][j] for i in range(size) for j in range(i + 1, size)]

    def to_csv(self, relative: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["", *self.labels])
        rows = self.relative if relative else self.absolute
        for label, row in zip(self.labels, rows):
            writer.writerow([label, *(str(x) for x in row)])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "labels": list(self.labels),
            "n": self.n,
            "absolute": [list(row) for row in self.absolute],
            "relative": [[str(x) for x in row] for row in self.relative],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, indent=indent)


def distance_matrix(code: Code) -> DistanceMatrix:
    words = word_matrix(code)
    size = code.size
    full = np.zeros((size, size), dtype=np.int64)
    if size > 1:
        iu = np.triu_indices(size, k=1)
        full[iu] = pairwise_distances(words)
        full = full + full.T
    return DistanceMatrix(
        labels=tuple(w.label for w in code.words),
        n=code.block_length,
        absolute=tuple(tuple(int(x) for x in row) for row in full),
    )


def logua_distance(r: LanguageRecord, r2: LanguageRecord) -> Fraction:
    """Differences over the parameters set (+ or -) in both languages, divided by their count."""
    if len(r.values) != len(r2.values):
        raise LengthMismatch(f"records of length {len(r.values)} and {len(r2.values)}",
                             left=r.name, right=r2.name)
    shared = [(x, y) for x, y in zip(r.values, r2.values) if x.is_set and y.is_set]
    if not shared:
        raise NoSharedParameters(f"{r.name} and {r2.name} share no set parameters",
                                 left=r.name, right=r2.name)
    return Fraction(sum(1 for x, y in shared if x != y), len(shared))


@dataclass(frozen=True)
class LoguaMatrix:
    labels: tuple[str, ...]
    values: tuple[tuple[Optional[Fraction], ...], ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["", *self.labels])
        for label, row in zip(self.labels, self.values):
            writer.writerow([label, *("" if x is None else str(x) for x in row)])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "normalization": "logua",
            "labels": list(self.labels),
            "relative": [[None if x is None else str(x) for x in row] for row in self.values],
        }


def logua_matrix(table: ParameterTable) -> LoguaMatrix:
    """Pairwise logua_distance over every language of the table; undefined pairs are None."""
    rows = []
    for r in table.languages:
        row = []
        for r2 in table.languages:
            try:
                row.append(logua_distance(r, r2))
            except NoSharedParameters:
                logger.warning(f"no shared parameters between {r.name} and {r2.name}")
                row.append(None)
        rows.append(tuple(row))
    return LoguaMatrix(table.language_names, tuple(rows))
