from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateLanguage,
    DuplicateParameter,
    EmptyTable,
    InvalidCodeword,
    InvalidTable,
    RaggedRow,
    TableViolation,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Alphabet:
    """Code alphabet F_q, letters are the integers 0..q-1."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"alphabet size must be an integer >= 2, got {self.q!r}")

    def __contains__(self, letter: int) -> bool:
        return 0 <= letter < self.q


class ParamValue(str, Enum):
    PLUS = "+"
    MINUS = "-"
    ENTAILED = "0"
    MISSING = "?"

    @property
    def is_set(self) -> bool:
        return self in (ParamValue.PLUS, ParamValue.MINUS)


@dataclass(frozen=True)
class LanguageRecord:
    name: str
    values: tuple[ParamValue, ...]


@dataclass(frozen=True)
class ParameterTable:
    """A language family: one row per language, one column per syntactic parameter."""

    parameter_ids: tuple[str, ...]
    languages: tuple[LanguageRecord, ...]

    @property
    def language_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.languages)

    @property
    def width(self) -> int:
        return len(self.parameter_ids)

    def record(self, name: str) -> LanguageRecord:
        for r in self.languages:
            if r.name == name:
                return r
        raise KeyError(name)

    def column(self, index: int) -> tuple[ParamValue, ...]:
        return tuple(r.values[index] for r in self.languages)


@dataclass(frozen=True)
class Codeword:
    letters: tuple[int, ...]
    label: str = ""

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if all(0 <= x < 10 for x in self.letters):
            return "".join(str(x) for x in self.letters)
        return ",".join(str(x) for x in self.letters)


@dataclass(frozen=True)
class Code:
    """A set of distinct words of length n over F_q.

    ``label_map`` sends every input language to its word; several languages
    may share one word, in which case the word carries the first label.
    """

    alphabet: Alphabet
    block_length: int
    words: tuple[Codeword, ...]
    label_map: Mapping[str, Codeword] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        seen = set()
        for w in self.words:
            if len(w) != self.block_length:
                raise InvalidCodeword(
                    f"word {w.label!r} has length {len(w)}, expected {self.block_length}",
                    label=w.label,
                )
            bad = [x for x in w.letters if x not in self.alphabet]
            if bad:
                raise InvalidCodeword(
                    f"word {w.label!r} has letters {bad} outside F_{self.alphabet.q}",
                    label=w.label,
                )
            if w.letters in seen:
                raise InvalidCodeword(f"duplicate word {w}", label=w.label)
            seen.add(w.letters)

    @classmethod
    def from_labeled(cls, alphabet: Alphabet, block_length: int,
                     labeled: Iterable[tuple[str, Sequence[int]]]) -> Code:
        """Build a code keeping the first occurrence of every letter sequence."""
        words: dict[tuple[int, ...], Codeword] = {}
        label_map: dict[str, Codeword] = {}
        for label, letters in labeled:
            letters = tuple(int(x) for x in letters)
            if letters in words:
                logger.warning(f"{label} collides with {words[letters].label}: identical word {Codeword(letters)}")
            else:
                words[letters] = Codeword(letters, label)
            label_map[label] = words[letters]
        return cls(alphabet, block_length, tuple(words.values()), label_map)

    @property
    def q(self) -> int:
        return self.alphabet.q

    @property
    def size(self) -> int:
        return len(self.words)

    def labeled_letters(self) -> list[tuple[str, tuple[int, ...]]]:
        """Every language with its letters, in label_map order (collisions included)."""
        if not self.label_map:
            return [(w.label, w.letters) for w in self.words]
        return [(name, w.letters) for name, w in self.label_map.items()]

    def collisions(self) -> list[list[str]]:
        groups: dict[tuple[int, ...], list[str]] = {}
        for name, w in self.label_map.items():
            groups.setdefault(w.letters, []).append(name)
        return [names for names in groups.values() if len(names) > 1]

    def word_for(self, language: str) -> Codeword:
        return self.label_map[language]


@dataclass(frozen=True)
class CodeParameters:
    """[n, k, d] data of a code with R = k/n and exact delta = d/n."""

    n: int
    m: int
    k: float
    d: int
    rate: float
    delta: Fraction
    rate_base: int
    distance_multiset: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "d": self.d,
            "R": self.rate,
            "delta": str(self.delta),
            "delta_float": float(self.delta),
            "rate_base": self.rate_base,
            "distance_multiset": list(self.distance_multiset),
        }


def resolve_rate_base(rate_base: int | str, q: int) -> int:
    """'q' means the alphabet size, anything else must be an integer >= 2."""
    if rate_base in ("q", None):
        return q
    base = int(rate_base)
    if base < 2:
        raise ValueError(f"rate base must be 'q' or an integer >= 2, got {rate_base!r}")
    return base


def log_base(m: int, base: int) -> float:
    # exact when m is a power of the base, so R = 1 for the full ambient space
    power, p = 0, 1
    while p < m:
        p *= base
        power += 1
    if p == m:
        return float(power)
    if base == 2:
        return math.log2(m)
    return math.log(m) / math.log(base)


def complement(word: Codeword) -> Codeword:
    """Binary complement; only defined for letters in {0, 1}."""
    if any(x not in (0, 1) for x in word.letters):
        raise InvalidCodeword(f"complement needs a binary word, got {word}", label=word.label)
    return Codeword(tuple(1 - x for x in word.letters), word.label)


def validate_table(table: ParameterTable) -> ParameterTable:
    """Return ``table`` unchanged or raise InvalidTable listing every violation."""
    violations: list[TableViolation] = []

    if not table.parameter_ids or not table.languages:
        violations.append(EmptyTable(
            f"table has {len(table.languages)} languages and {len(table.parameter_ids)} parameters",
        ))

    seen: set[str] = set()
    for idx, pid in enumerate(table.parameter_ids, start=1):
        if not pid:
            violations.append(TableViolation(f"empty parameter id in column {idx}", column=idx))
        elif pid in seen:
            violations.append(DuplicateParameter(f"duplicate parameter {pid!r}", parameter=pid))
        seen.add(pid)

    seen = set()
    for row in table.languages:
        if not row.name:
            violations.append(TableViolation("empty language name"))
        elif row.name in seen:
            violations.append(DuplicateLanguage(f"duplicate language {row.name!r}", language=row.name))
        seen.add(row.name)
        if len(row.values) != table.width:
            violations.append(RaggedRow(
                f"row {row.name!r} has {len(row.values)} values, expected {table.width}",
                language=row.name, length=len(row.values), expected=table.width,
            ))

    if violations:
        raise InvalidTable(violations)
    return table
