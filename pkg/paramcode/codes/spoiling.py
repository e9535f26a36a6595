"""Spoiling operations on codes and the [n, k, d] laws they obey.

Positions are 1-based. Linguistically, extending adds a parameter that depends
on the others, projecting forgets a parameter and restricting keeps the
sub-family of languages sharing one value of a parameter.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

from .core import Code, CodeParameters, log_base
from .errors import (
    DegenerateResult,
    EmptyLevelSet,
    PartialFunction,
    PositionOutOfRange,
    SingletonLevelSet,
    TooShort,
)
from .metrics import code_parameters, hamming_distance

if TYPE_CHECKING:
    from paramcode.spoil_sdk import SpoilFunction

logger = logging.getLogger(__name__)

K_TOLERANCE = 1e-9


class SpoilKind(str, Enum):
    EXTEND = "extend"
    PROJECT = "project"
    RESTRICT = "restrict"


class SpoilLaw(str, Enum):
    EXTEND_CONSTANT = "extend/constant: [n+1, k, d]"
    EXTEND_SEPARATING = "extend/separates minimal pairs: [n+1, k, d+1]"
    EXTEND_GENERAL = "extend/general: [n+1, k, d or d+1]"
    PROJECT_MINIMAL_PAIR_DIFFERS = "project/a minimal pair differs at i: [n-1, k, d-1]"
    PROJECT_MINIMAL_PAIRS_AGREE = "project/minimal pairs agree at i: [n-1, k, d]"
    PROJECT_COLLISION = "project/words merged (d = 1): [n-1, k' < k, d' >= 1]"
    RESTRICT_LEVEL_SET = "restrict/proper level set: k' < k, d' >= d"
    RESTRICT_CONSTANT_COLUMN = "restrict/constant column: k' = k, d' = d"


@dataclass(frozen=True)
class SpoilOp:
    """一次剪裁操作的描述：类型、位置（从 1 开始）以及附带的字母或函数标签"""

    kind: SpoilKind
    position: int
    letter: Optional[int] = None
    function_tag: Optional[str] = None
    projected: bool = False

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "position": self.position,
            "letter": self.letter,
            "function": self.function_tag,
            "projected": self.projected,
        }


@dataclass(frozen=True)
class SpoilReport:
    """Parameters before and after one operation, with the law that governs the change.

    ``word_collision`` is set when projecting merged two words, so #C dropped.
    """

    before: CodeParameters
    after: CodeParameters
    op: SpoilOp
    law: SpoilLaw
    q: int
    word_collision: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "op": self.op.as_dict(),
            "law": self.law.value,
            "word_collision": self.word_collision,
            "before": self.before.as_dict(),
            "after": self.after.as_dict(),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class LawVerdict:
    ok: bool
    law: SpoilLaw
    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"ok": self.ok, "law": self.law.value, "violations": list(self.violations), "notes": list(self.notes)}


def _check_position(i: int, upper: int) -> None:
    if not 1 <= i <= upper:
        raise PositionOutOfRange(f"position {i} outside 1..{upper}", position=i, upper=upper)


def minimal_pairs(code: Code, d: int) -> list[tuple[int, int]]:
    """Index pairs of words at distance exactly d."""
    words = code.words
    return [
        (a, b)
        for a in range(len(words))
        for b in range(a + 1, len(words))
        if hamming_distance(words[a], words[b]) == d
    ]


def spoil_extend(code: Code, i: int, f: SpoilFunction, rate_base: int | str = "q") -> tuple[Code, SpoilReport]:
    """C *_i f: insert f(w) so that it becomes letter i of every word."""
    n = code.block_length
    _check_position(i, n + 1)
    before = code_parameters(code, rate_base)

    inserted = {}
    for w in code.words:
        letter = f.letter_for(w)
        if letter is None:
            raise PartialFunction(f"{f.get_tag()} is not defined on {w.label} ({w})", label=w.label)
        inserted[w.letters] = int(letter)

    new_code = Code.from_labeled(
        code.alphabet, n + 1,
        ((name, letters[:i - 1] + (inserted[letters],) + letters[i - 1:]) for name, letters in code.labeled_letters()),
    )
    after = code_parameters(new_code, rate_base)

    if f.is_constant_on(code):
        law = SpoilLaw.EXTEND_CONSTANT
    elif all(inserted[code.words[a].letters] != inserted[code.words[b].letters]
             for a, b in minimal_pairs(code, before.d)):
        law = SpoilLaw.EXTEND_SEPARATING
    else:
        law = SpoilLaw.EXTEND_GENERAL

    op = SpoilOp(SpoilKind.EXTEND, i, function_tag=f.get_tag())
    logger.info(f"extend at {i} with {f.get_tag()}: [{before.n}, {before.d}] -> [{after.n}, {after.d}]")
    return new_code, SpoilReport(before, after, op, law, code.q)


def spoil_project(code: Code, i: int, rate_base: int | str = "q") -> tuple[Code, SpoilReport]:
    """C *_i: forget position i."""
    n = code.block_length
    if n < 2:
        raise TooShort(f"cannot project a code of block length {n}", n=n)
    _check_position(i, n)
    before = code_parameters(code, rate_base)

    projected = [(name, letters[:i - 1] + letters[i:]) for name, letters in code.labeled_letters()]
    new_code = Code.from_labeled(code.alphabet, n - 1, projected)
    if new_code.size < 2:
        raise DegenerateResult(f"projection at {i} leaves {new_code.size} distinct word", position=i)
    after = code_parameters(new_code, rate_base)

    collision = new_code.size < code.size
    notes = []
    if collision:
        law = SpoilLaw.PROJECT_COLLISION
        notes.append(f"WordCollision: {code.size - new_code.size} word(s) merged")
    elif any(code.words[a].letters[i - 1] != code.words[b].letters[i - 1]
             for a, b in minimal_pairs(code, before.d)):
        law = SpoilLaw.PROJECT_MINIMAL_PAIR_DIFFERS
    else:
        law = SpoilLaw.PROJECT_MINIMAL_PAIRS_AGREE

    op = SpoilOp(SpoilKind.PROJECT, i)
    logger.info(f"project at {i}: [{before.n}, {before.d}] -> [{after.n}, {after.d}]")
    return new_code, SpoilReport(before, after, op, law, code.q, collision, tuple(notes))


def spoil_restrict(code: Code, i: int, a: int, project: bool = False,
                   rate_base: int | str = "q") -> tuple[Code, SpoilReport]:
    """Level set C(a, i); with ``project`` the constant position i is removed as well."""
    n = code.block_length
    _check_position(i, n)
    if a not in code.alphabet:
        raise PositionOutOfRange(f"letter {a} outside F_{code.q}", letter=a)
    before = code_parameters(code, rate_base)

    kept = [(name, letters) for name, letters in code.labeled_letters() if letters[i - 1] == a]
    distinct = {letters for _, letters in kept}
    if not distinct:
        raise EmptyLevelSet(f"no word has letter {a} at position {i}", position=i, letter=a)
    if len(distinct) == 1:
        raise SingletonLevelSet(f"only one word has letter {a} at position {i}", position=i, letter=a)

    if project:
        if n < 2:
            raise TooShort(f"cannot project a code of block length {n}", n=n)
        kept = [(name, letters[:i - 1] + letters[i:]) for name, letters in kept]
    new_code = Code.from_labeled(code.alphabet, n - 1 if project else n, kept)
    after = code_parameters(new_code, rate_base)

    law = SpoilLaw.RESTRICT_CONSTANT_COLUMN if new_code.size == code.size else SpoilLaw.RESTRICT_LEVEL_SET
    op = SpoilOp(SpoilKind.RESTRICT, i, letter=a, projected=project)
    logger.info(f"restrict C({a},{i}): {code.size} -> {new_code.size} words")
    return new_code, SpoilReport(before, after, op, law, code.q)


def check_spoiling_law(report: SpoilReport) -> LawVerdict:
    """Recheck the after-parameters against the law of the operation; a violation is a library bug."""
    b, a, op = report.before, report.after, report.op
    problems, notes = [], []

    def expect(cond: bool, msg: str):
        if not cond:
            problems.append(msg)

    same_k = abs(a.k - b.k) <= K_TOLERANCE

    if op.kind is SpoilKind.EXTEND:
        expect(a.n == b.n + 1, f"n' = {a.n}, expected {b.n + 1}")
        expect(same_k, f"k' = {a.k:.6g}, expected k = {b.k:.6g}")
        allowed = {
            SpoilLaw.EXTEND_CONSTANT: {b.d},
            SpoilLaw.EXTEND_SEPARATING: {b.d + 1},
        }.get(report.law, {b.d, b.d + 1})
        expect(a.d in allowed, f"d' = {a.d}, expected one of {sorted(allowed)}")

    elif op.kind is SpoilKind.PROJECT:
        expect(a.n == b.n - 1, f"n' = {a.n}, expected {b.n - 1}")
        if report.law is SpoilLaw.PROJECT_COLLISION:
            expect(b.d == 1, f"words merged although d = {b.d}")
            expect(a.m < b.m, f"collision reported but #C' = {a.m} = #C")
            expect(a.d >= 1, f"d' = {a.d} < 1")
            notes.append(f"k' = {a.k:.6g} < k = {b.k:.6g} after merging words")
        else:
            expect(same_k, f"k' = {a.k:.6g}, expected k = {b.k:.6g}")
            allowed = {
                SpoilLaw.PROJECT_MINIMAL_PAIR_DIFFERS: {b.d - 1},
                SpoilLaw.PROJECT_MINIMAL_PAIRS_AGREE: {b.d},
            }.get(report.law, {b.d - 1, b.d})
            expect(a.d in allowed, f"d' = {a.d}, expected one of {sorted(allowed)}")

    elif op.kind is SpoilKind.RESTRICT:
        expected_n = b.n - 1 if op.projected else b.n
        expect(a.n == expected_n, f"n' = {a.n}, expected {expected_n}")
        expect(a.d >= b.d, f"d' = {a.d} < d = {b.d}")
        if report.law is SpoilLaw.RESTRICT_CONSTANT_COLUMN:
            expect(a.m == b.m, f"constant column but #C' = {a.m} != #C = {b.m}")
            notes.append("constant column: level set is the whole code")
        else:
            expect(a.m < b.m and a.k < b.k + K_TOLERANCE, f"k' = {a.k:.6g} not below k = {b.k:.6g}")
            # k - 1 <= k' only holds for a level set holding at least #C/q words
            if a.m * report.q >= b.m:
                floor = b.k - log_base(report.q, b.rate_base)
                expect(a.k >= floor - K_TOLERANCE, f"k' = {a.k:.6g} below k - log(q) = {floor:.6g}")
            else:
                notes.append("minority level set: lower bound on k' not applicable")

    return LawVerdict(not problems, report.law, tuple(problems), tuple(notes))
