from __future__ import annotations

from typing import Any


class ParamCodeError(ValueError):
    """Base class for every error raised by the paramcode library."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = {k: v for k, v in context.items() if v is not None}

    def details(self) -> dict:
        return {"error": type(self).__name__, "message": self.message, **self.context}


# Table validation
class TableViolation(ParamCodeError):
    pass


class DuplicateLanguage(TableViolation):
    pass


class DuplicateParameter(TableViolation):
    pass


class RaggedRow(TableViolation):
    pass


class EmptyTable(TableViolation):
    pass


class InvalidTable(ParamCodeError):
    """Raised by validate_table with every violation found, not just the first."""

    def __init__(self, violations: list[TableViolation]):
        summary = "; ".join(v.message for v in violations)
        super().__init__(f"invalid parameter table: {summary}")
        self.violations = list(violations)

    @property
    def kinds(self) -> set[type]:
        return {type(v) for v in self.violations}

    def details(self) -> dict:
        base = super().details()
        base["violations"] = [v.details() for v in self.violations]
        return base


# Parsing and selection
class TableSyntaxError(ParamCodeError):
    pass


class UnknownCellValue(ParamCodeError):
    pass


class UnknownLanguage(ParamCodeError):
    pass


class UnknownParameter(ParamCodeError):
    pass


class ResultEmpty(ParamCodeError):
    pass


# Code construction
class PolicyViolation(ParamCodeError):
    pass


class AlphabetMismatch(ParamCodeError):
    pass


class InvalidCodeword(ParamCodeError):
    pass


# Metrics and bounds
class LengthMismatch(ParamCodeError):
    pass


class TooFewWords(ParamCodeError):
    pass


class NoSharedParameters(ParamCodeError):
    pass


class DomainError(ParamCodeError):
    pass


# Spoiling
class PositionOutOfRange(ParamCodeError):
    pass


class PartialFunction(ParamCodeError):
    pass


class TooShort(ParamCodeError):
    pass


class DegenerateResult(ParamCodeError):
    pass


class EmptyLevelSet(ParamCodeError):
    pass


class SingletonLevelSet(ParamCodeError):
    pass


# Configuration
class InvalidConfig(ParamCodeError):
    pass


# Ensemble
class InfeasibleConfig(ParamCodeError):
    pass


class CapExceeded(ParamCodeError):
    def __init__(self, message: str, required: int, cap: int):
        super().__init__(message, required=required, cap=cap)
        self.required = required
        self.cap = cap
