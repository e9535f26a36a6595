"""Parameter tables from delimiter-separated text, and codes built from them.

Table format: a header row whose first cell labels the language column and
whose remaining cells are parameter ids, then one row per language. Cells are
``+``, ``+1``, ``1`` (set, positive), ``-``, ``-1`` (set, negative), ``0``
(entailed / irrelevant) or ``?`` (missing). Blank lines and lines starting
with ``#`` are skipped. The delimiter is a tab if the header has one, else a
comma.
"""
from __future__ import annotations

import csv
import io
import logging
from typing import Iterable, Sequence

from .core import Code, LanguageRecord, ParameterTable, ParamValue, validate_table
from .errors import (
    AlphabetMismatch,
    EmptyTable,
    PolicyViolation,
    ResultEmpty,
    TableSyntaxError,
    UnknownCellValue,
    UnknownLanguage,
    UnknownParameter,
)
from .settings import BuildPolicy, CellHandling

logger = logging.getLogger(__name__)

CELL_VALUES = {
    "+": ParamValue.PLUS,
    "+1": ParamValue.PLUS,
    "1": ParamValue.PLUS,
    "-": ParamValue.MINUS,
    "-1": ParamValue.MINUS,
    "0": ParamValue.ENTAILED,
    "?": ParamValue.MISSING,
}

BINARY_LETTERS = {ParamValue.PLUS: 1, ParamValue.MINUS: 0}
TERNARY_LETTERS = {ParamValue.PLUS: 1, ParamValue.MINUS: 2, ParamValue.ENTAILED: 0, ParamValue.MISSING: 0}


def _content_lines(text: str) -> list[tuple[int, str]]:
    lines = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        lines.append((lineno, line))
    return lines


def detect_delimiter(header: str) -> str:
    return "\t" if "\t" in header else ","


def parse_table(text: str, delimiter: str | None = None) -> ParameterTable:
    text = text.lstrip("\ufeff")
    lines = _content_lines(text)
    if not lines:
        raise EmptyTable("document has no header row")

    delimiter = delimiter or detect_delimiter(lines[0][1])
    rows: list[tuple[int, list[str]]] = []
    for lineno, line in lines:
        try:
            cells = next(csv.reader([line], delimiter=delimiter, strict=True))
        except csv.Error as e:
            raise TableSyntaxError(f"line {lineno}: {e}", line=lineno) from e
        rows.append((lineno, [c.strip() for c in cells]))

    header_line, header = rows[0]
    parameter_ids = tuple(header[1:])
    if not parameter_ids:
        raise EmptyTable(f"line {header_line}: header names no parameters", line=header_line)
    for col, pid in enumerate(parameter_ids, start=2):
        if not pid:
            raise TableSyntaxError(f"line {header_line}, column {col}: empty parameter id",
                                   line=header_line, column=col)
    if len(rows) == 1:
        raise EmptyTable("table has a header but no language rows", line=header_line)

    records = []
    for lineno, cells in rows[1:]:
        name = cells[0]
        if not name:
            raise TableSyntaxError(f"line {lineno}, column 1: empty language name", line=lineno, column=1)
        values = []
        for col, cell in enumerate(cells[1:], start=2):
            if cell not in CELL_VALUES:
                raise UnknownCellValue(
                    f"line {lineno}, column {col}: unknown cell value {cell!r}",
                    line=lineno, column=col, value=cell,
                )
            values.append(CELL_VALUES[cell])
        records.append(LanguageRecord(name, tuple(values)))

    table = validate_table(ParameterTable(parameter_ids, tuple(records)))
    logger.debug(f"parsed table: {len(table.languages)} languages x {table.width} parameters")
    return table


def serialize_table(table: ParameterTable, delimiter: str = "\t", language_label: str = "language") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([language_label, *table.parameter_ids])
    for r in table.languages:
        writer.writerow([r.name, *(v.value for v in r.values)])
    return buf.getvalue()


def select(table: ParameterTable, languages: Sequence[str] | None = None,
           parameters: Sequence[str] | None = None) -> ParameterTable:
    """Sub-table in the requested order; None keeps every language / parameter."""
    by_name = {r.name: r for r in table.languages}
    names = list(languages) if languages is not None else list(by_name)
    for name in names:
        if name not in by_name:
            raise UnknownLanguage(f"unknown language {name!r}", language=name)

    index = {pid: i for i, pid in enumerate(table.parameter_ids)}
    pids = list(parameters) if parameters is not None else list(table.parameter_ids)
    for pid in pids:
        if pid not in index:
            raise UnknownParameter(f"unknown parameter {pid!r}", parameter=pid)

    cols = [index[pid] for pid in pids]
    records = tuple(LanguageRecord(n, tuple(by_name[n].values[c] for c in cols)) for n in names)
    return validate_table(ParameterTable(tuple(pids), records))


def _drop_columns(table: ParameterTable, kinds: Iterable[ParamValue]) -> tuple[ParameterTable, list[str]]:
    kinds = set(kinds)
    keep, dropped = [], []
    for i, pid in enumerate(table.parameter_ids):
        if any(v in kinds for v in table.column(i)):
            dropped.append(pid)
        else:
            keep.append(i)
    if not keep:
        raise ResultEmpty(f"all {table.width} parameter columns were dropped", dropped=len(dropped))
    records = tuple(LanguageRecord(r.name, tuple(r.values[i] for i in keep)) for r in table.languages)
    return ParameterTable(tuple(table.parameter_ids[i] for i in keep), records), dropped


def drop_entailed_columns(table: ParameterTable, drop_missing: bool = True) -> tuple[ParameterTable, list[str]]:
    """Remove every column holding an Entailed (and, if asked, Missing) cell in some language."""
    kinds = [ParamValue.ENTAILED]
    if drop_missing:
        kinds.append(ParamValue.MISSING)
    result, dropped = _drop_columns(table, kinds)
    if dropped:
        logger.info(f"dropped {len(dropped)} entailed columns, {result.width} remain")
    return result, dropped


def apply_policy(table: ParameterTable, policy: BuildPolicy) -> tuple[ParameterTable, list[str]]:
    """Apply the entailed/missing handling; returns the table to encode and the dropped ids."""
    q = policy.alphabet.q
    handling = {
        ParamValue.ENTAILED: policy.entailed_handling,
        ParamValue.MISSING: policy.missing_handling,
    }
    for kind, how in handling.items():
        if how is CellHandling.ZERO and q < 3:
            raise AlphabetMismatch(f"{kind.name.lower()} cells as letter 0 need q >= 3, got q={q}", q=q)
        if how is CellHandling.ERROR:
            for r in table.languages:
                for pid, v in zip(table.parameter_ids, r.values):
                    if v is kind:
                        raise PolicyViolation(
                            f"{r.name}: parameter {pid} is {kind.name.lower()}",
                            language=r.name, parameter=pid, value=v.value,
                        )

    to_drop = [kind for kind, how in handling.items() if how is CellHandling.DROP]
    if not to_drop:
        return table, []
    result, dropped = _drop_columns(table, to_drop)
    if dropped:
        logger.info(f"policy dropped {len(dropped)} columns ({', '.join(k.name.lower() for k in to_drop)}), {result.width} remain")
    return result, dropped


def encode_record(record: LanguageRecord, q: int) -> tuple[int, ...]:
    letters = BINARY_LETTERS if q == 2 else TERNARY_LETTERS
    try:
        return tuple(letters[v] for v in record.values)
    except KeyError as e:
        raise PolicyViolation(f"{record.name}: value {e.args[0].value!r} has no letter in F_{q}",
                              language=record.name) from None


def encode_table(encoded: ParameterTable, policy: BuildPolicy) -> Code:
    """Encode a table that already went through apply_policy."""
    q = policy.alphabet.q
    code = Code.from_labeled(
        policy.alphabet,
        encoded.width,
        ((r.name, encode_record(r, q)) for r in encoded.languages),
    )
    logger.info(f"built code over F_{q}: {code.size} words of length {code.block_length}")
    return code


def build_code(table: ParameterTable, policy: BuildPolicy) -> Code:
    """One codeword per language; languages with equal words share one codeword."""
    validate_table(table)
    encoded, _ = apply_policy(table, policy)
    return encode_table(encoded, policy)
