"""Subcommand implementations. Each returns (text, default file name)."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
from pathlib import Path
from typing import Optional

import yaml

from paramcode.spoil_sdk import get_spoil_function
from .bounds import CodePoint, classify, emit_bound_curves
from .core import ParameterTable
from .ensemble import EnsembleConfig, PointCloud, enumerate_codes, sample_srce
from .ingest import build_code, parse_table, select, serialize_table
from .metrics import distance_matrix, logua_matrix
from .report import analyze_table
from .settings import BuildPolicy, Settings
from .spoiling import check_spoiling_law, spoil_extend, spoil_project, spoil_restrict

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DELIMITERS = {"tab": "\t", "comma": ","}


def _split(value: Optional[str]) -> Optional[list[str]]:
    if value is None:
        return None
    return [part.strip() for part in value.split(",") if part.strip()]


def _rate_base(args: argparse.Namespace, settings: Settings):
    raw = getattr(args, "rate_base", None) or settings.analysis.rate_base
    return raw if raw == "q" else int(raw)


def _alphabet(args: argparse.Namespace, settings: Settings) -> int:
    return getattr(args, "alphabet", None) or settings.analysis.alphabet


def _policy(args: argparse.Namespace, settings: Settings) -> BuildPolicy:
    return BuildPolicy.default_for(
        _alphabet(args, settings),
        getattr(args, "entailed", None) or settings.analysis.entailed,
        getattr(args, "missing", None) or settings.analysis.missing,
    )


def _format(args: argparse.Namespace, settings: Settings, default: str) -> str:
    return getattr(args, "format", None) or settings.output.format or default


def _dumps(payload: dict, settings: Settings) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=settings.output.indent) + "\n"


def load_table(args: argparse.Namespace) -> tuple[ParameterTable, dict]:
    """Read, parse and select; returns the table and the provenance of that step."""
    path = Path(args.table)
    raw = path.read_bytes()
    delimiter = DELIMITERS.get(getattr(args, "delimiter", None) or "")
    table = parse_table(raw.decode("utf-8"), delimiter)
    languages, parameters = _split(args.languages), _split(args.parameters)
    table = select(table, languages, parameters)
    logger.info(f"loaded {path}: {len(table.languages)} languages x {table.width} parameters")
    provenance = {
        "table": str(path),
        "table_sha256": hashlib.sha256(raw).hexdigest(),
        "delimiter": getattr(args, "delimiter", None),
        "languages": languages,
        "parameters": parameters,
    }
    return table, provenance


def run_analyze(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    table, provenance = load_table(args)
    policy = _policy(args, settings)
    rate_base = _rate_base(args, settings)
    family = args.family or Path(args.table).stem
    inputs = {
        **provenance,
        "alphabet": policy.alphabet.q,
        "rate_base": rate_base,
        "entailed": policy.entailed_handling.value,
        "missing": policy.missing_handling.value,
        "singleton_slack": settings.analysis.singleton_slack,
        "tolerance": settings.analysis.tolerance,
        "indent": settings.output.indent,
        "timezone": settings.output.timezone,
    }
    report = analyze_table(
        table, policy, family, inputs,
        rate_base=rate_base,
        singleton_slack=settings.analysis.singleton_slack,
        tolerance=settings.analysis.tolerance,
        timezone=settings.output.timezone,
    )
    return report.to_json(settings.output.indent), f"analyze-{family}.json"


def run_distances(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    table, _ = load_table(args)
    fmt = _format(args, settings, "csv")
    stem = Path(args.table).stem
    if args.normalization == "logua":
        matrix = logua_matrix(table)
        text = matrix.to_csv() if fmt == "csv" else _dumps(matrix.as_dict(), settings)
    else:
        matrix = distance_matrix(build_code(table, _policy(args, settings)))
        text = matrix.to_csv(relative=args.relative) if fmt == "csv" else _dumps(matrix.as_dict(), settings)
    return text, f"distances-{stem}-{args.normalization}.{fmt}"


def run_classify(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    q = _alphabet(args, settings)
    point = CodePoint(args.delta, args.rate, q, args.n)
    result = classify(point, settings.analysis.singleton_slack, settings.analysis.tolerance)
    payload = {
        "point": {"delta": str(point.delta), "R": point.rate, "q": q, "n": args.n},
        **result.as_dict(),
    }
    return _dumps(payload, settings), "classify.json"


def _function_config(args: argparse.Namespace, q: int) -> dict:
    config = {"function": args.function, "q": q}
    if args.function_table:
        path = Path(args.function_table)
        with open(path, "r", encoding="utf-8") as f:
            config["table"] = yaml.safe_load(f)
        config["name"] = path.stem
    return config


def run_spoil(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    table, provenance = load_table(args)
    policy = _policy(args, settings)
    rate_base = _rate_base(args, settings)
    code = build_code(table, policy)

    if args.kind == "extend":
        f = get_spoil_function(_function_config(args, policy.alphabet.q))
        new_code, report = spoil_extend(code, args.position, f, rate_base)
    elif args.kind == "project":
        new_code, report = spoil_project(code, args.position, rate_base)
    else:
        new_code, report = spoil_restrict(code, args.position, args.letter, args.project, rate_base)

    verdict = check_spoiling_law(report)
    if not verdict.ok:
        logger.error(f"spoiling law violated: {'; '.join(verdict.violations)}")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "inputs": {**provenance, **policy.as_dict(), "rate_base": rate_base},
        "report": report.as_dict(),
        "law_check": verdict.as_dict(),
        "code": {
            "block_length": new_code.block_length,
            "languages": list(new_code.label_map),
            "words": {name: str(w) for name, w in new_code.label_map.items()},
        },
    }
    if args.kind == "restrict":
        payload["subfamily_table"] = serialize_table(select(table, list(new_code.label_map)))
    return _dumps(payload, settings), f"spoil-{Path(args.table).stem}-{args.kind}{args.position}.json"


def run_sample(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    seed = args.seed if args.seed is not None else settings.ensemble.seed
    config = EnsembleConfig(
        n=args.n, m=args.m, q=_alphabet(args, settings),
        trials=args.trials or settings.ensemble.trials,
        seed=seed, rate_base=_rate_base(args, settings),
    )
    trials = sample_srce(config, progress=settings.ensemble.progress)
    fmt = _format(args, settings, "csv")
    if fmt == "csv":
        text = PointCloud.from_trials(config, trials).to_csv()
    else:
        rows = []
        for i, t in enumerate(trials):
            p = t.parameters
            rows.append({
                "trial": i,
                "redraws": t.redraws,
                "d": p.d,
                "delta": str(p.delta),
                "R": p.rate,
                "mean_distance": sum(p.distance_multiset) / len(p.distance_multiset),
            })
        text = _dumps({"schema_version": SCHEMA_VERSION, "config": config.model_dump(), "trials": rows}, settings)
    return text, f"sample-n{config.n}-m{config.m}-q{config.q}-seed{config.seed}.{fmt}"


def run_enumerate(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    q = _alphabet(args, settings)
    cloud = enumerate_codes(
        args.n, args.m, q,
        cap=args.cap or settings.enumeration.cap,
        rate_base=_rate_base(args, settings),
        progress=settings.ensemble.progress,
    )
    fmt = _format(args, settings, "csv")
    text = cloud.to_csv() if fmt == "csv" else _dumps(cloud.as_dict(), settings)
    return text, f"enumerate-n{args.n}-m{args.m}-q{q}.{fmt}"


def run_curves(args: argparse.Namespace, settings: Settings) -> tuple[str, str]:
    q = _alphabet(args, settings)
    curves = emit_bound_curves(q, args.samples)
    fmt = _format(args, settings, "csv")
    text = curves.to_csv() if fmt == "csv" else _dumps(curves.as_dict(), settings)
    return text, f"bounds-q{q}.{fmt}"


COMMANDS = {
    "analyze": run_analyze,
    "distances": run_distances,
    "classify": run_classify,
    "spoil": run_spoil,
    "sample": run_sample,
    "enumerate": run_enumerate,
    "bounds-curve": run_curves,
}
