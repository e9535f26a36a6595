#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

# Ensure module path is accessible
sys.path.append(str(Path(__file__).parent.parent))

from paramcode.codes.commands import COMMANDS
from paramcode.codes.errors import InvalidConfig, ParamCodeError
from paramcode.codes.settings import Settings

DEFAULT_CONFIG = Path(__file__).parent / 'param_codes_config.yml'
OUTPUT_DIR_ENV = 'PARAMCODE_OUTPUT_DIR'
SCHEMA_VERSION = 1


def _add_table_flags(p: argparse.ArgumentParser):
    p.add_argument('table', type=str, help='Parameter table (TSV or CSV)')
    p.add_argument('--delimiter', choices=['tab', 'comma'], default=None, help='Override delimiter detection')
    p.add_argument('--languages', type=str, default=None, help='Comma-separated languages to keep, in order')
    p.add_argument('--parameters', type=str, default=None, help='Comma-separated parameter ids to keep, in order')
    p.add_argument('--alphabet', type=int, choices=[2, 3], default=None, help='Alphabet size q')
    p.add_argument('--rate-base', choices=['q', '2'], default=None, help='Logarithm base of k and R')
    p.add_argument('--entailed', choices=['drop', 'zero', 'error'], default=None, help='Entailed cell handling')
    p.add_argument('--missing', choices=['drop', 'zero', 'error'], default=None, help='Missing cell handling')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Syntactic parameter tables as error-correcting codes')
    parser.add_argument('--config', type=str, default=None, help='Config file path')
    parser.add_argument('--log-dir', type=str, default=None, help='Log directory (console only when unset)')
    parser.add_argument('--log-level', type=str, default=None, help='Log level')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', help='Code parameters, bound position and distances of a family')
    _add_table_flags(p)
    p.add_argument('--family', type=str, default=None, help='Family name (default: file stem)')
    p.add_argument('--format', choices=['json'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('distances', help='Distance matrix of a family')
    _add_table_flags(p)
    p.add_argument('--normalization', choices=['hamming', 'logua'], default='hamming')
    p.add_argument('--relative', action='store_true', help='Relative instead of absolute distances in CSV')
    p.add_argument('--format', choices=['json', 'csv'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('classify', help='Position of a raw (delta, R) point')
    p.add_argument('--delta', type=Fraction, required=True, help='Relative minimum distance, e.g. 13/25 or 0.52')
    p.add_argument('--rate', type=float, required=True, help='Transmission rate R')
    p.add_argument('--alphabet', type=int, default=None, help='Alphabet size q')
    p.add_argument('--n', type=int, default=None, help='Block length, enables the 1/n Singleton slack')
    p.add_argument('--format', choices=['json'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('spoil', help='Apply one spoiling operation')
    _add_table_flags(p)
    p.add_argument('--kind', choices=['extend', 'project', 'restrict'], required=True)
    p.add_argument('--position', type=int, required=True, help='1-based position i')
    p.add_argument('--letter', type=int, default=None, help='Letter a for restrict')
    p.add_argument('--project', action='store_true', help='Restrict, then remove position i')
    p.add_argument('--function', choices=['constant-0', 'constant-1', 'parity', 'table'], default='constant-0')
    p.add_argument('--function-table', type=str, default=None, help='YAML mapping language -> letter')
    p.add_argument('--format', choices=['json'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('sample', help='Shannon random code ensemble')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--alphabet', type=int, default=None)
    p.add_argument('--trials', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--rate-base', choices=['q', '2'], default=None)
    p.add_argument('--format', choices=['json', 'csv'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('enumerate', help='Every code of m words in F_q^n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--alphabet', type=int, default=None)
    p.add_argument('--cap', type=int, default=None)
    p.add_argument('--rate-base', choices=['q', '2'], default=None)
    p.add_argument('--format', choices=['json', 'csv'], default=None)
    p.add_argument('--output', type=str, default=None)

    p = sub.add_parser('bounds-curve', help='Sampled GV, Hamming, Singleton and Plotkin curves')
    p.add_argument('--alphabet', type=int, default=None)
    p.add_argument('--samples', type=int, default=101)
    p.add_argument('--format', choices=['json', 'csv'], default=None)
    p.add_argument('--output', type=str, default=None)
    return parser


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == 'spoil':
        if args.kind == 'restrict' and args.letter is None:
            parser.error('spoil --kind restrict needs --letter')
        if args.function == 'table' and not args.function_table:
            parser.error('--function table needs --function-table')
    return args


def load_config(path):
    """Read the YAML config; None means no --config and no default file."""
    explicit = path is not None
    path = Path(path) if path else DEFAULT_CONFIG
    if not path.exists():
        if explicit:
            raise InvalidConfig(f"Config file {path} not found", path=str(path))
        return None
    try:
        with open(path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise InvalidConfig(f"Error loading config {path}: {e}", path=str(path)) from None
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise InvalidConfig(f"Config file {path} must hold a mapping, got {type(config).__name__}", path=str(path))
    return config


def setup_logging(log_dir=None, level='INFO'):
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s', datefmt='%Y-%m-%d %H:%M:%S')
    handlers = [logging.StreamHandler()]

    if log_dir is not None:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        log_file = log_dir / "param_codes.log"
        handlers.append(TimedRotatingFileHandler(str(log_file), when="midnight", interval=1, backupCount=30, encoding="utf-8"))

    for handler in handlers:
        handler.setFormatter(formatter)

    root = logging.getLogger()
    root.handlers.clear()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    return logging.getLogger(__name__)


def write_output(text: str, output, default_name: str):
    """--output wins, then $PARAMCODE_OUTPUT_DIR/<default_name>, else stdout."""
    if output is None and os.environ.get(OUTPUT_DIR_ENV):
        output = Path(os.environ[OUTPUT_DIR_ENV]) / default_name
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    return path


def _report_error(kind: str, message: str, **details) -> None:
    payload = {"schema_version": SCHEMA_VERSION, "error": kind, "message": message, **details}
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")


def main(argv=None) -> int:
    load_dotenv()
    args = parse_args(argv)

    try:
        config = load_config(args.config)
        settings = Settings.from_config(config or {})
    except InvalidConfig as e:
        details = e.details()
        _report_error(details.pop("error"), details.pop("message"), **details)
        return 2
    except ValidationError as e:
        _report_error("InvalidConfig", str(e))
        return 2
    except OSError as e:
        _report_error("IOError", str(e))
        return 1

    logger = setup_logging(args.log_dir or settings.logging.dir, args.log_level or settings.logging.level)
    if config is None:
        logger.info(f"Config file {DEFAULT_CONFIG} not found, using defaults")

    try:
        text, default_name = COMMANDS[args.command](args, settings)
        path = write_output(text, getattr(args, 'output', None), default_name)
        if path is not None:
            logger.info(f"wrote {path}")
        return 0
    except ParamCodeError as e:
        logger.error(f"{args.command} failed: {e}")
        details = e.details()
        _report_error(details.pop("error"), details.pop("message"), **details)
        return 2
    except ValidationError as e:
        logger.error(f"{args.command} failed: {e}")
        _report_error("InvalidConfig", str(e))
        return 2
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        _report_error("IOError", str(e))
        return 1
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        _report_error(type(e).__name__, str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
