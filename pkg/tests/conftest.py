import logging
from pathlib import Path

import pytest

from paramcode.codes.ingest import build_code, parse_table
from paramcode.codes.settings import BuildPolicy

FIXTURES = Path(__file__).parent.parent / "paramcode" / "fixtures"


def _read(name: str):
    return parse_table((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def romance_table():
    return _read("example1_romance.tsv")


@pytest.fixture
def romance_code(romance_table):
    return build_code(romance_table, BuildPolicy.default_for(2))


@pytest.fixture
def awb25_table():
    return _read("arabic_wolof_basque_25.tsv")


@pytest.fixture
def awb25_code(awb25_table):
    return build_code(awb25_table, BuildPolicy.default_for(2))


@pytest.fixture
def awb63_table():
    return _read("arabic_wolof_basque_63.tsv")


@pytest.fixture(autouse=True)
def restore_root_logger():
    # the CLI replaces root handlers; put pytest's back afterwards
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
