from .base import SpoilFunction
from .functions import ConstantFunction, ParityFunction, TableFunction


def get_spoil_function(config: dict) -> SpoilFunction:
    kind = config.get('function', 'constant-0')

    if kind in ('constant-0', 'constant-1'):
        return ConstantFunction(int(kind[-1]))
    if kind == 'parity':
        return ParityFunction(q=config.get('q', 2))
    if kind == 'table':
        table = config.get('table')
        if not table:
            raise ValueError("function 'table' needs a non-empty table of language -> letter")
        return TableFunction(table, name=config.get('name', 'table'))
    # Add other spoil functions here
    raise ValueError(f"unknown spoil function {kind!r}")
