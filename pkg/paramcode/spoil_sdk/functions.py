from typing import Mapping, Optional

from paramcode.codes.core import Codeword
from .base import SpoilFunction


class ConstantFunction(SpoilFunction):
    def __init__(self, letter: int):
        self.letter = int(letter)

    def letter_for(self, word: Codeword) -> Optional[int]:
        return self.letter

    def get_tag(self) -> str:
        return f"constant-{self.letter}"


class ParityFunction(SpoilFunction):
    """Sum of the letters of the word modulo q."""

    def __init__(self, q: int = 2):
        self.q = q

    def letter_for(self, word: Codeword) -> Optional[int]:
        return sum(word.letters) % self.q

    def get_tag(self) -> str:
        return "parity"


class TableFunction(SpoilFunction):
    """User supplied values, keyed by language name or by the word spelled as digits."""

    def __init__(self, table: Mapping, name: str = "table"):
        self.table = {str(k): int(v) for k, v in table.items()}
        self.name = name

    def letter_for(self, word: Codeword) -> Optional[int]:
        if word.label in self.table:
            return self.table[word.label]
        return self.table.get(str(word))

    def get_tag(self) -> str:
        return f"table:{self.name}"
