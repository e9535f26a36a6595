from abc import ABC, abstractmethod
from typing import Optional

from paramcode.codes.core import Code, Codeword


class SpoilFunction(ABC):
    """A map f: C -> F_q used to insert one dependent letter into every word."""

    @abstractmethod
    def letter_for(self, word: Codeword) -> Optional[int]:
        """Letter for ``word``, or None when the function is not defined on it."""
        pass

    @abstractmethod
    def get_tag(self) -> str:
        """Short descriptor recorded in spoil reports."""
        pass

    def is_constant_on(self, code: Code) -> bool:
        return len({self.letter_for(w) for w in code.words}) <= 1
