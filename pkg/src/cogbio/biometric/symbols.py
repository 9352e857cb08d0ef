"""Response symbol alphabets: the mapping between Z_d and drawable symbols."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParamError

EASY_WORDS = ("zero", "one", "two", "three", "four")
COMPLEX_WORDS = ("xman", "bmwz", "quak", "hurt", "fogy")


@dataclass(frozen=True)
class SymbolSet:
    """Bijection between response values 0..d-1 and symbol names."""
    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ParamError("symbol names must be distinct")
        if not self.names:
            raise ParamError("symbol set is empty")

    @property
    def d(self) -> int:
        return len(self.names)

    def symbol_for(self, response: int) -> str:
        if not 0 <= response < self.d:
            raise ParamError(f"response {response} outside Z_{self.d}")
        return self.names[response]

    def response_for(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParamError(f"unknown symbol {name!r}") from None


def default_symbols(d: int) -> SymbolSet:
    """Hard-to-mimic four-letter words for d=5, generated names otherwise."""
    if d == 5:
        return SymbolSet(names=COMPLEX_WORDS)
    return SymbolSet(names=tuple(f"glyph{i}" for i in range(d)))
