"""Integer-symbol texts.

Texts are handled as arrays of integer symbols rather than raw bytes so that
delimiters can live outside the byte range (values >= 256) and can never
collide with input content.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

BYTE_BOUND = 256
DELIMITER = 256
SECOND_DELIMITER = 257
# alphabet bound for texts carrying both delimiters
FULL_BOUND = 258

SYMBOL_DTYPE = np.int32


class InvalidInputError(ValueError):
    """Input violates a documented precondition."""


@dataclass(frozen=True, eq=False)
class SymbolText:
    """Read-only sequence of non-negative integer symbols below ``alphabet_bound``."""

    symbols: np.ndarray
    alphabet_bound: int = BYTE_BOUND

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.symbols, dtype=SYMBOL_DTYPE)
        if arr.ndim != 1:
            raise InvalidInputError("symbols must be one-dimensional")
        if self.alphabet_bound < 1:
            raise InvalidInputError("alphabet_bound must be positive")
        if arr.size:
            lo, hi = int(arr.min()), int(arr.max())
            if lo < 0:
                raise InvalidInputError(f"negative symbol {lo}")
            if hi >= self.alphabet_bound:
                raise InvalidInputError(
                    f"symbol {hi} exceeds alphabet bound {self.alphabet_bound}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def from_bytes(cls, data: bytes) -> "SymbolText":
        return cls(np.frombuffer(bytes(data), dtype=np.uint8))

    @classmethod
    def from_str(cls, text: str, nfc: bool = False) -> "SymbolText":
        """UTF-8 encode ``text`` (optionally NFC-normalized first)."""
        if nfc:
            text = unicodedata.normalize("NFC", text)
        return cls.from_bytes(text.encode("utf-8"))

    @classmethod
    def from_symbols(cls, symbols: Iterable[int], alphabet_bound: int | None = None) -> "SymbolText":
        arr = np.fromiter(symbols, dtype=np.int64)
        if alphabet_bound is None:
            alphabet_bound = max(BYTE_BOUND, int(arr.max()) + 1 if arr.size else 1)
        return cls(arr, alphabet_bound)

    def __len__(self) -> int:
        return int(self.symbols.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolText):
            return NotImplemented
        return np.array_equal(self.symbols, other.symbols)

    def __hash__(self) -> int:
        return hash(self.symbols.tobytes())

    def tolist(self) -> list[int]:
        return self.symbols.tolist()

    def has_delimiters(self) -> bool:
        return bool(self.symbols.size) and int(self.symbols.max()) >= BYTE_BOUND


TextLike = Union[str, bytes, SymbolText]


def as_symbols(text: TextLike, nfc: bool = False) -> SymbolText:
    if isinstance(text, SymbolText):
        return text
    if isinstance(text, str):
        return SymbolText.from_str(text, nfc=nfc)
    if isinstance(text, (bytes, bytearray, memoryview)):
        return SymbolText.from_bytes(bytes(text))
    raise TypeError(f"cannot convert {type(text).__name__} to SymbolText")


def join(parts: Iterable[SymbolText | int]) -> SymbolText:
    """Concatenate texts and single delimiter symbols."""
    arrays = []
    for part in parts:
        if isinstance(part, SymbolText):
            arrays.append(part.symbols)
        else:
            arrays.append(np.array([part], dtype=SYMBOL_DTYPE))
    joined = np.concatenate(arrays) if arrays else np.empty(0, dtype=SYMBOL_DTYPE)
    return SymbolText(joined, FULL_BOUND)
