"""Compression-based edit distance.

``d(S -> T) = LZ(S + delim + T) - LZ(S + delim)``: the number of extra LZ77
phrases needed to parse the target once the source is available as a
dictionary. Subtracting ``LZ(S + delim)`` instead of ``LZ(S)`` cancels the
delimiter's own phrase, so ``d(S -> "") == 0``.

With a context text K (reference material the editor could copy from), the
dictionary becomes ``S + delim + K + delim2``. Both counts come from a
single factorization of the full concatenation; the delimiters never occur
earlier, so no phrase crosses them and the prefix count is exactly the LZ
count of the prefix.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal as TypingLiteral, Optional, Sequence

from .lz import lz_split_count
from .symbols import (
    DELIMITER,
    SECOND_DELIMITER,
    InvalidInputError,
    SymbolText,
    TextLike,
    as_symbols,
    join,
)

log = logging.getLogger(__name__)

Mode = TypingLiteral["plain", "with_context"]


@dataclass(frozen=True)
class DistanceResult:
    value: int
    lz_source: int
    lz_concat: int


@dataclass(frozen=True)
class DistancePair:
    source: TextLike
    target: TextLike
    context: Optional[TextLike] = None


@dataclass
class BatchResult:
    """Per-row outcomes in input order; failed rows are ``None`` in ``results``."""

    results: list[Optional[DistanceResult]]
    errors: dict[int, str] = field(default_factory=dict)

    def values(self) -> list[Optional[int]]:
        return [r.value if r is not None else None for r in self.results]


def _checked(text: TextLike, role: str, nfc: bool) -> SymbolText:
    sym = as_symbols(text, nfc=nfc)
    if sym.has_delimiters():
        raise InvalidInputError(f"{role} contains a reserved delimiter symbol")
    return sym


def _distance(parts: list, prefix_len: int) -> DistanceResult:
    total, before = lz_split_count(join(parts), prefix_len)
    return DistanceResult(total - before, before, total)


def compression_distance(source: TextLike, target: TextLike, nfc: bool = False) -> DistanceResult:
    s = _checked(source, "source", nfc)
    t = _checked(target, "target", nfc)
    return _distance([s, DELIMITER, t], len(s) + 1)


def compression_distance_with_context(
    context: TextLike, source: TextLike, target: TextLike, nfc: bool = False
) -> DistanceResult:
    k = _checked(context, "context", nfc)
    s = _checked(source, "source", nfc)
    t = _checked(target, "target", nfc)
    return _distance([s, DELIMITER, k, SECOND_DELIMITER, t], len(s) + len(k) + 2)


def pair_distance(pair: DistancePair, mode: Mode = "plain", nfc: bool = False) -> DistanceResult:
    if mode == "plain":
        return compression_distance(pair.source, pair.target, nfc=nfc)
    if mode == "with_context":
        if pair.context is None:
            raise InvalidInputError("with_context mode requires a context text")
        return compression_distance_with_context(pair.context, pair.source, pair.target, nfc=nfc)
    raise InvalidInputError(f"unknown mode {mode!r}")


def _row(args):
    pair, mode, nfc = args
    try:
        return pair_distance(pair, mode, nfc), None
    except (InvalidInputError, TypeError) as exc:
        return None, str(exc)


def batch_distance(
    pairs: Sequence[DistancePair], mode: Mode = "plain", jobs: int = 1, nfc: bool = False
) -> BatchResult:
    """Distances for many pairs; a failing row never aborts the batch."""
    if mode not in ("plain", "with_context"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    tasks = [(pair, mode, nfc) for pair in pairs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_row, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outcomes = [_row(t) for t in tasks]
    batch = BatchResult([r for r, _ in outcomes])
    for i, (_, err) in enumerate(outcomes):
        if err is not None:
            batch.errors[i] = err
    if batch.errors:
        log.warning("%d of %d rows failed", len(batch.errors), len(tasks))
    return batch
