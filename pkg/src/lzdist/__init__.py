"""Compression-based edit distance for measuring post-editing effort."""
from .baselines import bleu, levenshtein, rouge_l, ter
from .distance import (
    DistancePair,
    DistanceResult,
    batch_distance,
    compression_distance,
    compression_distance_with_context,
)
from .lz import Copy, Literal, LZFactorization, lz_factorize, lz_phrase_count
from .suffix_array import build_suffix_array
from .symbols import InvalidInputError, SymbolText

__all__ = [
    "Copy",
    "DistancePair",
    "DistanceResult",
    "InvalidInputError",
    "LZFactorization",
    "Literal",
    "SymbolText",
    "batch_distance",
    "bleu",
    "build_suffix_array",
    "compression_distance",
    "compression_distance_with_context",
    "levenshtein",
    "lz_factorize",
    "lz_phrase_count",
    "rouge_l",
    "ter",
]
