"""Greedy LZ77 factorization in linear time from a suffix array.

For every text position the lexicographically nearest suffixes that start
earlier in the text (previous/next smaller values over the suffix array)
are the only candidates for the longest previous factor; the phrase length
is then found by direct comparison. Comparisons are charged to the phrase
being emitted, so the walk is O(n) on top of suffix-array construction.

Copy sources are canonical: the leftmost earlier occurrence of the phrase.
All suffixes sharing the phrase as a prefix form one suffix-array interval
(bounded by LCP values below the phrase length), and its smallest text
position is the leftmost occurrence. Two segment trees answer both lookups
in O(log n) per phrase. Phrase counts never need this step.

Phrase conventions:

* copies may overlap the phrase they produce (``source + length > start``);
* a symbol with any earlier occurrence is a ``Copy`` (possibly of length 1);
  ``Literal`` is reserved for first occurrences;
* a copy points at the leftmost earlier occurrence of its phrase.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np
from numba import njit

from .suffix_array import compact_symbols, suffix_array
from .symbols import SymbolText, TextLike, as_symbols


class Literal(NamedTuple):
    symbol: int

    @property
    def length(self) -> int:
        return 1


class Copy(NamedTuple):
    source: int
    length: int


Phrase = Union[Literal, Copy]


@dataclass(frozen=True)
class LZFactorization:
    phrases: tuple[Phrase, ...]
    total_length: int

    def __len__(self) -> int:
        return len(self.phrases)

    @property
    def count(self) -> int:
        return len(self.phrases)

    def starts(self) -> list[int]:
        out, pos = [], 0
        for phrase in self.phrases:
            out.append(pos)
            pos += phrase.length
        return out


@njit(cache=True)
def _previous_candidates(sa, psv, nsv, stack):
    """For each text position, the text positions of its PSV and NSV suffixes (-1 if none)."""
    n = sa.shape[0]
    psv[:] = -1
    nsv[:] = -1
    top = 0
    for r in range(n):
        cur = sa[r]
        while top > 0 and stack[top - 1] > cur:
            nsv[stack[top - 1]] = cur
            top -= 1
        if top > 0:
            psv[cur] = stack[top - 1]
        stack[top] = cur
        top += 1


@njit(cache=True)
def _match_length(s, a, b):
    n = s.shape[0]
    k = 0
    while b + k < n and s[a + k] == s[b + k]:
        k += 1
    return k


_PAD = np.int32(2**31 - 1)


@njit(cache=True)
def _lcp_array(s, sa):
    """Kasai: lcp[r] = common prefix length of suffixes sa[r - 1] and sa[r]; lcp[0] = 0."""
    n = s.shape[0]
    rank = np.empty(n, dtype=np.int32)
    for r in range(n):
        rank[sa[r]] = r
    lcp = np.zeros(n, dtype=np.int32)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return rank, lcp


@njit(cache=True)
def _min_tree(values, pad):
    size = 1
    while size < values.shape[0]:
        size *= 2
    tree = np.full(2 * size, pad, dtype=np.int32)
    tree[size : size + values.shape[0]] = values
    for v in range(size - 1, 0, -1):
        tree[v] = min(tree[2 * v], tree[2 * v + 1])
    return tree, size


@njit(cache=True)
def _last_below(tree, size, p, bound):
    """Largest index <= p whose value is < bound, or -1."""
    v = p + size
    if tree[v] < bound:
        return p
    while v > 1:
        if v & 1 and tree[v - 1] < bound:
            v -= 1
            while v < size:
                v = 2 * v + 1 if tree[2 * v + 1] < bound else 2 * v
            return v - size
        v >>= 1
    return -1


@njit(cache=True)
def _first_below(tree, size, p, bound):
    """Smallest index >= p whose value is < bound, or -1."""
    v = p + size
    if tree[v] < bound:
        return p
    while v > 1:
        if not v & 1 and tree[v + 1] < bound:
            v += 1
            while v < size:
                v = 2 * v if tree[2 * v] < bound else 2 * v + 1
            return v - size
        v >>= 1
    return -1


@njit(cache=True)
def _range_min(tree, size, lo, hi):
    """min(values[lo:hi])."""
    out = _PAD
    lo += size
    hi += size
    while lo < hi:
        if lo & 1:
            out = min(out, tree[lo])
            lo += 1
        if hi & 1:
            hi -= 1
            out = min(out, tree[hi])
        lo >>= 1
        hi >>= 1
    return out


@njit(cache=True)
def _factorize(s, sa, psv, nsv):
    n = s.shape[0]
    rank, lcp = _lcp_array(s, sa)
    lcp_tree, size = _min_tree(lcp, _PAD)
    pos_tree, _ = _min_tree(sa, _PAD)
    sources = np.empty(n, dtype=np.int64)
    lengths = np.empty(n, dtype=np.int64)
    i = 0
    m = 0
    while i < n:
        best_len = 0
        for cand in (psv[i], nsv[i]):
            if cand >= 0:
                k = _match_length(s, cand, i)
                if k > best_len:
                    best_len = k
        if best_len == 0:
            sources[m] = -1
            lengths[m] = 1
            i += 1
        else:
            r = rank[i]
            lo = _last_below(lcp_tree, size, r, best_len)  # lcp[0] = 0 guarantees a hit
            hi = _first_below(lcp_tree, size, r + 1, best_len) if r + 1 < n else -1
            if hi < 0 or hi > n:
                hi = n
            sources[m] = _range_min(pos_tree, size, lo, hi)
            lengths[m] = best_len
            i += best_len
        m += 1
    return sources[:m], lengths[:m]


@njit(cache=True)
def _count_split(s, psv, nsv, split):
    """Total phrase count and the number of phrases starting before ``split``."""
    n = s.shape[0]
    i = 0
    total = 0
    before = 0
    while i < n:
        best_len = 0
        for cand in (psv[i], nsv[i]):
            if cand >= 0:
                k = _match_length(s, cand, i)
                if k > best_len:
                    best_len = k
        if i < split:
            before += 1
        total += 1
        i += best_len if best_len > 0 else 1
    return total, before


def _prepare(text: SymbolText):
    s = compact_symbols(text.symbols, text.alphabet_bound)
    sa = suffix_array(s, text.alphabet_bound)
    psv, nsv, stack = (np.empty(len(s), dtype=np.int32) for _ in range(3))
    _previous_candidates(sa, psv, nsv, stack)
    return s, sa, psv, nsv


def factorize_arrays(text: TextLike) -> tuple[np.ndarray, np.ndarray]:
    """Phrases as parallel ``(sources, lengths)`` arrays; source -1 marks a literal."""
    text = as_symbols(text)
    if len(text) == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return _factorize(*_prepare(text))


def lz_factorize(text: TextLike) -> LZFactorization:
    text = as_symbols(text)
    sources, lengths = factorize_arrays(text)
    symbols = text.symbols
    phrases: list[Phrase] = []
    pos = 0
    for src, length in zip(sources.tolist(), lengths.tolist()):
        if src < 0:
            phrases.append(Literal(int(symbols[pos])))
        else:
            phrases.append(Copy(src, length))
        pos += length
    return LZFactorization(tuple(phrases), pos)


def lz_phrase_count(text: TextLike) -> int:
    return lz_split_count(text, 0)[0]


def lz_split_count(text: TextLike, split: int) -> tuple[int, int]:
    """``(LZ(text), number of phrases starting before position split)``.

    Phrases never straddle a symbol that has no earlier occurrence, so when
    ``text[split - 1]`` is a fresh delimiter the second value equals
    ``LZ(text[:split])``.
    """
    text = as_symbols(text)
    if len(text) == 0:
        return 0, 0
    s, _, psv, nsv = _prepare(text)
    total, before = _count_split(s, psv, nsv, split)
    return int(total), int(before)


def decode(phrases: Sequence[Phrase]) -> list[int]:
    out: list[int] = []
    for phrase in phrases:
        if isinstance(phrase, Literal):
            out.append(phrase.symbol)
        else:
            for k in range(phrase.length):
                out.append(out[phrase.source + k])
    return out
