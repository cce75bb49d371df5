"""Suffix arrays by induced sorting (SA-IS).

Worst-case O(n) time and memory; indices are int32, so texts are limited
to 2**31 - 1 symbols. The linear passes (type classification, induced
sorting, LMS naming) are numba kernels; the recursion on the reduced LMS
string stays in Python and is at most log2(n) levels deep.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .symbols import InvalidInputError, SymbolText

INDEX_DTYPE = np.int32


@dataclass(frozen=True, eq=False)
class SuffixArray:
    sa: np.ndarray
    rank: np.ndarray

    def __len__(self) -> int:
        return int(self.sa.shape[0])


@njit(cache=True)
def _classify(s, upper, ls):
    n = s.shape[0]
    ls[:] = 0  # 1 = S-type
    for i in range(n - 2, -1, -1):
        if s[i] == s[i + 1]:
            ls[i] = ls[i + 1]
        elif s[i] < s[i + 1]:
            ls[i] = 1
    sum_l = np.zeros(upper + 1, dtype=np.int32)
    sum_s = np.zeros(upper + 1, dtype=np.int32)
    for i in range(n):
        if ls[i] == 0:
            sum_s[s[i]] += 1
        else:
            sum_l[s[i] + 1] += 1
    for c in range(upper + 1):
        sum_s[c] += sum_l[c]
        if c < upper:
            sum_l[c + 1] += sum_s[c]
    return sum_l, sum_s


@njit(cache=True)
def _pack(s, ls, out):
    """``out[i] = 2 * s[i] + type(i)``: one random read yields symbol and type."""
    for i in range(s.shape[0]):
        out[i] = 2 * s[i] + ls[i]


@njit(cache=True)
def _induce(st, sum_l, sum_s, lms, sa):
    n = st.shape[0]
    sa[:] = -1
    buf = sum_s.copy()
    for d in lms:
        if d == n:
            continue
        c = st[d] >> 1
        sa[buf[c]] = d
        buf[c] += 1
    buf = sum_l.copy()
    c = st[n - 1] >> 1
    sa[buf[c]] = n - 1
    buf[c] += 1
    for i in range(n):
        v = sa[i]
        if v >= 1:
            p = st[v - 1]
            if p & 1 == 0:
                sa[buf[p >> 1]] = v - 1
                buf[p >> 1] += 1
    buf = sum_l.copy()
    for i in range(n - 1, -1, -1):
        v = sa[i]
        if v >= 1:
            p = st[v - 1]
            if p & 1 == 1:
                c = (p >> 1) + 1
                buf[c] -= 1
                sa[buf[c]] = v - 1


@njit(cache=True)
def _is_lms(ls, i):
    return i > 0 and ls[i] == 1 and ls[i - 1] == 0


@njit(cache=True)
def _name_lms(s, ls, sa, m, rec):
    """Name the induced-sorted LMS substrings; returns the reduced string and its max symbol.

    Works inside ``sa``: sorted LMS positions are packed into ``sa[:m]`` and
    the name of position p goes to ``sa[m + p // 2]`` (LMS positions are at
    least two apart), which leaves the names in text order.
    """
    n = s.shape[0]
    k = 0
    for i in range(n):
        v = sa[i]
        if _is_lms(ls, v):
            sa[k] = v
            k += 1
    sa[m:] = -1
    name = 0
    prev = -1
    for i in range(m):
        pos = sa[i]
        differs = prev < 0
        d = 0
        while not differs:
            if pos + d >= n or prev + d >= n or s[pos + d] != s[prev + d]:
                differs = True
            elif d > 0 and (_is_lms(ls, pos + d) or _is_lms(ls, prev + d)):
                differs = not (_is_lms(ls, pos + d) and _is_lms(ls, prev + d))
                break
            d += 1
        if differs:
            name += 1
            prev = pos
        sa[m + pos // 2] = name - 1
    j = 0
    for i in range(m, n):
        if sa[i] >= 0:
            rec[j] = sa[i]
            j += 1
    return name - 1


def _sais(s: np.ndarray, upper: int) -> np.ndarray:
    n = s.shape[0]
    if n == 0:
        return np.empty(0, dtype=INDEX_DTYPE)
    if n == 1:
        return np.zeros(1, dtype=INDEX_DTYPE)
    if n == 2:
        order = [0, 1] if s[0] < s[1] else [1, 0]
        return np.array(order, dtype=INDEX_DTYPE)
    # work arrays come from numpy rather than numba: numpy requests huge
    # pages for large buffers, which matters for these random accesses
    ls = np.empty(n, dtype=np.uint8)
    sum_l, sum_s = _classify(s, upper, ls)
    lms = (np.flatnonzero((ls[1:] == 1) & (ls[:-1] == 0)) + 1).astype(INDEX_DTYPE)
    st = np.empty(n, dtype=np.uint16 if upper < 1 << 15 else np.int32 if upper < 1 << 30 else np.int64)
    _pack(s, ls, st)
    sa = np.empty(n, dtype=INDEX_DTYPE)
    _induce(st, sum_l, sum_s, lms, sa)
    if lms.shape[0]:
        rec = np.empty(lms.shape[0], dtype=INDEX_DTYPE)
        rec_upper = _name_lms(s, ls, sa, lms.shape[0], rec)
        rec_sa = _sais(rec, int(rec_upper))
        _induce(st, sum_l, sum_s, lms[rec_sa], sa)
    return sa


def compact_symbols(symbols: np.ndarray, alphabet_bound: int) -> np.ndarray:
    """Symbols in the narrowest integer dtype; random reads of ``s`` dominate run time."""
    dtype = np.uint16 if alphabet_bound <= 1 << 16 else np.int32
    return np.ascontiguousarray(symbols, dtype=dtype)


def suffix_array(symbols: np.ndarray, alphabet_bound: int) -> np.ndarray:
    """Suffix array of a raw int array whose values lie in ``[0, alphabet_bound)``."""
    s = np.asarray(symbols)
    if s.size and (int(s.min()) < 0 or int(s.max()) >= alphabet_bound):
        raise InvalidInputError(f"symbol outside [0, {alphabet_bound})")
    if alphabet_bound > max(2 * s.size, 1 << 16):
        # bucket arrays scale with the alphabet; rank-reduce sparse large alphabets
        _, s = np.unique(s, return_inverse=True)
        alphabet_bound = int(s.max()) + 1 if s.size else 1
    s = compact_symbols(s, alphabet_bound)
    return _sais(s, max(alphabet_bound - 1, 0))


def build_suffix_array(text: SymbolText) -> SuffixArray:
    sa = suffix_array(text.symbols, text.alphabet_bound)
    rank = np.empty_like(sa)
    rank[sa] = np.arange(sa.shape[0], dtype=INDEX_DTYPE)
    sa.setflags(write=False)
    rank.setflags(write=False)
    return SuffixArray(sa, rank)
