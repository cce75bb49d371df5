"""Reference metrics: Levenshtein, sentence BLEU, ROUGE-L and TER.

Word-level metrics tokenize by whitespace with case and punctuation kept.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Literal, Sequence, Union

from rapidfuzz.distance import Levenshtein as _rf_levenshtein

SIMILARITY = "higher-is-more-similar"
DIFFERENCE = "higher-is-more-different"

METRIC_NAMES = ("compression", "levenshtein", "bleu", "rouge_l", "ter")

TER_MAX_SHIFT = 10


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    source_text: str = ""

    @classmethod
    def from_text(cls, text: str) -> "TokenSequence":
        return cls(tuple(text.split()), text)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class MetricValue:
    name: str
    value: float
    orientation: Literal["higher-is-more-similar", "higher-is-more-different"]


Tokens = Union[str, TokenSequence, Sequence[str]]


def _tokens(x: Tokens) -> tuple[str, ...]:
    if isinstance(x, TokenSequence):
        return x.tokens
    if isinstance(x, str):
        return tuple(x.split())
    return tuple(x)


def levenshtein(a: str, b: str) -> MetricValue:
    """Unit-cost character edit distance over Unicode code points."""
    return MetricValue("levenshtein", float(_rf_levenshtein.distance(a, b)), DIFFERENCE)


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def bleu(candidate: Tokens, reference: Tokens, max_order: int = 4) -> MetricValue:
    """Sentence BLEU with floor smoothing.

    A zero clipped match count at order n is replaced by 1 / (2 * c_n), where
    c_n is the number of candidate n-grams. Orders the candidate is too short
    to contain are left out of the geometric mean. Empty candidate scores 0.
    """
    cand, ref = _tokens(candidate), _tokens(reference)
    if not cand:
        return MetricValue("bleu", 0.0, SIMILARITY)
    log_sum = 0.0
    orders = 0
    for n in range(1, max_order + 1):
        total = len(cand) - n + 1
        if total <= 0:
            break
        c_counts, r_counts = _ngrams(cand, n), _ngrams(ref, n)
        matches = sum(min(c, r_counts[g]) for g, c in c_counts.items())
        numerator = matches if matches > 0 else 1.0 / (2 * total)
        log_sum += math.log(numerator / total)
        orders += 1
    score = math.exp(log_sum / orders)
    c, r = len(cand), len(ref)
    if c < r:
        score *= math.exp(1 - r / c)
    return MetricValue("bleu", min(score, 1.0), SIMILARITY)


def _lcs_length(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Tokens, reference: Tokens) -> MetricValue:
    """LCS F1 (beta = 1). Two empty sequences score 1 by convention."""
    cand, ref = _tokens(candidate), _tokens(reference)
    if not cand and not ref:
        return MetricValue("rouge_l", 1.0, SIMILARITY)
    lcs = _lcs_length(cand, ref)
    if lcs == 0:
        return MetricValue("rouge_l", 0.0, SIMILARITY)
    p, r = lcs / len(cand), lcs / len(ref)
    return MetricValue("rouge_l", 2 * p * r / (p + r), SIMILARITY)


def _edit_table(hyp: Sequence, ref: Sequence) -> list[list[int]]:
    rows = [list(range(len(ref) + 1))]
    for i, h in enumerate(hyp, 1):
        prev = rows[-1]
        cur = [i]
        for j, r in enumerate(ref, 1):
            cur.append(min(prev[j - 1] + (h != r), prev[j] + 1, cur[j - 1] + 1))
        rows.append(cur)
    return rows


def word_edit_distance(hyp: Sequence, ref: Sequence) -> int:
    return _rf_levenshtein.distance(list(hyp), list(ref))


def _alignment(hyp: Sequence, ref: Sequence) -> tuple[list[int], list[bool], list[bool]]:
    """Backtrace one optimal alignment.

    Returns, per hyp word, the ref index it is matched or substituted with
    (-1 when inserted), plus exact-match flags for hyp and ref words.
    """
    table = _edit_table(hyp, ref)
    h2r = [-1] * len(hyp)
    hyp_ok = [False] * len(hyp)
    ref_ok = [False] * len(ref)
    i, j = len(hyp), len(ref)
    while i > 0 or j > 0:
        if i > 0 and j > 0 and table[i][j] == table[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            h2r[i - 1] = j - 1
            if hyp[i - 1] == ref[j - 1]:
                hyp_ok[i - 1] = ref_ok[j - 1] = True
            i, j = i - 1, j - 1
        elif i > 0 and table[i][j] == table[i - 1][j] + 1:
            i -= 1
        else:
            j -= 1
    return h2r, hyp_ok, ref_ok


def _shift(words: list, start: int, length: int, dest: int) -> list:
    """Move ``words[start:start+length]`` so it begins at ``dest`` of the remaining list."""
    block = words[start : start + length]
    rest = words[:start] + words[start + length :]
    return rest[:dest] + block + rest[dest:]


def _best_shift(hyp: list, ref: list, current: int):
    h2r, hyp_ok, ref_ok = _alignment(hyp, ref)
    # hyp insertion points that land a block just after ref word j-1
    after_ref: dict[int, set[int]] = {}
    for hi, rj in enumerate(h2r):
        if rj >= 0:
            after_ref.setdefault(rj + 1, set()).add(hi + 1)
            after_ref.setdefault(rj, set()).add(hi)
    after_ref.setdefault(0, set()).add(0)
    ref_index: dict[tuple, list[int]] = {}
    for length in range(1, min(TER_MAX_SHIFT, len(ref)) + 1):
        for j in range(len(ref) - length + 1):
            ref_index.setdefault(tuple(ref[j : j + length]), []).append(j)

    best = None
    best_gain = 0
    for start in range(len(hyp)):
        for length in range(1, min(TER_MAX_SHIFT, len(hyp) - start) + 1):
            if all(hyp_ok[start : start + length]):
                continue
            for j in ref_index.get(tuple(hyp[start : start + length]), ()):
                if all(ref_ok[j : j + length]):
                    continue
                for point in sorted(after_ref.get(j, ())):
                    if start <= point <= start + length:
                        continue
                    dest = point - length if point > start else point
                    moved = _shift(hyp, start, length, dest)
                    gain = current - word_edit_distance(moved, ref)
                    if gain > best_gain:
                        best_gain, best = gain, moved
    return best, best_gain


def ter(hypothesis: Tokens, reference: Tokens) -> MetricValue:
    """Translation edit rate with greedy block shifts.

    Shifts are applied while some shift lowers the word edit distance; each
    costs one edit. Blocks are at most 10 words and must match a reference
    span exactly. An empty reference scores ``len(hypothesis)``.
    """
    hyp_words, ref_words = _tokens(hypothesis), _tokens(reference)
    if not ref_words:
        return MetricValue("ter", float(len(hyp_words)), DIFFERENCE)
    vocab: dict[str, int] = {}
    hyp = [vocab.setdefault(w, len(vocab)) for w in hyp_words]
    ref = [vocab.setdefault(w, len(vocab)) for w in ref_words]
    current = word_edit_distance(hyp, ref)
    shifts = 0
    while current > 0:
        moved, gain = _best_shift(hyp, ref, current)
        if moved is None:
            break
        hyp = moved
        current -= gain
        shifts += 1
    return MetricValue("ter", (current + shifts) / len(ref), DIFFERENCE)
