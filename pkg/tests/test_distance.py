import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzdist.distance import (
    DistancePair,
    batch_distance,
    compression_distance,
    compression_distance_with_context,
)
from lzdist.lz import lz_phrase_count
from lzdist.symbols import DELIMITER, SECOND_DELIMITER, InvalidInputError, SymbolText

from oracles import naive_lz


def oracle_distance(s: bytes, t: bytes, k: bytes | None = None) -> int:
    prefix = list(s) + [DELIMITER]
    if k is not None:
        prefix += list(k) + [SECOND_DELIMITER]
    return len(naive_lz(prefix + list(t))) - len(naive_lz(prefix))


def rand_bytes(rng, lo, hi, alphabet=b"abcd"):
    return bytes(rng.choice(list(alphabet), int(rng.integers(lo, hi))).tolist())


def test_empty_source_reduces_to_lz_of_target():
    assert compression_distance("", "ababab").value == 3


def test_ab_to_abab():
    r = compression_distance("ab", "abab")
    assert (r.lz_source, r.lz_concat, r.value) == (3, 5, 2)


def test_identity_is_one_phrase():
    rng = np.random.default_rng(0)
    for _ in range(100):
        s = rand_bytes(rng, 1, 200)
        assert compression_distance(s, s).value == 1 == oracle_distance(s, s)


def test_empty_target_is_zero():
    assert compression_distance("anything", "").value == 0
    assert compression_distance("", "").value == 0


def test_context_examples():
    assert compression_distance_with_context("xyz", "ab", "abxyz").value == 2
    rng = np.random.default_rng(1)
    for _ in range(100):
        k = rand_bytes(rng, 1, 100, b"wxyz")
        s = rand_bytes(rng, 0, 100, b"abcd")
        assert compression_distance_with_context(k, s, k).value == 1


def test_empty_context_matches_plain():
    rng = np.random.default_rng(2)
    for _ in range(100):
        s, t = rand_bytes(rng, 0, 60), rand_bytes(rng, 0, 60)
        assert compression_distance_with_context(b"", s, t).value == compression_distance(s, t).value


def test_agrees_with_oracle():
    rng = np.random.default_rng(3)
    for _ in range(300):
        s, t, k = rand_bytes(rng, 0, 80), rand_bytes(rng, 0, 80), rand_bytes(rng, 0, 80)
        plain = compression_distance(s, t)
        assert plain.value == oracle_distance(s, t)
        assert plain.lz_source == len(naive_lz(list(s) + [DELIMITER]))
        assert compression_distance_with_context(k, s, t).value == oracle_distance(s, t, k)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=120), st.binary(max_size=120))
def test_non_negative_and_zero_iff_empty(s, t):
    d = compression_distance(s, t)
    assert d.value >= 0
    assert d.value == d.lz_concat - d.lz_source
    assert (d.value == 0) == (len(t) == 0)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=80), st.binary(max_size=80), st.binary(max_size=80))
def test_context_never_increases_distance(k, s, t):
    assert compression_distance_with_context(k, s, t).value <= compression_distance(s, t).value


def test_asymmetry_fixture():
    s = "the quick brown fox jumps over the lazy dog"
    t = "lazy dog"
    forward = compression_distance(s, t).value
    backward = compression_distance(t, s).value
    assert forward == oracle_distance(s.encode(), t.encode()) == 1
    assert backward == oracle_distance(t.encode(), s.encode())
    assert forward != backward


def test_block_swap_small():
    rng = np.random.default_rng(4)
    for n in (64, 100, 257, 1000):
        s = rand_bytes(rng, n, n + 1, b"abcdefghijklmnopqrstuvwxyz")
        a, b = s[: n // 2], s[n // 2 :]
        assert compression_distance(a + b, b + a).value <= 2


def test_delimiters_rejected():
    bad = SymbolText.from_symbols([97, DELIMITER], alphabet_bound=258)
    with pytest.raises(InvalidInputError):
        compression_distance(bad, "a")
    with pytest.raises(InvalidInputError):
        compression_distance_with_context(bad, "a", "b")


def test_utf8_bytes_and_nfc():
    composed, decomposed = "café", "café"
    assert compression_distance(composed, decomposed).value > 1
    assert compression_distance(composed, decomposed, nfc=True).value == 1


def test_batch_empty_and_single():
    assert batch_distance([]).results == []
    only = batch_distance([DistancePair("abc", "abd")])
    assert only.results == [compression_distance("abc", "abd")]


def test_batch_matches_loop_and_isolates_errors():
    rng = np.random.default_rng(5)
    pairs = [DistancePair(rand_bytes(rng, 0, 50), rand_bytes(rng, 0, 50), rand_bytes(rng, 0, 20)) for _ in range(100)]
    pairs[10] = DistancePair("abc", "abd")  # no context
    batch = batch_distance(pairs, "with_context")
    assert list(batch.errors) == [10]
    assert batch.results[10] is None
    for i, pair in enumerate(pairs):
        if i != 10:
            assert batch.results[i] == compression_distance_with_context(pair.context, pair.source, pair.target)
    plain = batch_distance(pairs, "plain")
    assert plain.values() == [compression_distance(p.source, p.target).value for p in pairs]


def test_batch_parallel_is_order_stable():
    rng = np.random.default_rng(6)
    pairs = [DistancePair(rand_bytes(rng, 0, 60), rand_bytes(rng, 0, 60)) for _ in range(40)]
    assert batch_distance(pairs, jobs=2).values() == batch_distance(pairs, jobs=1).values()


def test_lz_of_target_identity():
    rng = np.random.default_rng(8)
    for _ in range(50):
        t = rand_bytes(rng, 1, 200)
        assert compression_distance(b"", t).value == lz_phrase_count(t)
