"""Property tests: CompressedBitset must behave like a plain set of ints."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliqueindex.bitset import CompressedBitset, STRIDE

# universe sizes probing block boundaries
SIZES = (1, 7, STRIDE - 1, STRIDE, STRIDE + 1, 3 * STRIDE + 17)


def id_sets(n):
    return st.sets(st.integers(min_value=0, max_value=n - 1), max_size=min(n, 600))


@st.composite
def universe_and_two_sets(draw):
    n = draw(st.sampled_from(SIZES))
    return n, draw(id_sets(n)), draw(id_sets(n))


@given(universe_and_two_sets())
@settings(max_examples=150, deadline=None)
def test_boolean_algebra_matches_sets(case):
    n, a_ids, b_ids = case
    a = CompressedBitset.from_ids(n, a_ids)
    b = CompressedBitset.from_ids(n, b_ids)
    assert set(a & b) == a_ids & b_ids
    assert set(a | b) == a_ids | b_ids
    assert set(a - b) == a_ids - b_ids
    assert set(a.complement()) == set(range(n)) - a_ids


@given(universe_and_two_sets())
@settings(max_examples=100, deadline=None)
def test_cardinality_and_membership(case):
    n, a_ids, _ = case
    a = CompressedBitset.from_ids(n, a_ids)
    assert a.cardinality() == len(a_ids)
    assert list(a) == sorted(a_ids)
    for probe in list(a_ids)[:5]:
        assert probe in a
    assert n - 1 in a or (n - 1) not in a_ids


@given(universe_and_two_sets())
@settings(max_examples=60, deadline=None)
def test_array_round_trip(case):
    n, a_ids, _ = case
    a = CompressedBitset.from_ids(n, a_ids)
    arr = a.to_array()
    assert arr.dtype == np.int64
    assert list(arr) == sorted(a_ids)
    again = CompressedBitset.from_sorted_array(n, arr)
    assert again == a


def test_from_sorted_array_equals_from_ids():
    n = 2 * STRIDE + 5
    ids = [0, 1, STRIDE - 1, STRIDE, STRIDE + 1, n - 1]
    arr = np.asarray(ids, dtype=np.int64)
    assert CompressedBitset.from_sorted_array(n, arr) == CompressedBitset.from_ids(n, ids)


def test_empty_and_full():
    n = STRIDE + 3
    e = CompressedBitset.empty(n)
    f = CompressedBitset.full(n)
    assert e.cardinality() == 0
    assert f.cardinality() == n
    assert e.complement() == f
    assert f.complement() == e
    assert (f & e) == e
    assert (f | e) == f


def test_complement_respects_partial_tail_block():
    n = STRIDE + 10
    c = CompressedBitset.empty(n).complement()
    assert c.cardinality() == n
    assert max(c) == n - 1


def test_zero_blocks_are_dropped():
    n = 4 * STRIDE
    a = CompressedBitset.from_ids(n, {0})
    b = CompressedBitset.from_ids(n, {0, 2 * STRIDE})
    # intersecting away the high block must not leave an empty entry behind
    assert len((a & b).blocks) == 1
    assert len((b - b).blocks) == 0


def test_mismatched_universes_rejected():
    a = CompressedBitset.empty(8)
    b = CompressedBitset.empty(9)
    with pytest.raises(ValueError):
        _ = a & b


def test_byte_size_grows_with_population():
    n = 8 * STRIDE
    sparse = CompressedBitset.from_ids(n, {1})
    dense = CompressedBitset.from_ids(n, set(range(0, n, 9)))
    assert 0 < sparse.byte_size() < dense.byte_size()
