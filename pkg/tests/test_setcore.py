import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cssets.errors import BudgetExceeded, InsufficientData, OmegaViolation, StreamExhausted
from cssets.setcore import (
    AllOfN,
    BlockEncoded,
    BlockStream,
    Construction42,
    CorollaryB,
    FiniteList,
    Periodic,
    Window,
    b_set_elements,
    canonical_json,
    decode_blocks,
    descriptor_from_json,
    descriptor_hash,
    encode_blocks,
    in_b_set,
    normalize,
    split,
)

EVENS = Periodic(2, {0})


def test_periodic_window_and_member():
    assert list(EVENS.window(-4, 4).members()) == [-4, -2, 0, 2, 4]
    assert EVENS.member(-6) and not EVENS.member(7)


def test_construction42_prefix_window():
    assert list(Construction42(1, 2).window(0, 7).members()) == [0, 2, 4, 6, 7]


def test_construction42_symmetric():
    w = Construction42(1, 2).window(-200, 200).bits
    assert np.array_equal(w, w[::-1])


def test_window_matches_member_pointwise():
    for desc in (EVENS, Construction42(2, 3), CorollaryB("A"), CorollaryB("B"),
                 (EVENS | (Construction42(1, 2) + 3)) & ~CorollaryB("B"), -Construction42(1, 2) - 5):
        win = desc.window(-150, 150)
        assert [bool(b) for b in win.bits] == [desc.member(z) for z in range(-150, 151)]


def test_b_set():
    assert b_set_elements(0, 40) == [2, 4, 6, 8, 10, 12, 16, 18, 20, 22, 32, 34, 36, 38, 40]
    assert [z for z in range(-5, 41) if in_b_set(z)] == b_set_elements(0, 40)
    A = CorollaryB("A")
    assert not A.member(66) and not A.member(-4) and A.member(0) and A.member(67)


def test_encode_examples():
    win = Window(0, 6, np.array([1, 1, 0, 1, 0, 0, 1], dtype=bool))
    assert encode_blocks(win) == [(2, 1), (1, 2)]
    with pytest.raises(OmegaViolation):
        encode_blocks(Window(0, 3, np.array([0, 1, 1, 0], dtype=bool)))
    with pytest.raises(InsufficientData):
        encode_blocks(Window(0, 3, np.array([1, 1, 1, 1], dtype=bool)))


def test_encode_complete_closes_trailing_gap():
    win = Window(0, 4, np.array([1, 0, 1, 0, 0], dtype=bool))
    assert encode_blocks(win) == [(1, 1)]
    assert encode_blocks(win, complete=True) == [(1, 1), (1, 2)]


def test_decode_examples():
    assert decode_blocks([(2, 1), (1, 2)], 2) == [(0, 2), (3, 4)]
    with pytest.raises(StreamExhausted):
        decode_blocks([(1, 1)], 3)


pairs = st.lists(st.tuples(st.integers(1, 20), st.integers(1, 20)), min_size=1, max_size=50)


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_round_trip(ps):
    stream = BlockStream.from_lists([a for a, _ in ps], [b for _, b in ps], tail="error")
    hi = sum(a + b for a, b in ps)
    desc = BlockEncoded(stream)
    win = desc.window(0, hi - 1)
    assert encode_blocks(win, complete=True) == ps
    ivs = decode_blocks(ps, len(ps))
    assert all(desc.member(z) == any(l <= z < r for l, r in ivs) for z in range(hi))


def test_stream_budget_and_tail():
    s = BlockStream.from_lists([1, 2], [3, 4], budget=5)
    assert s.pair(4) == (2, 4)
    with pytest.raises(BudgetExceeded):
        s.pair(6)
    e = BlockStream.from_lists([1], [1], tail="error")
    with pytest.raises(StreamExhausted):
        e.pair(2)


def test_minus_sides():
    s = BlockStream.from_lists([1], [1])
    assert BlockEncoded(s, AllOfN()).member(-7)
    d = BlockEncoded(s, FiniteList([3]))
    assert d.member(-3) and not d.member(-4) and not d.member(-1)


def test_split_and_normalize():
    plus, minus = split(Construction42(1, 2) + 1)
    assert plus.member(1) and not plus.member(-1)
    assert minus.member(1) == (Construction42(1, 2) + 1).member(-1)
    odd = Periodic(2, {1})
    n, shift = normalize(odd)
    assert n.member(0) and shift == -1


@pytest.mark.parametrize("desc", [
    EVENS,
    Construction42(3, 2),
    CorollaryB("A"),
    BlockEncoded(BlockStream.from_lists([1, 2], [2, 1]), AllOfN()),
    BlockEncoded(BlockStream.from_lists([3], [1]), FiniteList([2, 5])),
    (EVENS | CorollaryB("B")) & ~(Construction42(1, 2) + 2),
    -EVENS,
])
def test_json_round_trip(desc):
    obj = desc.to_json()
    back = descriptor_from_json(json.dumps(obj))
    assert canonical_json(back.to_json()) == canonical_json(obj)
    assert descriptor_hash(back) == descriptor_hash(desc)
    assert np.array_equal(back.window(-60, 60).bits, desc.window(-60, 60).bits)


def test_window_json_round_trip():
    win = Construction42(1, 2).window(-37, 91)
    assert Window.from_json(json.loads(json.dumps(win.to_json()))) == win
