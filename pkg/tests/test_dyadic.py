from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frostflow.dyadic import (
    Interval,
    LowerRealApprox,
    bfs_index,
    format_rat,
    frostman_cap,
    interval_of_word,
    is_dyadic,
    log2_rat,
    lower_real_value,
    parse_rat,
    pow2,
    rat,
    word_containing,
    words_up_to,
)

words = st.text(alphabet="01", max_size=16)


def test_interval_of_word_examples():
    assert interval_of_word("") == Interval(Fraction(0), Fraction(1))
    assert interval_of_word("0") == (Fraction(0), Fraction(1, 2))
    assert interval_of_word("101") == (Fraction(5, 8), Fraction(3, 4))


def test_interval_rejects_garbage():
    with pytest.raises(ValueError):
        interval_of_word("012")


def test_children_tile_parent_exhaustively():
    for w in words_up_to(12):
        parent = interval_of_word(w)
        left, right = interval_of_word(w + "0"), interval_of_word(w + "1")
        assert left.lo == parent.lo and right.hi == parent.hi
        assert left.hi == right.lo == parent.midpoint
        assert parent.length == pow2(-len(w))


@given(words)
def test_length_is_exact_power(w):
    assert interval_of_word(w).length == Fraction(1, 2 ** len(w))


def test_lower_real_examples():
    assert lower_real_value(LowerRealApprox.constant(Fraction(1, 3)), 5) == Fraction(1, 3)
    assert lower_real_value(LowerRealApprox(lambda t: 1 - pow2(-t)), 3) == Fraction(7, 8)
    partial = LowerRealApprox(lambda t: sum((pow2(-i - 1) for i in range(t + 1)), Fraction(0)))
    assert lower_real_value(partial, 2) == Fraction(7, 8)


def test_lower_real_list_repeats_last():
    x = LowerRealApprox(["1/4", "1/2"])
    assert x.value(0) == Fraction(1, 4)
    assert x.value(50) == Fraction(1, 2)


def test_lower_real_audit_catches_decrease():
    bad = LowerRealApprox(lambda t: Fraction(1, 2) if t < 7 else Fraction(1, 3))
    with pytest.raises(ValueError, match="stage 7"):
        bad.audit()
    LowerRealApprox(lambda t: 1 - pow2(-t)).audit()
    with pytest.raises(ValueError):
        LowerRealApprox.constant(1).value(-1)


def test_rational_io():
    assert format_rat(Fraction(2, 4)) == "1/2"
    assert format_rat(Fraction(3)) == "3/1"
    assert parse_rat(" 6/4 ") == Fraction(3, 2)
    with pytest.raises(TypeError):
        parse_rat(0.5)
    with pytest.raises(TypeError):
        rat(0.5)


@given(st.fractions())
def test_rational_round_trip(q):
    assert parse_rat(format_rat(q)) == q


def test_frostman_cap_uses_ceiling():
    assert frostman_cap(Fraction(1, 2), 3) == Fraction(1, 4)
    assert frostman_cap(Fraction(1, 2), 4) == Fraction(1, 4)
    assert frostman_cap(Fraction(0), 9) == 1


@given(st.fractions(min_value=0, max_value=1), st.integers(0, 40))
def test_frostman_cap_brackets_real_power(s, n):
    cap = frostman_cap(s, n)
    assert cap <= 2 ** (-float(s) * n) * (1 + 1e-12)
    assert 2 * cap >= 2 ** (-float(s) * n) * (1 - 1e-12)


def test_log2_exact_on_powers():
    assert log2_rat(Fraction(1, 1024)) == -10.0
    assert log2_rat(Fraction(8)) == 3.0


def test_word_containing_conventions():
    assert word_containing(Fraction(1, 3), 4) == "0101"
    assert word_containing(Fraction(0), 5) == "00000"
    assert word_containing(Fraction(1, 2), 4) == "0111"
    assert word_containing(Fraction(1), 3) == "111"
    assert word_containing(Fraction(1, 3), 0) == ""


@given(st.fractions(min_value=0, max_value=1), st.integers(0, 20))
def test_word_containing_contains(x, n):
    iv = interval_of_word(word_containing(x, n))
    assert iv.lo <= x <= iv.hi
    if not is_dyadic(x):
        assert iv.interior_contains(x)


def test_bfs_index_enumeration_order():
    assert [bfs_index(w) for w in words_up_to(4)] == list(range(31))
