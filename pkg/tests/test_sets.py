from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frostflow.dyadic import Interval, interval_of_word, words_at_depth, words_up_to
from frostflow.sets import (
    CantorScheme,
    assemble,
    audit_consistency,
    cantor_cells,
    closed_name,
    explicit_name,
    full_interval_name,
    interval_name,
    overt_name,
    point_name,
    rescale,
    scheme_name,
)

from oracles import cantor_cells_direct

F = Fraction


def excluded_set(name, stage, depth):
    return {w for w in words_up_to(depth) if name.closed.excludes(w, stage)}


def test_cells_middle_thirds():
    assert cantor_cells(CantorScheme([3]), 1) == [(0, F(1, 3)), (F(2, 3), 1)]


def test_cells_halving():
    assert cantor_cells(CantorScheme([2]), 1) == [(0, F(1, 2)), (F(1, 2), 1)]


def test_cells_d4_level2():
    assert cantor_cells(CantorScheme([4]), 2) == [
        (0, F(1, 16)), (F(3, 16), F(1, 4)), (F(3, 4), F(13, 16)), (F(15, 16), 1)
    ]


def test_cells_match_direct_splitting():
    for d in (3, 4, F(5, 2)):
        assert [tuple(c) for c in cantor_cells(CantorScheme([d]), 6)] == cantor_cells_direct(d, 6)


def test_scheme_rejects_small_ratio():
    with pytest.raises(ValueError):
        CantorScheme([3, F(3, 2)])
    lazy = CantorScheme(lambda i: 3 if i < 2 else 1)
    with pytest.raises(ValueError):
        cantor_cells(lazy, 3)
    with pytest.raises(ValueError):
        cantor_cells(CantorScheme([3]), -1)


@pytest.mark.parametrize("d", [3, 4])
def test_cells_nest_and_shrink(d):
    scheme = CantorScheme([d])
    for n in range(8):
        for w in words_at_depth(n):
            parent = scheme.cell(w)
            for c in "01":
                child = scheme.cell(w + c)
                assert parent.contains_interval(child)
                assert child.length < parent.length
        cells = cantor_cells(scheme, n + 1)
        assert all(a.hi < b.lo for a, b in zip(cells, cells[1:]))


def test_closed_name_middle_thirds():
    C = closed_name(CantorScheme([3]))
    assert C.excludes("011", 1)
    assert not C.excludes("011", 0)
    assert not any(C.excludes("10", t) for t in range(12))


def test_closed_name_halving_excludes_nothing():
    C = closed_name(CantorScheme([2]))
    assert not any(C.excludes(w, t) for w in words_up_to(8) for t in (0, 3, 9))


def test_overt_name_middle_thirds():
    V = overt_name(CantorScheme([3]))
    assert V.certifies("10", 1)  # a_1 = 2/3
    assert not V.certifies("10", 0)
    assert not any(V.certifies("011", t) for t in range(10))


def test_overt_left_half_certified_early():
    # The root's left endpoint 0 is not interior to "0"; the first interior
    # left endpoint is a_01 (at level 2) for these schemes.
    for d in (3, 4, 5):
        V = overt_name(CantorScheme([d]))
        assert V.certifies("0", 2)


def test_overt_is_monotone_and_refines():
    V = overt_name(CantorScheme([3]))
    for t in range(6):
        for w in words_up_to(6):
            if V.certifies(w, t):
                assert V.certifies(w, t + 1)
                assert any(V.certifies(w + c, t + 2) for c in "01")


@pytest.mark.parametrize("d", [2, 3, 4, F(7, 3)])
def test_scheme_name_consistent(d):
    assert audit_consistency(scheme_name(CantorScheme([d])), 8, 12) == []


def test_closed_name_matches_cells():
    scheme = CantorScheme([3])
    C = closed_name(scheme)
    for t in range(5):
        cells = cantor_cells(scheme, t)
        for w in words_up_to(7):
            iv = interval_of_word(w)
            hits = any(iv.interiors_meet(c) for c in cells)
            assert C.excludes_word(w, t) == (not hits)


def test_interval_and_point_names():
    A = interval_name(F(1, 4), F(1, 2))
    assert not A.closed.excludes("01", 0)
    assert A.closed.excludes("00", 0) and A.closed.excludes("1", 0)
    P = point_name(F(1, 3))
    assert P.overt.certifies("0101", 0)
    assert P.closed.excludes("0100", 0)
    with pytest.raises(ValueError):
        interval_name(F(1, 2), F(1, 2))


def test_explicit_name_stages():
    A = explicit_name(excluded=[(2, ["1"]), (5, ["01"])], certified=[(1, ["00"])])
    assert not A.closed.excludes("10", 1)
    assert A.closed.excludes("10", 2)
    assert A.closed.excludes("011", 5) and not A.closed.excludes("011", 4)
    assert A.overt.certifies("00", 1) and not A.overt.certifies("00", 0)
    with pytest.raises(ValueError):
        explicit_name(excluded=[(0, ["2"])])


def test_rescale_full_interval():
    R = rescale(full_interval_name(), (F(1, 4), F(1, 2)))
    target = Interval(F(1, 4), F(1, 2))
    for w in words_up_to(7):
        misses = not interval_of_word(w).interiors_meet(target)
        assert R.closed.excludes(w, 0) == misses


def test_rescale_point_zero():
    R = rescale(point_name(0), (F(1, 2), F(3, 4)))
    for w in words_up_to(8):
        iv = interval_of_word(w)
        if not (iv.lo <= F(1, 2) <= iv.hi):
            assert R.closed.excludes(w, 3)
    # The chain 0^n lands on the chain 10^n, approaching 1/2 from the right.
    right_chain = "1" + "0" * 7
    assert not any(R.closed.excludes(right_chain[:n], 8) for n in range(9))
    assert all(R.overt.certifies(right_chain[:n], 8) for n in range(9))
    assert R.closed.excludes("0111", 8)
    assert audit_consistency(R, 8, 8) == []


def test_rescale_identity():
    A = scheme_name(CantorScheme([3]))
    R = rescale(A, (0, 1))
    for w in words_up_to(6):
        assert R.closed.excludes(w, 6) == A.closed.excludes(w, 6)
        assert R.overt.certifies(w, 6) == A.overt.certifies(w, 6)


def test_rescale_round_trip_half():
    A = scheme_name(CantorScheme([4]))
    back = rescale(rescale(A, (0, F(1, 2))), (0, 2))
    for t in (2, 4, 6):
        assert excluded_set(back, t, 6) == excluded_set(A, t, 6)


def test_rescale_rejects_degenerate():
    with pytest.raises(ValueError):
        rescale(full_interval_name(), (F(1, 3), F(1, 3)))


def test_assemble_single_full():
    U = assemble([full_interval_name()])
    assert not U.closed.excludes("01", 3)
    assert U.closed.excludes("1", 0)
    assert U.closed.excludes("001", 0)
    assert not U.closed.excludes("0000000", 5)
    assert U.overt.certifies("01", 0)


def test_assemble_empty_is_origin():
    U = assemble([])
    for w in words_up_to(8):
        assert U.closed.excludes(w, 0) == ("1" in w)
    assert not any(U.overt.certifies(w, 5) for w in words_up_to(5))


def test_assemble_infinite_family():
    U = assemble(lambda i: full_interval_name())
    assert U.closed.excludes("11", 1)
    # block i = [2^(-2i-2), 2^(-2i-1)] is never excluded
    for i in range(4):
        b = Interval(F(1, 2 ** (2 * i + 2)), F(1, 2 ** (2 * i + 1)))
        for w in words_up_to(10):
            if interval_of_word(w).interiors_meet(b):
                assert not U.closed.excludes(w, 12)
    assert audit_consistency(U, 8, 10) == []


def test_assemble_consistency_with_schemes():
    U = assemble([scheme_name(CantorScheme([3])), scheme_name(CantorScheme([4])), point_name(F(1, 3))])
    assert audit_consistency(U, 9, 12) == []


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, F(5, 2), 6]), min_size=1, max_size=4), st.integers(0, 8))
def test_closed_overt_never_disagree(ratios, stage):
    assert audit_consistency(scheme_name(CantorScheme(ratios)), 7, stage) == []


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5]), min_size=1, max_size=3), st.integers(0, 6))
def test_exclusion_monotone_in_stage(ratios, t):
    C = closed_name(CantorScheme(ratios))
    for w in words_up_to(6):
        if C.excludes(w, t):
            assert C.excludes(w, t + 1)
