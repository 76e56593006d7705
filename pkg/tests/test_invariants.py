import functools
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from threshold_lab.enumeration import enumerate_complete
from threshold_lab.families import canada, fm_smallest, unsc
from threshold_lab.game import NotCompleteError, SimpleGame
from threshold_lab.invariants import (CharacteristicInvariants, TypeOrder, compare_types,
                                      count_minimal_winning, extract_invariants, isomorphic,
                                      reconstruct, shift_maximal_losing_types, validate_invariants,
                                      winning_type)
from threshold_lab.lattice import lattice, partial_sums

from oracles import lattice_types, winning_types_direct


# -- lattice --------------------------------------------------------------------

@pytest.mark.parametrize("nbar", [(3,), (2, 3), (1, 2, 2), (2, 1, 1, 2)])
def test_lattice_order_and_closures(nbar):
    lat = lattice(nbar)
    assert lat.size == len(lattice_types(nbar))
    for i, a in enumerate(lat.elements):
        for j, b in enumerate(lat.elements):
            ge = all(x >= y for x, y in zip(partial_sums(a), partial_sums(b)))
            assert bool(lat.up[j] >> i & 1) == ge
            assert bool(lat.down[i] >> j & 1) == ge
        # descending order: a dominating element never comes later
        assert all(not (lat.up[i] >> j & 1) or j <= i for j in range(lat.size))


@pytest.mark.parametrize("nbar,cap", [((2, 3), 2), ((1, 2, 2), 3)])
def test_code_space_closures(nbar, cap):
    lat = lattice(nbar, cap)
    boxes = list(itertools.product(*(range(cap * n + 1) for n in nbar)))
    codes = {b: lat.encode(b) for b in boxes}
    seed = codes[tuple(cap * n // 2 for n in nbar)]
    down = lat.down_close(1 << seed)
    up = lat.up_close(1 << seed)
    s = lat.decode(seed)
    for b, c in codes.items():
        assert bool(down >> c & 1) == all(x <= y for x, y in zip(b, s))
        assert bool(up >> c & 1) == all(x >= y for x, y in zip(b, s))


# -- type order ------------------------------------------------------------------

def test_compare_types_examples():
    assert compare_types((2, 4), (1, 5)) is TypeOrder.DOMINATES
    assert compare_types((1, 5), (2, 4)) is TypeOrder.DOMINATED
    assert compare_types((3, 1), (3, 1)) is TypeOrder.EQUAL
    assert compare_types((2, 0, 1), (1, 1, 2)) is TypeOrder.INCOMPARABLE


def test_compare_types_length_mismatch():
    with pytest.raises(ValueError):
        compare_types((1, 2), (1, 2, 3))


# -- validation --------------------------------------------------------------------

def test_unsc_valid():
    assert validate_invariants(unsc()) == (True, [])


def test_comparable_rows_rejected():
    ok, errors = validate_invariants(CharacteristicInvariants((3, 3), ((2, 1), (1, 2))))
    assert not ok and any(e.startswith("antichain") for e in errors)


def test_class_separation():
    ok, errors = validate_invariants(CharacteristicInvariants((2, 3), ((0, 3),)))
    assert not ok and any(e.startswith("separation") for e in errors)


def test_row_order():
    ok, errors = validate_invariants(CharacteristicInvariants((2, 2, 3), ((1, 0, 3), (2, 1, 0))))
    assert not ok and any(e.startswith("order") for e in errors)
    assert validate_invariants(fm_smallest())[0]


def test_out_of_range_row():
    ok, errors = validate_invariants(CharacteristicInvariants((2, 2), ((3, 0),)))
    assert not ok and errors[0].startswith("range")


# -- extraction and reconstruction ----------------------------------------------

def test_extract_unsc():
    g = SimpleGame.from_weights(39, [7] * 5 + [1] * 10)
    ci, part = extract_invariants(g)
    assert ci == unsc()
    assert part.classes[0] == tuple(range(5))


def test_extract_canada():
    ci, _ = extract_invariants(reconstruct(canada()))
    assert ci == canada()


def test_extract_requires_complete():
    with pytest.raises(NotCompleteError):
        extract_invariants(SimpleGame.from_lists(4, [[0, 1], [2, 3]]))


def test_canada_minimal_winning_types():
    assert set(canada().minimal_winning_types()) == {(2, 5), (1, 6)}


def test_single_class_is_k_out_of_n():
    g = reconstruct(CharacteristicInvariants((6,), ((4,),)))
    assert g.min_winning == SimpleGame.from_weights(4, [1] * 6).min_winning


def test_fm_smallest_reconstruction_matches_partial_sum_rule():
    ci = fm_smallest()
    g = reconstruct(ci)
    assert g.n == 7
    win = set(winning_types_direct(ci))
    starts = (0, 2, 4)
    for s in lattice_types(ci.nbar):
        mask = 0
        for st_, c in zip(starts, s):
            mask |= ((1 << c) - 1) << st_
        assert g.is_winning(mask) == (s in win)


def test_count_minimal_winning_matches_explicit():
    for ci in (canada(), fm_smallest(), unsc()):
        assert count_minimal_winning(ci) == len(reconstruct(ci).min_winning)


def test_round_trip_all_complete_games_n_le_6():
    seen = 0
    for n in range(1, 7):
        for ci in enumerate_complete(n):
            back, _ = extract_invariants(reconstruct(ci))
            assert back == ci
            seen += 1
    assert seen == 1 + 3 + 8 + 25 + 117 + 1171


# -- shift-maximal losing ---------------------------------------------------------

def test_y_matrices():
    assert shift_maximal_losing_types(unsc()) == ((5, 3), (4, 10))
    assert shift_maximal_losing_types(canada()) == ((2, 4), (0, 8))
    assert shift_maximal_losing_types(CharacteristicInvariants((5,), ((5,),))) == ((4,),)


# -- winning_type -------------------------------------------------------------------

def test_winning_type_examples():
    assert winning_type(canada(), (2, 5))
    assert not winning_type(canada(), (1, 5))
    assert winning_type(fm_smallest(), fm_smallest().nbar)
    with pytest.raises(ValueError):
        winning_type(canada(), (3, 0))


@functools.lru_cache(maxsize=None)
def _games_by_n(n):
    return tuple(enumerate_complete(n))


@st.composite
def valid_invariants(draw):
    n = draw(st.integers(1, 6))
    return draw(st.sampled_from(_games_by_n(n)))


@settings(max_examples=60, deadline=None)
@given(valid_invariants())
def test_winning_set_matches_direct_rule(ci):
    assert set(ci.winning_types()) == set(winning_types_direct(ci))


# -- isomorphism ---------------------------------------------------------------------

def test_isomorphic_after_relabel():
    g = SimpleGame.from_weights(39, [7] * 5 + [1] * 10)
    perm = [14 - i for i in range(15)]
    assert isomorphic(g, g.relabel(perm))
    assert not isomorphic(g, reconstruct(canada()))


def test_isomorphic_round_trip():
    g = reconstruct(canada())
    assert isomorphic(g, reconstruct(extract_invariants(g)[0]))
