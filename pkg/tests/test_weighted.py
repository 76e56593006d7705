from fractions import Fraction

import pytest

from threshold_lab.enumeration import enumerate_complete
from threshold_lab.families import canada, fm_smallest, unsc
from threshold_lab.game import SimpleGame
from threshold_lab.invariants import CharacteristicInvariants, reconstruct, winning_type
from threshold_lab.trades import Mode, verify_vectorial
from threshold_lab.weighted import (NotCovered, WeightedGameError, closed_form_r1, decide_weighted,
                                    class_weights_rows, mp_parameters, mp_weighted_test,
                                    separation_system, two_trade_certificate_t2)
from threshold_lab.invariants import shift_maximal_losing_types
from threshold_lab.linsys import check_solution

from oracles import brute_force_weights


def test_unsc_weighted_and_verified():
    rep = decide_weighted(unsc())
    assert rep is not None and rep.verify(unsc())
    assert rep.class_weights == (7, 1) and rep.quota == 39


def test_unsc_example_weights_separate():
    # the worked weights: nine votes with all permanent reach 39, best losing reaches 38
    assert 5 * 7 + 4 == 39 and 4 * 7 + 10 == 38


def test_canada_not_weighted():
    assert decide_weighted(canada()) is None


def test_k_out_of_n_unit_weights():
    rep = decide_weighted(SimpleGame.from_weights(4, [1] * 7))
    assert rep.class_weights == (1,) and rep.quota == 4
    assert rep.player_weights() == [1] * 7


def test_non_complete_game_not_weighted():
    assert decide_weighted(SimpleGame.from_lists(4, [[0, 1], [2, 3]])) is None


def test_player_weights_follow_classes():
    g = SimpleGame.from_weights(5, [1, 3, 1, 3, 2])
    rep = decide_weighted(g)
    w = rep.player_weights()
    for s in range(1 << 5):
        assert g.is_winning(s) == (sum(w[i] for i in range(5) if s >> i & 1) >= rep.quota)


@pytest.mark.parametrize("method", ["fm", "simplex", None])
def test_methods_agree_on_all_games_n_le_5(method):
    for n in range(1, 6):
        for ci in enumerate_complete(n):
            rep = decide_weighted(ci, method)
            assert rep is not None  # every complete game with n <= 5 is weighted
            assert rep.verify(ci)


def test_fm_simplex_agree_n6():
    for ci in enumerate_complete(6):
        a = decide_weighted(ci, "fm")
        b = decide_weighted(ci, "simplex")
        assert (a is None) == (b is None)


def _separates(w, rows, losing):
    quota = min(sum(a * b for a, b in zip(m, w)) for m in rows)
    monotone = all(x >= y for x, y in zip(w, w[1:])) and w[-1] >= 0
    return monotone and all(sum(a * b for a, b in zip(y, w)) < quota for y in losing)


@pytest.mark.parametrize("n", [6, 7])
def test_fast_feasibility_path_agrees_with_elimination(n):
    # the default path may answer from a perceptron point; it must match exact FM
    for ci in enumerate_complete(n, t=n if n == 7 else None):
        losing = shift_maximal_losing_types(ci)
        w = class_weights_rows(ci.nbar, ci.rows, losing)
        exact = class_weights_rows(ci.nbar, ci.rows, losing, "fm")
        assert (w is None) == (exact is None), ci
        if w is not None:
            assert _separates(w, ci.rows, losing)


def test_fast_path_handles_null_last_class():
    ci = CharacteristicInvariants((2, 1), [(1, 0)])
    losing = shift_maximal_losing_types(ci)
    w = class_weights_rows(ci.nbar, ci.rows, losing)
    assert w is not None and _separates(w, ci.rows, losing)


def test_against_brute_force_n6_t3():
    for ci in enumerate_complete(6, t=3):
        rep = decide_weighted(ci)
        bf = brute_force_weights(reconstruct(ci), ci.nbar)
        assert (rep is None) == (bf is None), ci


def test_separation_system_feasible_point_matches_weights():
    ci = unsc()
    A, b = separation_system(ci)
    rep = decide_weighted(ci)
    w = rep.class_weights
    d = [w[0] - w[1], w[1]]
    assert check_solution(A, b, d)


# -- closed form, r = 1 ---------------------------------------------------------

def test_closed_form_small_second_entry():
    rep = closed_form_r1(CharacteristicInvariants((3, 4), ((2, 1),)))
    assert rep.class_weights == (4, 1) and rep.quota == 9
    assert rep.verify(CharacteristicInvariants((3, 4), ((2, 1),)))


def test_closed_form_second_entry_n2_minus_1():
    ci = CharacteristicInvariants((3, 4), ((2, 3),))
    rep = closed_form_r1(ci)
    assert rep.class_weights == (3, 2) and rep.quota == 12
    assert rep.verify(ci)


def test_closed_form_not_covered():
    with pytest.raises(NotCovered):
        closed_form_r1(canada())
    with pytest.raises(NotCovered):
        closed_form_r1(unsc())  # vetoers


def test_closed_form_agrees_with_lp_n_le_12():
    covered = 0
    for n in range(2, 13):
        for ci in enumerate_complete(n, t=2, r=1):
            try:
                rep = closed_form_r1(ci)
            except NotCovered:
                continue
            covered += 1
            assert decide_weighted(ci) is not None
            assert rep.verify(ci), ci
    assert covered > 20


# -- M and P -------------------------------------------------------------------

def test_unsc_mp():
    mp = mp_parameters(unsc())
    assert mp.M == 0 and mp.P == 6 and mp.product == 0
    assert mp_weighted_test(unsc())


def test_canada_m():
    mp = mp_parameters(canada())
    assert mp.M == Fraction(1, 2)
    assert not mp_weighted_test(canada())


def test_mp_witnesses_have_the_right_status():
    for n in range(2, 10):
        for ci in enumerate_complete(n, t=2):
            mp = mp_parameters(ci)
            for pair in (mp.M_witness, mp.P_witness):
                if pair is None:
                    continue
                w, l = pair
                assert winning_type(ci, w) and not winning_type(ci, l)


def test_mp_test_agrees_with_lp_t2_n_le_10():
    for n in range(2, 11):
        for ci in enumerate_complete(n, t=2):
            assert mp_weighted_test(ci) == (decide_weighted(ci) is not None), ci


def test_mp_requires_two_classes():
    with pytest.raises(ValueError):
        mp_parameters(fm_smallest())


# -- two-trade certificate for t = 2 ------------------------------------------------

def test_canada_two_trade():
    cert, case = two_trade_certificate_t2(canada())
    assert str(cert) == str(cert)  # printable
    assert cert.pre_list() == [(1, 6), (1, 6)]
    assert sorted(cert.post_list()) == [(0, 8), (2, 4)]
    assert verify_vectorial(canada(), cert, Mode.INVARIANT)


def test_two_trade_rejects_weighted():
    with pytest.raises(WeightedGameError):
        two_trade_certificate_t2(unsc())


def test_two_trade_for_every_non_weighted_t2_game_n_le_10():
    seen = 0
    for n in range(2, 11):
        for ci in enumerate_complete(n, t=2):
            if decide_weighted(ci) is not None:
                continue
            cert, _ = two_trade_certificate_t2(ci)
            assert cert.j == 2
            assert verify_vectorial(ci, cert, Mode.INVARIANT), ci
            seen += 1
    assert seen > 0
