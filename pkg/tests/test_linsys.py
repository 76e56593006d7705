import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from threshold_lab.linsys import EliminationBlowup, check_solution, fourier_motzkin, simplex


def test_fm_simple_feasible():
    A = [(1, 1), (1, -1), (-1, 0)]
    b = [2, 0, -3]
    x = fourier_motzkin(A, b)
    assert x is not None and check_solution(A, b, x)


def test_fm_infeasible():
    assert fourier_motzkin([(1,), (-1,)], [1, 0]) is None


def test_fm_fractional_rhs():
    A = [(3,), (-2,)]
    b = [Fraction(1, 2), -1]
    x = fourier_motzkin(A, b)
    assert x is not None and check_solution(A, b, x)


def test_fm_row_limit():
    rng = random.Random(7)
    A = [tuple(rng.choice((-3, -2, -1, 1, 2, 3)) for _ in range(4)) for _ in range(24)]
    b = [-50] * 24
    with pytest.raises(EliminationBlowup):
        fourier_motzkin(A, b, max_rows=10)
    assert fourier_motzkin(A, b) is not None  # x = 0 is feasible


def test_simplex_nonnegative_solution():
    A = [(1, 2), (3, -1)]
    b = [4, 1]
    x = simplex(A, b)
    assert x is not None and all(v >= 0 for v in x) and check_solution(A, b, x)


def test_simplex_infeasible():
    assert simplex([(-1, -1)], [1]) is None


systems = st.integers(1, 4).flatmap(lambda nv: st.tuples(
    st.lists(st.tuples(*[st.integers(-3, 3)] * nv), min_size=1, max_size=7),
    st.lists(st.integers(-4, 4), min_size=7, max_size=7)))


@settings(max_examples=150, deadline=None)
@given(systems)
def test_methods_agree_with_scipy(system):
    A, b = system
    b = b[:len(A)]
    nv = len(A[0])
    # add x >= 0 so that all three solve the same problem
    A2 = list(A) + [tuple(int(i == k) for i in range(nv)) for k in range(nv)]
    b2 = list(b) + [0] * nv
    ref = linprog(np.zeros(nv), A_ub=-np.array(A2, float), b_ub=-np.array(b2, float),
                  bounds=[(None, None)] * nv, method="highs")
    feasible = ref.status == 0
    x_fm = fourier_motzkin(A2, b2)
    x_sx = simplex(A, b)
    assert (x_fm is not None) == feasible
    assert (x_sx is not None) == feasible
    if feasible:
        assert check_solution(A2, b2, x_fm)
        assert check_solution(A2, b2, x_sx)
