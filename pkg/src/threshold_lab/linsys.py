"""Exact feasibility of small systems ``A x >= b`` over the rationals.

Two independent solvers share one contract: return a rational solution as a
list of ``Fraction`` or ``None`` when the system is infeasible.

* :func:`fourier_motzkin` eliminates variables one at a time.  Fast for the
  handful of variables met when classifying games with few player types.
* :func:`simplex` is the phase-one tableau simplex with Bland's rule on an
  integer tableau.  Variables are constrained to be non-negative.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

def _normalize(coeffs: Sequence[int], num: int, den: int) -> tuple[tuple, int, int]:
    """Divide through by the gcd of the coefficients; rhs kept as num/den."""
    g = 0
    for c in coeffs:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        den *= g
    else:
        coeffs = tuple(coeffs)
    if den != 1:
        h = math.gcd(num, den)
        if h > 1:
            num //= h
            den //= h
    return coeffs, num, den


def _insert(system: dict, coeffs: tuple, num: int, den: int) -> bool:
    """Keep the tightest rhs per direction; False on a contradiction 0 >= positive."""
    if not any(coeffs):
        return num <= 0
    old = system.get(coeffs)
    if old is None or num * old[1] > old[0] * den:
        system[coeffs] = (num, den)
    return True


class EliminationBlowup(ArithmeticError):
    """Raised when elimination produces more rows than allowed."""


def fourier_motzkin(A: Sequence[Sequence[int]], b: Sequence,
                    max_rows: Optional[int] = None) -> Optional[list[Fraction]]:
    """Solve ``A x >= b`` (free variables, integer ``A``) by elimination.

    Rows are stored as integer coefficient tuples with a rational rhs held as
    a numerator/denominator pair, so the inner loop is integer arithmetic.
    With ``max_rows`` set, :class:`EliminationBlowup` is raised as soon as an
    intermediate system grows past that many rows.
    """
    nvars = len(A[0]) if A else 0
    system: dict = {}
    for row, rhs in zip(A, b):
        rhs = Fraction(rhs)
        coeffs, num, den = _normalize([int(c) for c in row], rhs.numerator, rhs.denominator)
        if not _insert(system, coeffs, num, den):
            return None
    stages = []
    remaining = set(range(nvars))
    while remaining:
        # eliminate the variable producing the fewest combined rows
        best = None
        for v in remaining:
            pos = neg = 0
            for c in system:
                if c[v] > 0:
                    pos += 1
                elif c[v] < 0:
                    neg += 1
            score = pos * neg - pos - neg
            if best is None or score < best[0]:
                best = (score, v)
        v = best[1]
        remaining.discard(v)
        lower, upper = [], []
        nxt: dict = {}
        for c, r in system.items():
            if c[v] > 0:
                lower.append((c, r))
            elif c[v] < 0:
                upper.append((c, r))
            else:
                nxt[c] = r
        for cp, (np_, dp) in lower:
            ap = cp[v]
            for cn, (nn, dn) in upper:
                an = -cn[v]
                coeffs = [an * x + ap * y for x, y in zip(cp, cn)]
                coeffs, num, den = _normalize(coeffs, an * np_ * dn + ap * nn * dp, dp * dn)
                if not _insert(nxt, coeffs, num, den):
                    return None
        if max_rows is not None and len(nxt) > max_rows:
            raise EliminationBlowup(f"{len(nxt)} rows after eliminating x{v}")
        stages.append((v, lower, upper))
        system = nxt
    x = [Fraction(0)] * nvars
    for v, lower, upper in reversed(stages):
        lo = hi = None
        for c, (num, den) in lower:
            rest = sum(ci * xi for i, (ci, xi) in enumerate(zip(c, x)) if i != v and ci)
            bound = (Fraction(num, den) - rest) / c[v]
            if lo is None or bound > lo:
                lo = bound
        for c, (num, den) in upper:
            rest = sum(ci * xi for i, (ci, xi) in enumerate(zip(c, x)) if i != v and ci)
            bound = (Fraction(num, den) - rest) / c[v]
            if hi is None or bound < hi:
                hi = bound
        if lo is not None:
            x[v] = lo
        elif hi is not None:
            x[v] = min(hi, Fraction(0))
        assert lo is None or hi is None or lo <= hi
    return x


def simplex(A: Sequence[Sequence[int]], b: Sequence) -> Optional[list[Fraction]]:
    """Find ``x >= 0`` with ``A x >= b`` by phase one of the simplex method.

    The tableau is kept in integers: every row carries an implicit positive
    scale, pivots combine rows with positive multipliers and each row is
    reduced by its gcd.  Bland's rule guarantees termination.
    """
    m = len(A)
    nvars = len(A[0]) if A else 0
    if m == 0:
        return [Fraction(0)] * nvars
    # clear rational right-hand sides row by row
    rows_in = []
    for row, rhs in zip(A, b):
        rhs = Fraction(rhs)
        rows_in.append(([int(c) * rhs.denominator for c in row], rhs.numerator))
    # columns: x, surplus (one per row), artificial (rows with rhs > 0), rhs
    art_rows = [i for i, (_, rhs) in enumerate(rows_in) if rhs > 0]
    ncols = nvars + m + len(art_rows)
    art_col = {i: nvars + m + k for k, i in enumerate(art_rows)}
    T: list[list[int]] = []
    basis: list[int] = []
    for i, (coeffs, rhs) in enumerate(rows_in):
        row = [0] * (ncols + 1)
        if rhs > 0:
            row[:nvars] = coeffs
            row[nvars + i] = -1
            row[art_col[i]] = 1
            row[-1] = rhs
            basis.append(art_col[i])
        else:
            row[:nvars] = [-c for c in coeffs]
            row[nvars + i] = 1
            row[-1] = -rhs
            basis.append(nvars + i)
        T.append(row)
    # phase-one cost: sum of artificials, expressed in reduced form
    cost = [0] * (ncols + 1)
    for i in art_rows:
        for j, v in enumerate(T[i]):
            cost[j] -= v
        cost[art_col[i]] += 1
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                if best is None:
                    best = i
                    continue
                bi = T[best]
                # compare row[-1]/a with bi[-1]/bi[enter]
                lhs, rhs_ = row[-1] * bi[enter], bi[-1] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                    best = i
        if best is None:  # pragma: no cover - phase one is bounded
            raise ArithmeticError("unbounded phase-one problem")
        _pivot_int(T, cost, best, enter)
        basis[best] = enter
    if cost[-1] < 0:
        return None
    x = [Fraction(0)] * nvars
    for i, bcol in enumerate(basis):
        if bcol < nvars:
            x[bcol] = Fraction(T[i][-1], T[i][bcol])
    return x


def _reduce(row: list) -> list:
    g = 0
    for v in row:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                return row
    return [v // g for v in row] if g > 1 else row


def _pivot_int(T, cost, r, c):
    prow = _reduce(T[r])
    T[r] = prow
    p = prow[c]
    for i, row in enumerate(T):
        a = row[c]
        if i != r and a:
            T[i] = _reduce([p * v - a * w for v, w in zip(row, prow)])
    a = cost[c]
    if a:
        # cost keeps its scale positive too; only signs matter
        cost[:] = _reduce([p * v - a * w for v, w in zip(cost, prow)])


def check_solution(A, b, x) -> bool:
    return all(sum(Fraction(a) * xi for a, xi in zip(row, x)) >= rhs for row, rhs in zip(A, b))
