"""Exact weightedness decisions for complete games.

Weights are searched in difference coordinates ``d_k = w_k - w_{k+1}``
(``d_t = w_t``).  In those coordinates ``s . w`` equals the dot product of
``d`` with the partial sums of ``s``, so a weight vector separates the game
iff ``(S(m) - S(a)) . d >= 1`` for every shift-minimal winning row ``m`` and
shift-maximal losing row ``a``, together with ``d_k >= 1`` for ``k < t``
(strictly decreasing class weights) and ``d_t >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .game import SimpleGame, partition_players
from .invariants import (CharacteristicInvariants, extract_invariants,
                         shift_maximal_losing_types, vetoer_and_null_classes, winning_type)
from .lattice import partial_sums
from .linsys import EliminationBlowup, fourier_motzkin, simplex

# elimination is tried first for every t; past this many intermediate rows it
# gives way to the simplex method
FM_ROW_LIMIT = 4000
# perceptron steps tried before any exact LP in the feasibility-only path
PERCEPTRON_STEPS = 1000


@dataclass(frozen=True)
class WeightedRepresentation:
    quota: int
    class_weights: tuple
    nbar: tuple
    # players per class when built from an explicit game; consecutive blocks otherwise
    classes: Optional[tuple] = field(default=None, compare=False)

    def weight_of(self, s: Sequence[int]) -> int:
        return sum(a * w for a, w in zip(s, self.class_weights))

    def verify(self, ci: CharacteristicInvariants) -> bool:
        """Strict separation over every type of the lattice."""
        if tuple(ci.nbar) != tuple(self.nbar):
            return False
        lat = ci.lattice
        win = ci.winning_mask
        for i, s in enumerate(lat.elements):
            if (self.weight_of(s) >= self.quota) != bool(win >> i & 1):
                return False
        return True

    def player_weights(self) -> list[int]:
        classes = self.classes
        if classes is None:
            out = []
            for w, size in zip(self.class_weights, self.nbar):
                out.extend([w] * size)
            return out
        n = sum(len(c) for c in classes)
        out = [0] * n
        for w, cls in zip(self.class_weights, classes):
            for p in cls:
                out[p] = w
        return out

    def to_dict(self) -> dict:
        return {"quota": self.quota, "class_weights": list(self.class_weights),
                "classes": list(self.nbar)}


def separation_system(ci: CharacteristicInvariants, losing_rows=None):
    """Rows ``g`` and right-hand sides of the system in difference coordinates.

    ``losing_rows`` defaults to the shift-maximal losing types; any set of
    losing types containing them gives the same feasible region.
    """
    return _system(ci.t, ci.rows, shift_maximal_losing_types(ci) if losing_rows is None else losing_rows)


def _system(t, rows, losing_rows):
    A, b = [], []
    seen = set()
    for m in rows:
        sm = partial_sums(m)
        for a in losing_rows:
            g = tuple(x - y for x, y in zip(sm, partial_sums(a)))
            # implied by d_k >= 1 (k < t) and d_t >= 0
            if all(x >= 0 for x in g) and any(g[k] > 0 for k in range(t - 1)):
                continue
            if g not in seen:
                seen.add(g)
                A.append(g)
                b.append(1)
    for k in range(t):
        row = [0] * t
        row[k] = 1
        A.append(tuple(row))
        b.append(1 if k < t - 1 else 0)
    return A, b


def _integerize(values: Sequence[Fraction]) -> list[int]:
    denom = 1
    for v in values:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    ints = [int(v * denom) for v in values]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def _representation(ci: CharacteristicInvariants, d: Sequence[Fraction]) -> WeightedRepresentation:
    dd = _integerize(d)
    w, acc = [], 0
    for x in reversed(dd):
        acc += x
        w.append(acc)
    w.reverse()
    quota = min(sum(a * b for a, b in zip(m, w)) for m in ci.rows)
    return WeightedRepresentation(quota, tuple(w), ci.nbar)


def _solve(t, A, b, method):
    if method == "simplex":
        return simplex(A, b)
    if method == "fm":
        return fourier_motzkin(A, b)
    try:
        return fourier_motzkin(A, b, max_rows=FM_ROW_LIMIT)
    except EliminationBlowup:
        return simplex(A, b)


def _perceptron(A, t: int) -> Optional[list]:
    """Integer point with every row of ``A`` strictly positive, or None.

    Integrality makes it a solution of the system outright.  The last row
    is tightened to ``d_t >= 1``; a miss falls through to the LP.
    """
    G = np.array(A, dtype=np.int64)
    d = np.ones(t, dtype=np.int64)
    for _ in range(PERCEPTRON_STEPS):
        v = G @ d
        i = int(v.argmin())
        if v[i] > 0:
            return [Fraction(int(x)) for x in d]
        d += G[i]
    return None


def is_weighted_rows(nbar, rows, losing_rows, method: Optional[str] = None) -> bool:
    """Feasibility only, from raw rows."""
    return class_weights_rows(nbar, rows, losing_rows, method) is not None


def class_weights_rows(nbar, rows, losing_rows, method: Optional[str] = None) -> Optional[tuple]:
    """Non-increasing integer class weights separating ``rows`` from ``losing_rows``, or None."""
    t = len(nbar)
    A, b = _system(t, rows, losing_rows)
    d = _perceptron(A, t) if method is None else None
    if d is None:
        d = _solve(t, A, b, method)
    if d is None:
        return None
    w, acc = [], 0
    for x in reversed(_integerize(d)):
        acc += x
        w.append(acc)
    return tuple(reversed(w))


def decide_weighted_invariants(ci: CharacteristicInvariants,
                               method: Optional[str] = None) -> Optional[WeightedRepresentation]:
    A, b = separation_system(ci)
    d = _solve(ci.t, A, b, method)
    if d is None:
        return None
    return _representation(ci, d)


def decide_weighted(game: Union[CharacteristicInvariants, SimpleGame],
                    method: Optional[str] = None) -> Optional[WeightedRepresentation]:
    """A separating representation, or None when the game is not weighted.

    Explicit games are converted through their invariants; the returned
    representation then carries the player classes.  A non-complete explicit
    game is never weighted.
    """
    if isinstance(game, CharacteristicInvariants):
        return decide_weighted_invariants(game, method)
    part = partition_players(game)
    if not part.totally_ordered:
        return None
    ci, part = extract_invariants(game)
    rep = decide_weighted_invariants(ci, method)
    if rep is None:
        return None
    return WeightedRepresentation(rep.quota, rep.class_weights, rep.nbar, part.classes)


class NotCovered(Exception):
    """Closed-form weights do not apply to this game."""


def closed_form_r1(ci: CharacteristicInvariants) -> WeightedRepresentation:
    if ci.t != 2 or ci.r != 1:
        raise NotCovered("closed form needs t=2 and r=1")
    veto, null = vetoer_and_null_classes(ci)
    if veto or null:
        raise NotCovered("game has vetoers or null players")
    (n1, n2), (m1, m2) = ci.nbar, ci.rows[0]
    if m2 == 1:
        w = (n2, 1)
        q = m1 * n2 + 1
    elif m2 == n2 - 1:
        c1 = min(n1, m1 + n2 - 2)
        if c1 == n1:
            w = (n1 - m1 + 2, n1 - m1 + 1)
        else:
            w = (n2, n2 - 1)
        q = m1 * w[0] + (n2 - 1) * w[1]
    else:
        raise NotCovered("second entry must be 1 or n2-1")
    return WeightedRepresentation(q, w, ci.nbar)


# -- two classes: M and P -------------------------------------------------

@dataclass(frozen=True)
class MPParameters:
    M: Fraction
    P: Fraction
    # (winning, losing) type pairs attaining the maxima; M_witness is None when M = 0 by default
    M_witness: Optional[tuple]
    P_witness: tuple

    @property
    def product(self) -> Fraction:
        return self.M * self.P

    def to_dict(self) -> dict:
        return {"M": str(self.M), "P": str(self.P), "MP": str(self.product),
                "M_witness": [list(x) for x in self.M_witness] if self.M_witness else None,
                "P_witness": [list(x) for x in self.P_witness]}


def _require_t2(ci):
    if ci.t != 2:
        raise ValueError(f"two classes required, got t={ci.t}")


def mp_parameters(ci: CharacteristicInvariants) -> MPParameters:
    _require_t2(ci)
    win = ci.winning_types()
    lose = ci.losing_types()
    best_m = None  # (value, c-a, pair)
    best_p = None
    for w in win:
        x, y = w
        for l in lose:
            xl, yl = l
            if xl >= x:
                key = (-Fraction(xl - x, y - yl), xl - x, (w, l))
                if best_m is None or key < best_m:
                    best_m = key
            else:
                key = (-Fraction(yl - y, x - xl), yl - y, (w, l))
                if best_p is None or key < best_p:
                    best_p = key
    if best_p is None:
        raise ValueError("no pair defines P; invariants fail the class-separation check")
    M = -best_m[0] if best_m else Fraction(0)
    return MPParameters(M, -best_p[0], best_m[2] if best_m else None, best_p[2])


def mp_weighted_test(ci: CharacteristicInvariants) -> bool:
    return mp_parameters(ci).product < 1


class WeightedGameError(ValueError):
    """Raised when a non-weightedness certificate is requested for a weighted game."""


def two_trade_certificate_t2(ci: CharacteristicInvariants):
    """A vectorial 2-trade whose pre-trade types are rows of M.

    Follows the three-case construction from the M/P witnesses, then moves
    the pre-trade types down to shift-minimal ones while adjusting the
    losing side so it stays losing.
    """
    from .trades import VectorialTrade

    mp = mp_parameters(ci)
    if mp.product < 1:
        raise WeightedGameError("game is weighted; no 2-trade exists")
    (a, b), (c, d) = mp.M_witness
    (a2, b2), (c2, d2) = mp.P_witness
    if c - a >= a2 - c2 and b - d <= d2 - b2:
        cc = min(c, a + a2)
        dd = min(d, b + b2)
        pre = [(a, b), (a2, b2)]
        post = [(cc, dd), (a + a2 - cc, b + b2 - dd)]
        case = "a"
    elif c - a > a2 - c2:
        pre = [(a, b), (a2, b2)]
        post = [(c2, d2), (a + a2 - c2, b + b2 - d2)]
        case = "b"
    else:
        pre = [(a, b), (c + c2 - a, d + d2 - b)]
        post = [(c, d), (c2, d2)]
        case = "c"
    pre, post = _lower_to_rows(ci, pre, post)
    return VectorialTrade.from_types(pre, post), case


def _lower_to_rows(ci, pre, post):
    n2 = ci.nbar[1]
    rows = set(ci.rows)
    pre = [list(p) for p in pre]
    post = [list(p) for p in post]

    def win(s):
        return winning_type(ci, s)

    changed = True
    while changed:
        changed = False
        for p in pre:
            if tuple(p) in rows:
                continue
            changed = True
            x, y = p
            if y > 0 and win((x, y - 1)):
                p[1] -= 1
                loser = next(q for q in post if q[1] > 0)
                loser[1] -= 1
            elif x > 0 and win((x - 1, y)):
                p[0] -= 1
                loser = next(q for q in post if q[0] > 0)
                loser[0] -= 1
            else:
                # minimal winning but not shift-minimal: shift one unit down
                p[0] -= 1
                p[1] += 1
                loser = next(q for q in post if q[0] >= 1 and q[1] <= n2 - 1)
                loser[0] -= 1
                loser[1] += 1
    return [tuple(p) for p in pre], [tuple(q) for q in post]
