"""Explicit monotone simple games on at most 64 players.

Coalitions are plain ``int`` bit masks: bit ``i`` set means player ``i`` is a
member.  A game is stored through its minimal winning coalitions; every other
set (winning, losing, maximal losing) is derived on demand.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

MAX_PLAYERS = 64
# Above this size the full winning table (2**n booleans) is not materialised.
TABLE_LIMIT = 20


class GameError(ValueError):
    """Raised for malformed or improper games."""


class NotCompleteError(GameError):
    """Raised when an operation requires a complete game."""


class FullyTrivialError(GameError):
    """Removing nulls and vetoers leaves no proper game (e.g. unanimity).

    Such games are weighted; callers treat the signal as a verdict.
    """


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(players: Iterable[int]) -> int:
    out = 0
    for p in players:
        out |= 1 << p
    return out


def members(mask: int) -> list[int]:
    return list(bits(mask))


def _minimize(masks: Iterable[int]) -> set[int]:
    """Keep the inclusion-minimal masks of a family."""
    ordered = sorted(set(masks), key=int.bit_count)
    kept: list[int] = []
    for m in ordered:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return set(kept)


@dataclass(frozen=True)
class SimpleGame:
    """A proper monotone simple game given by its minimal winning coalitions."""

    n: int
    min_winning: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise GameError(f"player count must be in 1..{MAX_PLAYERS}, got {self.n}")
        mw = frozenset(int(m) for m in self.min_winning)
        object.__setattr__(self, "min_winning", mw)
        if not mw:
            raise GameError("game has no winning coalition")
        if 0 in mw:
            raise GameError("empty coalition is winning: every coalition wins")
        full = (1 << self.n) - 1
        for m in mw:
            if m < 0 or m & ~full:
                raise GameError(f"coalition {m:#x} uses players outside 0..{self.n - 1}")
        ordered = sorted(mw, key=int.bit_count)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                if a & b == a:
                    raise GameError("minimal winning coalitions must form an antichain")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_lists(cls, n: int, coalitions: Iterable[Iterable[int]]) -> "SimpleGame":
        masks = []
        for c in coalitions:
            c = list(c)
            if any(not 0 <= p < n for p in c):
                raise GameError(f"player index out of range in {c}")
            masks.append(mask_of(c))
        return cls(n, frozenset(_minimize(masks)))

    @classmethod
    def from_winning(cls, n: int, winning: Iterable[int]) -> "SimpleGame":
        """Build from any generating family of winning coalitions."""
        return cls(n, frozenset(_minimize(winning)))

    @classmethod
    def from_weights(cls, quota, weights: Sequence) -> "SimpleGame":
        """Weighted game ``[quota; w_0, ..., w_{n-1}]`` (winning iff weight >= quota)."""
        n = len(weights)
        if quota <= 0:
            raise GameError("quota must be positive")
        if any(w < 0 for w in weights):
            raise GameError("weights must be non-negative")
        if sum(weights) < quota:
            raise GameError("quota exceeds total weight: no coalition wins")
        order = sorted(range(n), key=lambda i: (-weights[i], i))
        suffix = [0] * (n + 1)
        for pos in range(n - 1, -1, -1):
            suffix[pos] = suffix[pos + 1] + weights[order[pos]]
        found: list[int] = []

        # Depth-first over players by decreasing weight; a winning set is
        # minimal iff dropping its lightest member loses.
        def walk(pos: int, mask: int, total, lightest):
            if total >= quota:
                if total - lightest < quota:
                    found.append(mask)
                return
            if pos == n or total + suffix[pos] < quota:
                return
            p = order[pos]
            w = weights[p]
            if w > 0:
                walk(pos + 1, mask | (1 << p), total + w, w)
            walk(pos + 1, mask, total, lightest)

        walk(0, 0, 0, 0)
        return cls(n, frozenset(found))

    # -- basic queries --------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _table(self) -> Optional[np.ndarray]:
        if self.n > TABLE_LIMIT:
            return None
        table = np.zeros(1 << self.n, dtype=bool)
        table[list(self.min_winning)] = True
        for b in range(self.n):
            view = table.reshape(-1, 2, 1 << b)
            view[:, 1, :] |= view[:, 0, :]
        return table

    def is_winning(self, s: int) -> bool:
        table = self._table
        if table is not None:
            return bool(table[s])
        return any(m & s == m for m in self.min_winning)

    def winning_masks(self) -> np.ndarray:
        """All winning coalitions (only for n <= TABLE_LIMIT)."""
        if self._table is None:
            raise GameError(f"explicit winning table limited to n <= {TABLE_LIMIT}")
        return np.flatnonzero(self._table)

    def to_lists(self) -> list[list[int]]:
        return [members(m) for m in sorted(self.min_winning)]

    def relabel(self, perm: Sequence[int]) -> "SimpleGame":
        """Return the isomorphic game where player ``i`` becomes ``perm[i]``."""
        out = []
        for m in self.min_winning:
            out.append(mask_of(perm[i] for i in bits(m)))
        return SimpleGame(self.n, frozenset(out))

    @cached_property
    def _containing(self) -> list[list[int]]:
        by_player: list[list[int]] = [[] for _ in range(self.n)]
        for m in sorted(self.min_winning):
            for p in bits(m):
                by_player[p].append(m)
        return by_player


class Dominance(enum.Enum):
    LEFT = "left-dominates"
    RIGHT = "right-dominates"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class PlayerPartition:
    """Equivalence classes of players.

    For a complete game ``classes[0]`` holds the most desirable players and
    every class strictly dominates the ones after it.  Otherwise the classes
    are sorted by (size, smallest member) and ``totally_ordered`` is False.
    """

    classes: tuple
    totally_ordered: bool

    @property
    def t(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.classes)

    def class_of(self) -> dict:
        return {p: k for k, cls in enumerate(self.classes) for p in cls}

    def coalition_type(self, s: int) -> tuple:
        return tuple((mask_of(c) & s).bit_count() for c in self.classes)

    def representative(self, counts: Sequence[int]) -> int:
        """Coalition taking the first ``counts[k]`` players of class ``k``."""
        out = 0
        for cls, c in zip(self.classes, counts):
            for p in cls[:c]:
                out |= 1 << p
        return out


def is_winning(game: SimpleGame, s: int) -> bool:
    if s & ~game.full:
        raise GameError("coalition uses players outside the game")
    return game.is_winning(s)


def _dominates(game: SimpleGame, i: int, j: int) -> bool:
    """i >= j: swapping j out for i never turns a winning coalition losing."""
    bi, bj = 1 << i, 1 << j
    for m in game._containing[j]:
        if m & bi:
            continue
        if not game.is_winning((m ^ bj) | bi):
            return False
    return True


def dominance(game: SimpleGame, i: int, j: int) -> Dominance:
    if i == j or not (0 <= i < game.n and 0 <= j < game.n):
        raise GameError("dominance needs two distinct players of the game")
    left = _dominates(game, i, j)
    right = _dominates(game, j, i)
    if left and right:
        return Dominance.EQUIVALENT
    if left:
        return Dominance.LEFT
    if right:
        return Dominance.RIGHT
    return Dominance.INCOMPARABLE


def _swap(m: int, i: int, j: int) -> int:
    bi, bj = 1 << i, 1 << j
    if bool(m & bi) != bool(m & bj):
        m ^= bi | bj
    return m


def _equivalent(game: SimpleGame, i: int, j: int) -> bool:
    mw = game.min_winning
    return all(_swap(m, i, j) in mw for m in mw)


def partition_players(game: SimpleGame) -> PlayerPartition:
    classes: list[list[int]] = []
    for p in range(game.n):
        for cls in classes:
            if _equivalent(game, cls[0], p):
                cls.append(p)
                break
        else:
            classes.append([p])
    reps = [c[0] for c in classes]
    # rank a class by how many other classes it dominates
    wins = {k: 0 for k in range(len(classes))}
    total = True
    for a, b in itertools.combinations(range(len(classes)), 2):
        verdict = dominance(game, reps[a], reps[b])
        if verdict is Dominance.LEFT:
            wins[a] += 1
        elif verdict is Dominance.RIGHT:
            wins[b] += 1
        else:
            total = False
    if total:
        order = sorted(range(len(classes)), key=lambda k: -wins[k])
    else:
        order = sorted(range(len(classes)), key=lambda k: (len(classes[k]), classes[k][0]))
    return PlayerPartition(tuple(tuple(classes[k]) for k in order), total)


def is_complete(game: SimpleGame) -> bool:
    return partition_players(game).totally_ordered


def swap_certificate(game: SimpleGame) -> Optional[tuple[int, int, int, int]]:
    """Witness of non-completeness: ``(x1, x2, i, j)``.

    ``x1`` and ``x2`` are minimal winning, ``i in x1 - x2`` and
    ``j in x2 - x1``, and exchanging ``i`` and ``j`` makes both losing.
    Returns None for complete games.  Search order is lexicographic in
    (x1, x2, i, j) over minimal winning coalitions sorted by mask value.
    """
    if is_complete(game):
        return None
    mw = sorted(game.min_winning)
    for x1 in mw:
        for x2 in mw:
            only1, only2 = x1 & ~x2, x2 & ~x1
            for i in bits(only1):
                for j in bits(only2):
                    y1 = (x1 ^ (1 << i)) | (1 << j)
                    y2 = (x2 ^ (1 << j)) | (1 << i)
                    if not game.is_winning(y1) and not game.is_winning(y2):
                        return x1, x2, i, j
    raise AssertionError("non-complete game without swap certificate")


def maximal_losing(game: SimpleGame) -> frozenset:
    table = game._table
    if table is not None:
        idx = np.arange(1 << game.n)
        ok = ~table
        for b in range(game.n):
            bit = 1 << b
            ok &= ((idx & bit) != 0) | table[idx | bit]
        return frozenset(int(x) for x in np.flatnonzero(ok))
    # Berge dualisation: maximal losing sets are complements of the minimal
    # transversals of the minimal winning family.
    transversals = {0}
    for edge in sorted(game.min_winning):
        grown = set()
        for tr in transversals:
            if tr & edge:
                grown.add(tr)
            else:
                grown.update(tr | (1 << v) for v in bits(edge))
        transversals = _minimize(grown)
    return frozenset(game.full & ~tr for tr in transversals)


def trivial_players(game: SimpleGame) -> tuple[frozenset, frozenset]:
    """Return (vetoers, nulls) as sets of player indices."""
    common = game.full
    union = 0
    for m in game.min_winning:
        common &= m
        union |= m
    return frozenset(bits(common)), frozenset(bits(game.full & ~union))


def reduce_trivial(game: SimpleGame) -> SimpleGame:
    """Drop null and veto players; survivors are relabelled in index order."""
    vetoers, nulls = trivial_players(game)
    if not vetoers and not nulls:
        return game
    keep = [p for p in range(game.n) if p not in vetoers and p not in nulls]
    if not keep:
        raise FullyTrivialError("no non-trivial players remain")
    drop = mask_of(vetoers)
    new_index = {p: k for k, p in enumerate(keep)}
    reduced = []
    for m in game.min_winning:
        rest = m & ~drop
        if rest == 0:
            raise FullyTrivialError("the vetoers alone are winning")
        reduced.append(mask_of(new_index[p] for p in bits(rest)))
    return SimpleGame(len(keep), frozenset(_minimize(reduced)))


def _lower_covers(counts: Sequence[int], sizes: Sequence[int]) -> Iterator[tuple]:
    t = len(counts)
    for k in range(t - 1):
        if counts[k] > 0 and counts[k + 1] < sizes[k + 1]:
            c = list(counts)
            c[k] -= 1
            c[k + 1] += 1
            yield tuple(c)
    if counts[-1] > 0:
        c = list(counts)
        c[-1] -= 1
        yield tuple(c)


def shift_minimal_winning(game: SimpleGame, partition: Optional[PlayerPartition] = None) -> frozenset:
    """Minimal winning coalitions that lose under every one-step downward shift."""
    part = partition or partition_players(game)
    if not part.totally_ordered:
        raise NotCompleteError("shift-minimal coalitions require a complete game")
    sizes = part.sizes
    status: dict[tuple, bool] = {}
    out = []
    for m in game.min_winning:
        typ = part.coalition_type(m)
        if typ not in status:
            status[typ] = not any(game.is_winning(part.representative(c))
                                  for c in _lower_covers(typ, sizes))
        if status[typ]:
            out.append(m)
    return frozenset(out)
