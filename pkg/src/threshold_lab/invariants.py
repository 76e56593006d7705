"""Characteristic invariants (nbar, M) of complete simple games.

A complete game is determined up to isomorphism by its class sizes ``nbar``
(most desirable class first) and the matrix ``M`` whose rows are the types of
its shift-minimal winning coalitions.  A type wins iff it dominates some row
in the partial-sum order.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .game import (NotCompleteError, PlayerPartition, SimpleGame, partition_players,
                   shift_minimal_winning)
from .lattice import Lattice, lattice, partial_sums


class TypeOrder(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_types(a: Sequence[int], b: Sequence[int]) -> TypeOrder:
    if len(a) != len(b):
        raise ValueError(f"type vectors of different length: {len(a)} vs {len(b)}")
    ge = le = True
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            ge = False
        elif sa > sb:
            le = False
    if ge and le:
        return TypeOrder.EQUAL
    if ge:
        return TypeOrder.DOMINATES
    if le:
        return TypeOrder.DOMINATED
    return TypeOrder.INCOMPARABLE


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a`` dominates ``b`` (possibly equal)."""
    return compare_types(a, b) in (TypeOrder.DOMINATES, TypeOrder.EQUAL)


def canonical_key(row: Sequence[int]) -> tuple:
    """Sort key putting rows in descending lexicographic partial-sum order."""
    return tuple(-x for x in partial_sums(row))


@dataclass(frozen=True)
class CharacteristicInvariants:
    """Class sizes plus shift-minimal winning types, rows kept as given."""

    nbar: tuple
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "nbar", tuple(int(x) for x in self.nbar))
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))

    @classmethod
    def canonical(cls, nbar: Sequence[int], rows: Iterable[Sequence[int]]) -> "CharacteristicInvariants":
        rows = sorted({tuple(r) for r in rows}, key=canonical_key)
        return cls(tuple(nbar), tuple(rows))

    @property
    def n(self) -> int:
        return sum(self.nbar)

    @property
    def t(self) -> int:
        return len(self.nbar)

    @property
    def r(self) -> int:
        return len(self.rows)

    # -- cached lattice views --------------------------------------------

    @cached_property
    def lattice(self) -> Lattice:
        return lattice(self.nbar)

    @cached_property
    def winning_mask(self) -> int:
        lat = self.lattice
        return lat.winning_mask(lat.mask_of(self.rows))

    @cached_property
    def losing_mask(self) -> int:
        return self.lattice.full & ~self.winning_mask

    def winning_types(self) -> list[tuple]:
        return self.lattice.types_of(self.winning_mask)

    def losing_types(self) -> list[tuple]:
        return self.lattice.types_of(self.losing_mask)

    def minimal_winning_types(self) -> list[tuple]:
        lat = self.lattice
        return lat.types_of(lat.minimal_winning(self.winning_mask))

    def to_dict(self) -> dict:
        return {"classes": list(self.nbar), "shift_minimal": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, doc: dict) -> "CharacteristicInvariants":
        return cls(tuple(doc["classes"]), tuple(tuple(r) for r in doc["shift_minimal"]))

    def __str__(self) -> str:
        rows = "; ".join(" ".join(map(str, r)) for r in self.rows)
        return f"nbar={self.nbar} M=({rows})"


def validate_invariants(ci: CharacteristicInvariants) -> tuple[bool, list[str]]:
    """Check that ``ci`` describes a complete game; report every violation.

    Tags: ``range`` (rows inside the box), ``antichain`` (rows pairwise
    incomparable), ``separation`` (consecutive classes really differ) and
    ``order`` (rows in canonical order).
    """
    errors: list[str] = []
    nbar, rows, t = ci.nbar, ci.rows, ci.t
    if t == 0 or any(x <= 0 for x in nbar):
        return False, ["class sizes must be a non-empty vector of positive integers"]
    if not rows:
        return False, ["M has no rows"]
    for p, row in enumerate(rows):
        if len(row) != t or any(not 0 <= x <= n for x, n in zip(row, nbar)):
            errors.append(f"range: row {p} = {row} is not between 0 and {nbar}")
    if errors:
        return False, errors
    for p, q in itertools.combinations(range(len(rows)), 2):
        if compare_types(rows[p], rows[q]) is not TypeOrder.INCOMPARABLE:
            errors.append(f"antichain: rows {p} and {q} are comparable")
    if t == 1:
        if not rows[0][0] > 0:
            errors.append("separation: t=1 requires a positive entry")
    else:
        for k in range(t - 1):
            if not any(r[k] > 0 and r[k + 1] < nbar[k + 1] for r in rows):
                errors.append(f"separation: no row separates classes {k + 1} and {k + 2}")
    keys = [canonical_key(r) for r in rows]
    for p in range(len(rows) - 1):
        if not keys[p] < keys[p + 1]:
            errors.append(f"order: rows {p} and {p + 1} are not in partial-sum lexicographic order")
    return not errors, errors


def _require_valid(ci: CharacteristicInvariants) -> None:
    ok, errors = validate_invariants(ci)
    if not ok:
        raise ValueError("invalid characteristic invariants: " + "; ".join(errors))


def extract_invariants(game: SimpleGame) -> tuple[CharacteristicInvariants, PlayerPartition]:
    part = partition_players(game)
    if not part.totally_ordered:
        raise NotCompleteError("characteristic invariants require a complete game")
    shift_min = shift_minimal_winning(game, part)
    rows = {part.coalition_type(m) for m in shift_min}
    return CharacteristicInvariants.canonical(part.sizes, rows), part


def class_partition(nbar: Sequence[int]) -> PlayerPartition:
    """Consecutive player blocks used when expanding invariants."""
    classes, start = [], 0
    for size in nbar:
        classes.append(tuple(range(start, start + size)))
        start += size
    return PlayerPartition(tuple(classes), True)


def expand_type(counts: Sequence[int], partition: PlayerPartition) -> list[int]:
    """All coalitions with the given type."""
    per_class = []
    for cls, c in zip(partition.classes, counts):
        per_class.append([sum(1 << p for p in combo) for combo in itertools.combinations(cls, c)])
    return [sum(parts) for parts in itertools.product(*per_class)]


def reconstruct(ci: CharacteristicInvariants) -> SimpleGame:
    _require_valid(ci)
    part = class_partition(ci.nbar)
    coalitions: list[int] = []
    for typ in ci.minimal_winning_types():
        coalitions.extend(expand_type(typ, part))
    return SimpleGame(ci.n, frozenset(coalitions))


def count_minimal_winning(ci: CharacteristicInvariants) -> int:
    return sum(math.prod(math.comb(n, s) for n, s in zip(ci.nbar, typ))
               for typ in ci.minimal_winning_types())


def shift_maximal_losing_types(ci: CharacteristicInvariants) -> tuple:
    """Rows of the matrix Y, in canonical order."""
    lat = ci.lattice
    return tuple(lat.types_of(lat.shift_maximal(ci.losing_mask)))


def winning_type(ci: CharacteristicInvariants, s: Sequence[int]) -> bool:
    s = tuple(s)
    if len(s) != ci.t or any(not 0 <= x <= n for x, n in zip(s, ci.nbar)):
        raise ValueError(f"type {s} outside Lambda{ci.nbar}")
    return any(dominates(s, row) for row in ci.rows)


def isomorphic(g1: SimpleGame, g2: SimpleGame) -> bool:
    """Isomorphism test for complete games via equality of invariants."""
    if g1.n != g2.n:
        return False
    return extract_invariants(g1)[0] == extract_invariants(g2)[0]


def vetoer_and_null_classes(ci: CharacteristicInvariants) -> tuple[bool, bool]:
    """(first class are vetoers, last class are nulls)."""
    veto = all(r[0] == ci.nbar[0] for r in ci.rows)
    null = ci.t > 1 and all(r[-1] == 0 for r in ci.rows)
    return veto, null
