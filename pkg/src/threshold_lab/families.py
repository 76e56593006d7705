"""Named games and parametric families as characteristic invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .invariants import (CharacteristicInvariants, dominates, validate_invariants,
                         vetoer_and_null_classes)


class FamilyError(ValueError):
    pass


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise FamilyError(message)


def unsc() -> CharacteristicInvariants:
    return CharacteristicInvariants((5, 10), ((5, 4),))


def canada() -> CharacteristicInvariants:
    return CharacteristicInvariants((2, 8), ((1, 6),))


def fm_smallest() -> CharacteristicInvariants:
    return CharacteristicInvariants((2, 2, 3), ((2, 1, 0), (1, 0, 3)))


def lemma_5_1(m: int) -> CharacteristicInvariants:
    _need(m >= 3, "lemma_5_1 needs m >= 3")
    return CharacteristicInvariants((2, m, m), ((2, 0, 1), (1, 1, m - 1)))


def lemma_5_2(m: int) -> CharacteristicInvariants:
    _need(m >= 3, "lemma_5_2 needs m >= 3")
    # at m = 3 the row (2,0,2) dominates (1,0,3) and is dropped
    return _reduced((2, m, m), ((2, 1, 0), (2, 0, 2), (1, 0, m), (0, m, m - 1)))


def _reduced(nbar, rows) -> CharacteristicInvariants:
    """Invariants of the game whose winning types dominate some listed row."""
    kept = [r for r in rows
            if not any(o != r and dominates(r, o) for o in rows)]
    return CharacteristicInvariants.canonical(nbar, kept)


def lemma_6_1_first(k1: int = 0, k2: int = 0, k3: int = 0, l: int = 0) -> CharacteristicInvariants:
    _need(min(k1, k2, k3, l) >= 0, "lemma_6_1_first parameters must be non-negative")
    n1, n2, n3 = 3 + k1 + 2 * l, 3 + k2, 5 + k3 + 2 * l
    rows = ((n1 - (l + 1), n2 - 1, n3 - (l + 2)), (n1 - 2 * (l + 1), n2 - 1, n3))
    return CharacteristicInvariants((n1, n2, n3), rows)


def lemma_6_1_second(k1: int = 0, k2: int = 0, l: int = 0) -> CharacteristicInvariants:
    _need(min(k1, k2, l) >= 0, "lemma_6_1_second parameters must be non-negative")
    nbar = (3 + k1 + 2 * l, 3 + k2, 5 + 2 * l)
    return CharacteristicInvariants(nbar, ((l + 1, 1, l + 2), (0, 1, 2 * (l + 2))))


N11_MATRICES = {
    1: ((2, 2, 3), (1, 2, 5)),
    2: ((1, 1, 2), (0, 1, 4)),
    3: ((3, 3, 0), (3, 0, 4), (2, 3, 2), (0, 3, 5)),
    4: ((3, 0, 0), (2, 0, 2), (0, 3, 1), (0, 0, 5)),
}


def n11(i: int) -> CharacteristicInvariants:
    _need(i in N11_MATRICES, "n11 index must be 1..4")
    return CharacteristicInvariants((3, 3, 5), N11_MATRICES[i])


def t4_n9() -> CharacteristicInvariants:
    rows = ((1, 0, 1, 0), (0, 2, 0, 1), (0, 1, 2, 0), (0, 1, 1, 2), (0, 0, 3, 2))
    return CharacteristicInvariants((1, 2, 3, 3), rows)


LIFT_CONSTRUCTIONS = ("padding", "ones")


def lift_types(base: CharacteristicInvariants, mode: str = "invariant",
               construction: str = "padding") -> CharacteristicInvariants:
    """A game with one more class of two players and the same number of rows.

    ``padding`` appends a class of two null players, or prepends a class of
    two vetoers when the base already has nulls.  Both leave every robustness
    level unchanged.  ``ones`` is the column-of-ones insertion: a new last
    class of two with a one in every row, placed before an existing null
    class.  It does not preserve robustness levels in general (the lift of
    ``lemma_5_1(3)`` already fails at 2).

    The construction does not depend on ``mode``; it is accepted so the CLI
    can record which boundary the caller is tracking.
    """
    if mode not in ("invariant", "trade"):
        raise FamilyError(f"unknown lift mode {mode!r}")
    if construction not in LIFT_CONSTRUCTIONS:
        raise FamilyError(f"unknown lift construction {construction!r}")
    veto, null = vetoer_and_null_classes(base)
    if construction == "padding":
        if not null:
            return CharacteristicInvariants(base.nbar + (2,), tuple(r + (0,) for r in base.rows))
        if not veto:
            return CharacteristicInvariants((2,) + base.nbar, tuple((2,) + r for r in base.rows))
        raise FamilyError("base already has both vetoers and null players")
    if null:
        nbar = base.nbar[:-1] + (2, base.nbar[-1])
        rows = tuple(r[:-1] + (1, 0) for r in base.rows)
    else:
        nbar = base.nbar + (2,)
        rows = tuple(r + (1,) for r in base.rows)
    return CharacteristicInvariants(nbar, rows)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)


GENERATORS: dict[str, Callable[..., CharacteristicInvariants]] = {
    "unsc": unsc,
    "canada": canada,
    "fm_smallest": fm_smallest,
    "lemma_5_1": lemma_5_1,
    "lemma_5_2": lemma_5_2,
    "lemma_6_1_first": lemma_6_1_first,
    "lemma_6_1_second": lemma_6_1_second,
    "n11": n11,
    "t4_n9": t4_n9,
}


def generate(spec: FamilySpec) -> CharacteristicInvariants:
    params = dict(spec.params)
    if spec.name == "lift":
        base = params.pop("base", None)
        _need(base is not None, "lift needs a base family")
        mode = str(params.pop("mode", "invariant"))
        construction = str(params.pop("construction", "padding"))
        times = int(params.pop("times", 1))
        ci = generate(FamilySpec(str(base), params))
        for _ in range(times):
            ci = lift_types(ci, mode, construction)
    else:
        gen = GENERATORS.get(spec.name)
        _need(gen is not None, f"unknown family {spec.name!r}")
        try:
            ci = gen(**{k: int(v) for k, v in params.items()})
        except TypeError as exc:
            raise FamilyError(f"bad parameters for {spec.name}: {exc}") from None
    ok, errors = validate_invariants(ci)
    if not ok:
        raise FamilyError(f"{spec.name} produced invalid invariants: {errors}")
    return ci


def lemma_6_1_membership(ci: CharacteristicInvariants) -> Optional[FamilySpec]:
    """The two-row t=3 family member equal to ``ci``, if any."""
    if ci.t != 3 or ci.r != 2:
        return None
    (n1, n2, n3), (top, bottom) = ci.nbar, ci.rows
    # first sub-family: l+1 is the drop in the first column
    l = top[0] - bottom[0] - 1
    if l >= 0:
        k1, k2, k3 = n1 - 3 - 2 * l, n2 - 3, n3 - 5 - 2 * l
        if min(k1, k2, k3) >= 0 and lemma_6_1_first(k1, k2, k3, l) == ci:
            return FamilySpec("lemma_6_1_first", {"k1": k1, "k2": k2, "k3": k3, "l": l})
    if bottom[2] % 2 == 0:
        l = bottom[2] // 2 - 2
        k1, k2 = n1 - 3 - 2 * l, n2 - 3
        if l >= 0 and min(k1, k2) >= 0 and lemma_6_1_second(k1, k2, l) == ci:
            return FamilySpec("lemma_6_1_second", {"k1": k1, "k2": k2, "l": l})
    return None


def lemma_6_1_instances(n: int) -> list[CharacteristicInvariants]:
    """All members of both sub-families with ``n`` players."""
    out = []
    for l in range(n):
        for k1 in range(n):
            for k2 in range(n):
                k3 = n - 11 - 4 * l - k1 - k2
                if k3 >= 0:
                    out.append(lemma_6_1_first(k1, k2, k3, l))
                if n - 11 - 4 * l - k1 - k2 == 0:
                    out.append(lemma_6_1_second(k1, k2, l))
    return out
