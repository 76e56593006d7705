"""Trading transforms, vectorial trades and bounded robustness searches.

A k-trade certificate is a pair of coalition lists of equal length whose
per-player appearance counts agree, with every pre-trade coalition winning
and every post-trade coalition losing.  At the type level the balance
condition becomes equality of component sums.

The search works on sumsets.  ``L_j``, the set of sums of ``j`` losing types,
is down-closed because the losing types are, so it is generated by sums of
componentwise-maximal losing types followed by a down-closure.  With codes in
a mixed radix wide enough for ``max_k``-fold sums, both the pre-trade sumsets
and ``L_j`` are shift/or computations on integers.
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .game import PlayerPartition, SimpleGame, members
from .invariants import CharacteristicInvariants, canonical_key, winning_type
from .lattice import iter_bits, lattice


# -- player level ------------------------------------------------------------

@dataclass(frozen=True)
class TradingTransform:
    pre: tuple
    post: tuple

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "post", tuple(self.post))

    def balanced(self) -> bool:
        if len(self.pre) != len(self.post):
            return False
        return _appearances(self.pre) == _appearances(self.post)

    def to_dict(self) -> dict:
        return {"pre": [members(x) for x in self.pre], "post": [members(y) for y in self.post]}


def _appearances(coalitions) -> Counter:
    c: Counter = Counter()
    for x in coalitions:
        c.update(members(x))
    return c


class TransformStatus(enum.Enum):
    VALID_CERTIFICATE = "valid-certificate"
    BALANCED_NOT_CERTIFICATE = "balanced-but-not-certificate"
    UNBALANCED = "unbalanced"


def verify_transform(game: SimpleGame, t: TradingTransform) -> TransformStatus:
    if not t.balanced():
        return TransformStatus.UNBALANCED
    if all(game.is_winning(x) for x in t.pre) and not any(game.is_winning(y) for y in t.post):
        return TransformStatus.VALID_CERTIFICATE
    return TransformStatus.BALANCED_NOT_CERTIFICATE


# -- type level --------------------------------------------------------------

class Mode(enum.Enum):
    TRADE = "trade"
    INVARIANT = "invariant-trade"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        text = text.lower()
        if text in ("trade", "t"):
            return cls.TRADE
        if text in ("invariant", "invariant-trade", "itr", "i"):
            return cls.INVARIANT
        raise ValueError(f"unknown mode {text!r}")


def _canonical_multiset(types) -> tuple:
    counts = Counter(tuple(int(x) for x in s) for s in types)
    return tuple(sorted(counts.items(), key=lambda kv: canonical_key(kv[0])))


@dataclass(frozen=True)
class VectorialTrade:
    """Pre and post multisets as ((type, multiplicity), ...) in canonical order."""

    pre: tuple
    post: tuple

    @classmethod
    def from_types(cls, pre: Sequence[Sequence[int]], post: Sequence[Sequence[int]]) -> "VectorialTrade":
        return cls(_canonical_multiset(pre), _canonical_multiset(post))

    @property
    def j(self) -> int:
        return sum(m for _, m in self.pre)

    def pre_list(self) -> list[tuple]:
        return [s for s, m in self.pre for _ in range(m)]

    def post_list(self) -> list[tuple]:
        return [s for s, m in self.post for _ in range(m)]

    def balanced(self) -> bool:
        pre, post = self.pre_list(), self.post_list()
        if len(pre) != len(post) or not pre:
            return False
        width = {len(s) for s in pre + post}
        if len(width) != 1:
            return False
        return [sum(c) for c in zip(*pre)] == [sum(c) for c in zip(*post)]

    def to_dict(self, mode: Optional[Mode] = None) -> dict:
        doc = {"k": self.j,
               "pre": [{"type": list(s), "mult": m} for s, m in self.pre],
               "post": [{"type": list(s), "mult": m} for s, m in self.post]}
        if mode is not None:
            doc = {"mode": mode.value, **doc}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "VectorialTrade":
        def side(items):
            return [tuple(it["type"]) for it in items for _ in range(int(it.get("mult", 1)))]
        return cls.from_types(side(doc["pre"]), side(doc["post"]))

    def __str__(self) -> str:
        def side(lst):
            return ", ".join(str(s) for s in lst)
        return f"<{side(self.pre_list())}; {side(self.post_list())}>"


def verify_vectorial(ci: CharacteristicInvariants, v: VectorialTrade, mode: Mode = Mode.TRADE) -> bool:
    if v.j == 0:
        raise ValueError("a trade needs at least one coalition on each side")
    pre, post = v.pre_list(), v.post_list()
    if len(pre) != len(post):
        return False
    for s in pre + post:
        if len(s) != ci.t or any(not 0 <= x <= n for x, n in zip(s, ci.nbar)):
            return False
    if not v.balanced():
        return False
    rows = set(ci.rows)
    for s in pre:
        if not winning_type(ci, s):
            return False
        if mode is Mode.INVARIANT and s not in rows:
            return False
    return not any(winning_type(ci, s) for s in post)


# -- expansion to players ----------------------------------------------------

def _split_class(a: Sequence[int], b: Sequence[int]) -> tuple[list[set], list[set]]:
    """Subsets of {1..} with |A_i| = a_i, |B_j| = b_j and equal element counts."""
    A = [set() for _ in a]
    B = [set() for _ in b]
    _fill(list(a), list(b), A, B)
    return A, B


def _fill(a: list, b: list, A: list, B: list) -> None:
    live_a = [i for i, x in enumerate(a) if x > 0]
    live_b = [i for i, x in enumerate(b) if x > 0]
    if not live_a and not live_b:
        return
    if sum(a) != sum(b):
        raise ValueError("class totals differ")
    # a shared value: give both the initial segment and drop them
    vals_b = {}
    for i in live_b:
        vals_b.setdefault(b[i], i)
    for i in live_a:
        jb = vals_b.get(a[i])
        if jb is not None:
            seg = set(range(1, a[i] + 1))
            A[i] |= seg
            B[jb] |= seg
            a2, b2 = a[:], b[:]
            a2[i] = 0
            b2[jb] = 0
            _fill(a2, b2, A, B)
            return
    top_a = max(a[i] for i in live_a)
    top_b = max(b[i] for i in live_b)
    if top_b > top_a:
        _fill(b, a, B, A)
        return
    m = top_a
    lead = [i for i in live_a if a[i] == m]
    l = len(lead)
    others = sorted(live_b, key=lambda i: (-b[i], i))[:l]
    a2, b2 = a[:], b[:]
    for i in lead:
        a2[i] -= 1
    for i in others:
        b2[i] -= 1
    _fill(a2, b2, A, B)
    for i in lead:
        A[i].add(m)
    for i in others:
        B[i].add(m)


def expand_vectorial(v: VectorialTrade, partition: PlayerPartition) -> TradingTransform:
    pre, post = v.pre_list(), v.post_list()
    pre_masks = [0] * len(pre)
    post_masks = [0] * len(post)
    for k, cls in enumerate(partition.classes):
        players = sorted(cls)
        A, B = _split_class([s[k] for s in pre], [s[k] for s in post])
        for i, sset in enumerate(A):
            for e in sset:
                pre_masks[i] |= 1 << players[e - 1]
        for i, sset in enumerate(B):
            for e in sset:
                post_masks[i] |= 1 << players[e - 1]
    return TradingTransform(tuple(pre_masks), tuple(post_masks))


# -- search ------------------------------------------------------------------

@dataclass(frozen=True)
class RobustnessReport:
    mode: Mode
    max_k: int
    k: Optional[int] = None
    certificate: Optional[VectorialTrade] = None

    @property
    def fails(self) -> bool:
        return self.k is not None

    @property
    def verdict(self) -> str:
        return f"fails-at-{self.k}" if self.fails else "robust-up-to-max-k"

    def to_dict(self) -> dict:
        doc = {"mode": self.mode.value, "max_k": self.max_k, "verdict": self.verdict, "k": self.k}
        if self.certificate is not None:
            c = self.certificate.to_dict()
            doc["pre"], doc["post"] = c["pre"], c["post"]
        return doc


def pre_trade_types(ci: CharacteristicInvariants, mode: Mode) -> list[tuple]:
    if mode is Mode.INVARIANT:
        return sorted(set(ci.rows), key=canonical_key)
    return ci.minimal_winning_types()


def maximal_losing_types(ci: CharacteristicInvariants) -> list[tuple]:
    """Componentwise maximal losing types."""
    lat = ci.lattice
    return lat.types_of(lat.maximal_losing(ci.losing_mask))


class SumsetSearch:
    """Level-by-level sumsets of pre-trade and losing types for one game."""

    def __init__(self, ci: CharacteristicInvariants, mode: Mode, max_k: int,
                 post_maximal_only: bool = False):
        self.ci = ci
        self.lat = lattice(ci.nbar, max(2, max_k))
        self.pre_types = pre_trade_types(ci, mode)
        self.post_types = maximal_losing_types(ci)
        enc = self.lat.encode
        self.pre_codes = [enc(s) for s in self.pre_types]
        self.post_codes = [enc(s) for s in self.post_types]
        self.closed = not post_maximal_only
        self.P = [1]
        self.Lraw = [1]
        self.L = [1]

    def step(self) -> bool:
        """Add one level; True if the new level admits a certificate."""
        P = 0
        prev = self.P[-1]
        for c in self.pre_codes:
            P |= prev << c
        L = 0
        prev = self.Lraw[-1]
        for c in self.post_codes:
            L |= prev << c
        self.P.append(P)
        self.Lraw.append(L)
        self.L.append(self.lat.down_close(L) if self.closed else L)
        return bool(P & self.L[-1])

    def certificate(self) -> VectorialTrade:
        j = len(self.P) - 1
        lat = self.lat
        hits = self.P[j] & self.L[j]
        target = (hits & -hits).bit_length() - 1
        pre = self._peel(target, j, self.pre_types, self.pre_codes, self.P)
        # a dominating sum of j maximal losing types, then split the target under it
        cover = lat.up_close(1 << target) & self.Lraw[j]
        top = (cover & -cover).bit_length() - 1
        caps = self._peel(top, j, self.post_types, self.post_codes, self.Lraw)
        return VectorialTrade.from_types(pre, _split_under(lat.decode(target), caps))

    def _peel(self, code: int, j: int, types, codes, levels) -> list[tuple]:
        out = []
        lat = self.lat
        for level in range(j, 0, -1):
            for s, c in zip(types, codes):
                rest = code - c
                if rest >= 0 and levels[level - 1] >> rest & 1 and lat.code_leq(c, code):
                    out.append(s)
                    code = rest
                    break
            else:  # pragma: no cover - sumset invariant
                raise AssertionError("sumset decomposition failed")
        return out


def _split_under(target: Sequence[int], caps: list[tuple]) -> list[tuple]:
    """Split ``target`` into len(caps) vectors, the i-th bounded by caps[i]."""
    out = [[0] * len(target) for _ in caps]
    for k, total in enumerate(target):
        for i, cap in enumerate(caps):
            take = min(cap[k], total)
            out[i][k] = take
            total -= take
        assert total == 0
    return [tuple(v) for v in out]


def find_failure(ci: CharacteristicInvariants, mode: Mode = Mode.TRADE, max_k: int = 4,
                 prefilter: bool = True, post_maximal_only: bool = False) -> RobustnessReport:
    """Smallest j <= max_k admitting a j-trade certificate in the given mode.

    ``prefilter=False`` runs the plain multiset enumeration with a memoised
    decomposition search instead of the sumset method.  ``post_maximal_only``
    is an experimental restriction of the post-trade side to componentwise
    maximal losing types.
    """
    if max_k < 2:
        raise ValueError("max_k must be at least 2")
    if not prefilter:
        return _find_failure_dfs(ci, mode, max_k, post_maximal_only)
    search = SumsetSearch(ci, mode, max_k, post_maximal_only)
    for j in range(1, max_k + 1):
        if search.step():
            return RobustnessReport(mode, max_k, j, search.certificate())
    return RobustnessReport(mode, max_k)


def _find_failure_dfs(ci, mode, max_k, post_maximal_only) -> RobustnessReport:
    pre_types = pre_trade_types(ci, mode)
    post_types = maximal_losing_types(ci) if post_maximal_only else ci.losing_types()
    nbar = ci.nbar
    t = ci.t

    @lru_cache(maxsize=None)
    def decompose(target: tuple, count: int, start: int):
        if count == 0:
            return () if not any(target) else None
        if any(x < 0 or x > count * n for x, n in zip(target, nbar)):
            return None
        for i in range(start, len(post_types)):
            s = post_types[i]
            rest = tuple(x - y for x, y in zip(target, s))
            if min(rest) < 0:
                continue
            tail = decompose(rest, count - 1, i)
            if tail is not None:
                return (s,) + tail
        return None

    for j in range(2, max_k + 1):
        for combo in itertools.combinations_with_replacement(pre_types, j):
            target = tuple(sum(s[k] for s in combo) for k in range(t))
            post = decompose(target, j, 0)
            if post is not None:
                return RobustnessReport(mode, max_k, j, VectorialTrade.from_types(combo, post))
    return RobustnessReport(mode, max_k)


class WeightedInputError(ValueError):
    """Failure levels are undefined for weighted games."""


def min_failure_pair(ci: CharacteristicInvariants, cap: int = 6) -> tuple[Optional[int], Optional[int]]:
    from .weighted import decide_weighted
    if decide_weighted(ci) is not None:
        raise WeightedInputError("game is weighted; it never fails")
    kt = find_failure(ci, Mode.TRADE, cap).k
    ki = find_failure(ci, Mode.INVARIANT, cap).k
    return kt, ki
