"""The lattice of coalition types Lambda(nbar) under partial-sum dominance.

Elements are indexed in canonical order: descending lexicographic order of
partial sums.  That order is a linear extension of the dominance order with
the top element first, and it is the row order required of shift-minimal
matrices.

Two bitset encodings are kept per lattice:

* index bitsets (bit ``i`` = element ``elements[i]``), used for antichain
  search;
* code bitsets in a mixed radix with digit ``k`` in ``0..cap*n_k``, so that
  adding codes adds type vectors without carries for any sum of at most
  ``cap`` types.  Sumsets of type families become shift-and-or on Python ints.
"""
from __future__ import annotations

import itertools
from functools import cached_property, lru_cache
from typing import Iterable, Sequence


def partial_sums(v: Sequence[int]) -> tuple:
    return tuple(itertools.accumulate(v))


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Lattice:
    def __init__(self, nbar: Sequence[int], cap: int = 1):
        self.nbar = tuple(int(x) for x in nbar)
        if not self.nbar or any(x <= 0 for x in self.nbar):
            raise ValueError(f"class sizes must be positive, got {nbar}")
        self.t = len(self.nbar)
        self.cap = max(1, int(cap))
        boxes = itertools.product(*(range(x + 1) for x in self.nbar))
        self.elements = sorted(boxes, key=lambda s: tuple(-x for x in partial_sums(s)))
        self.size = len(self.elements)
        self.index = {s: i for i, s in enumerate(self.elements)}
        self.psums = [partial_sums(s) for s in self.elements]

        t, nbar = self.t, self.nbar
        self.upper_covers: list[list[int]] = []
        self.lower_covers: list[list[int]] = []
        for s in self.elements:
            ups, downs = [], []
            for k in range(t - 1):
                if s[k] < nbar[k] and s[k + 1] > 0:
                    ups.append(self._shifted(s, k, +1))
                if s[k] > 0 and s[k + 1] < nbar[k + 1]:
                    downs.append(self._shifted(s, k, -1))
            if s[-1] < nbar[-1]:
                ups.append(self.index[s[:-1] + (s[-1] + 1,)])
            if s[-1] > 0:
                downs.append(self.index[s[:-1] + (s[-1] - 1,)])
            self.upper_covers.append(ups)
            self.lower_covers.append(downs)

        # up[i]: elements dominating i (inclusive); covers precede i in order
        self.up = [0] * self.size
        for i in range(self.size):
            acc = 1 << i
            for c in self.upper_covers[i]:
                acc |= self.up[c]
            self.up[i] = acc
        self.down = [0] * self.size
        for i in range(self.size - 1, -1, -1):
            acc = 1 << i
            for c in self.lower_covers[i]:
                acc |= self.down[c]
            self.down[i] = acc
        self.full = (1 << self.size) - 1
        self.incomparable = [self.full & ~(self.up[i] | self.down[i]) for i in range(self.size)]

        # mixed-radix codes
        self.radix = tuple(self.cap * x + 1 for x in nbar)
        strides = []
        acc = 1
        for r in reversed(self.radix):
            strides.append(acc)
            acc *= r
        self.strides = tuple(reversed(strides))
        self.codes = [sum(a * b for a, b in zip(s, self.strides)) for s in self.elements]
        self.code_index = {c: i for i, c in enumerate(self.codes)}
        self.all_codes = self.to_codes(self.full)

    @cached_property
    def up_code(self) -> list[int]:
        """Code bitset of the up-set of each element."""
        # same recursion as the index up-sets, directly in code space
        out = [0] * self.size
        for i in range(self.size):
            acc = 1 << self.codes[i]
            for c in self.upper_covers[i]:
                acc |= out[c]
            out[i] = acc
        return out

    def _shifted(self, s, k, direction):
        c = list(s)
        c[k] += direction
        c[k + 1] -= direction
        return self.index[tuple(c)]

    def to_codes(self, index_mask: int) -> int:
        out = 0
        codes = self.codes
        for i in iter_bits(index_mask):
            out |= 1 << codes[i]
        return out

    def decode(self, code: int) -> tuple:
        out = []
        for st, r in zip(self.strides, self.radix):
            out.append(code // st % r)
        return tuple(out)

    def encode(self, s: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(s, self.strides))

    def mask_of(self, types: Iterable[Sequence[int]]) -> int:
        out = 0
        for s in types:
            out |= 1 << self.index[tuple(s)]
        return out

    def types_of(self, index_mask: int) -> list[tuple]:
        return [self.elements[i] for i in iter_bits(index_mask)]

    # -- per-game derived sets (index bitsets) --------------------------

    def winning_mask(self, row_mask: int) -> int:
        out = 0
        up = self.up
        for i in iter_bits(row_mask):
            out |= up[i]
        return out

    def shift_maximal(self, losing: int) -> int:
        """Losing elements all of whose upper covers win."""
        out = 0
        for i in iter_bits(losing):
            if not any(losing >> c & 1 for c in self.upper_covers[i]):
                out |= 1 << i
        return out

    def shift_minimal(self, winning: int) -> int:
        out = 0
        for i in iter_bits(winning):
            if not any(winning >> c & 1 for c in self.lower_covers[i]):
                out |= 1 << i
        return out

    def maximal_losing(self, losing: int) -> int:
        """Losing elements whose componentwise successors all win."""
        out = 0
        index = self.index
        nbar = self.nbar
        for i in iter_bits(losing):
            s = self.elements[i]
            for k in range(self.t):
                if s[k] < nbar[k] and losing >> index[s[:k] + (s[k] + 1,) + s[k + 1:]] & 1:
                    break
            else:
                out |= 1 << i
        return out

    def minimal_winning(self, winning: int) -> int:
        """Winning elements whose componentwise predecessors all lose."""
        out = 0
        index = self.index
        for i in iter_bits(winning):
            s = self.elements[i]
            for k in range(self.t):
                if s[k] and winning >> index[s[:k] + (s[k] - 1,) + s[k + 1:]] & 1:
                    break
            else:
                out |= 1 << i
        return out


    # -- code-space operations -------------------------------------------

    @property
    def space(self) -> int:
        """Number of codes (bits) in the mixed-radix space."""
        return self.strides[0] * self.radix[0]

    def digit_mask(self, k: int, lo: int, hi: int) -> int:
        """Codes whose digit ``k`` lies in ``lo..hi-1``."""
        key = (k, lo, hi)
        cache = self.__dict__.setdefault("_digit_masks", {})
        got = cache.get(key)
        if got is not None:
            return got
        st, r = self.strides[k], self.radix[k]
        lo, hi = max(lo, 0), min(hi, r)
        if lo >= hi:
            cache[key] = 0
            return 0
        block = ((1 << ((hi - lo) * st)) - 1) << (lo * st)
        period = st * r
        blocks = self.space // period
        rep = ((1 << (blocks * period)) - 1) // ((1 << period) - 1)
        cache[key] = block * rep
        return block * rep

    def down_close(self, codes: int) -> int:
        """Componentwise down-closure of a code set."""
        for k in range(self.t):
            st, top = self.strides[k], self.radix[k] - 1
            step = 1
            while step <= top:
                codes |= (codes & self.digit_mask(k, step, top + 1)) >> (step * st)
                step <<= 1
        return codes

    def up_close(self, codes: int) -> int:
        """Componentwise up-closure inside the code space."""
        for k in range(self.t):
            st, top = self.strides[k], self.radix[k] - 1
            step = 1
            while step <= top:
                codes |= (codes & self.digit_mask(k, 0, top + 1 - step)) << (step * st)
                step <<= 1
        return codes

    def code_leq(self, a: int, b: int) -> bool:
        """Componentwise comparison of two codes."""
        return all(x <= y for x, y in zip(self.decode(a), self.decode(b)))


@lru_cache(maxsize=512)
def lattice(nbar: tuple, cap: int = 1) -> Lattice:
    return Lattice(nbar, cap)
