"""Isomorphism-free generation and classification of complete simple games.

Games are produced as (nbar, rows) pairs.  For each composition ``nbar`` of
``n`` the rows are antichains of the type lattice, grown in lattice index
order, which is already the canonical row order, so nothing is emitted twice.

Classification in the common case never builds invariants objects: the
2-trade test and the weightedness test run on integer bitsets straight from
the row indices.  Only games that survive both go through the general search.
"""
from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .invariants import CharacteristicInvariants
from .lattice import iter_bits, lattice
from .trades import Mode, RobustnessReport, VectorialTrade, find_failure
from .weighted import WeightedRepresentation, decide_weighted, is_weighted_rows

DEFAULT_CAP = 4
ESCALATED_CAP = 6
THREADS_ENV = "THRESHOLD_LAB_THREADS"


def compositions(n: int, t: int) -> Iterator[tuple]:
    """Compositions of ``n`` into ``t`` positive parts, lexicographic."""
    if t == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - t + 2):
        for rest in compositions(n - first, t - 1):
            yield (first,) + rest


class _Space:
    """Per-nbar tables shared by generation and classification."""

    def __init__(self, nbar: tuple):
        self.nbar = nbar
        self.t = t = len(nbar)
        lat = lattice(nbar)
        self.lat = lat
        self.inc = lat.incomparable
        zero = lat.index[(0,) * t]
        self.start = lat.full & ~(1 << zero)
        if t == 1:
            self.need = 1
            self.elem_wit = [1 if s[0] > 0 else 0 for s in lat.elements]
        else:
            self.need = (1 << (t - 1)) - 1
            self.elem_wit = [sum(1 << k for k in range(t - 1) if s[k] > 0 and s[k + 1] < nbar[k + 1])
                             for s in lat.elements]
        self.wit_masks = [sum(1 << i for i, w in enumerate(self.elem_wit) if w >> k & 1)
                          for k in range(max(1, t - 1))]
        self._kernel_ready = False

    def _prepare_kernel(self):
        # cap-2 codes for the 2-trade kernel, built on first use
        lat2 = lattice(self.nbar, 2)
        self.lat2 = lat2
        self.up2 = lat2.up_code
        self.codes2 = lat2.codes
        self.box2 = lat2.all_codes
        self.strides2 = lat2.strides
        self.ge1 = [lat2.digit_mask(k, 1, lat2.radix[k]) for k in range(self.t)]
        # upper covers in code space: +e_t, and +e_k-e_{k+1} where digit k+1 > 0
        st = lat2.strides
        self.cover_shifts = [(st[-1], -1)] + [(st[k] - st[k + 1], k + 1) for k in range(self.t - 1)]
        self._kernel_ready = True

    # -- generation -----------------------------------------------------

    def antichains(self, r: Optional[int] = None, first: Optional[int] = None) -> Iterator[tuple]:
        """Valid row-index tuples; ``first`` fixes the first row index."""
        inc, elem_wit, wit_masks, need = self.inc, self.elem_wit, self.wit_masks, self.need

        def rec(chosen, cand, have):
            depth = len(chosen)
            if have == need and (r is None or depth == r):
                yield tuple(chosen)
            if r is not None and depth >= r:
                return
            missing = need & ~have
            while missing:
                low = missing & -missing
                if not cand & wit_masks[low.bit_length() - 1]:
                    return
                missing ^= low
            if r is not None and bin(cand).count("1") < r - depth:
                return
            while cand:
                low = cand & -cand
                i = low.bit_length() - 1
                cand ^= low
                chosen.append(i)
                yield from rec(chosen, cand & inc[i], have | elem_wit[i])
                chosen.pop()

        if first is None:
            yield from rec([], self.start, 0)
        elif self.start >> first & 1:
            higher = self.start & ~((1 << (first + 1)) - 1)
            yield from rec([first], higher & inc[first], elem_wit[first])

    def first_rows(self) -> list[int]:
        return list(iter_bits(self.start))

    def invariants(self, idx: tuple) -> CharacteristicInvariants:
        el = self.lat.elements
        return CharacteristicInvariants(self.nbar, tuple(el[i] for i in idx))

    # -- classification kernel -------------------------------------------

    def kernel(self, idx: tuple, mode: Mode) -> tuple[bool, Optional[list]]:
        """(fails at 2, shift-maximal losing types or None if failing)."""
        if not self._kernel_ready:
            self._prepare_kernel()
        W = 0
        up2 = self.up2
        for i in idx:
            W |= up2[i]
        L = self.box2 & ~W
        if mode is Mode.TRADE:
            sh = 0
            for st, ge in zip(self.strides2, self.ge1):
                sh |= (W << st) & ge
            pre = W & ~sh
        else:
            pre = 0
            for i in idx:
                pre |= 1 << self.codes2[i]
        sh = 0
        for st in self.strides2:
            sh |= L >> st
        ml = L & ~sh
        P2 = 0
        for c in iter_bits(pre):
            P2 |= pre << c
        L2 = 0
        ml_codes = list(iter_bits(ml))
        for c in ml_codes:
            L2 |= ml << c
        if P2 & self.lat2.down_close(L2):
            return True, None
        # shift-maximal losing: every upper cover wins
        covered = 0
        for delta, k in self.cover_shifts:
            if k < 0:
                covered |= L >> delta
            else:
                covered |= (L >> delta) & self.ge1[k]
        dec = self.lat2.decode
        return False, [dec(c) for c in iter_bits(ml & ~covered)]

    def weighted(self, idx: tuple, losing: list) -> bool:
        el = self.lat.elements
        return is_weighted_rows(self.nbar, [el[i] for i in idx], losing)


@lru_cache(maxsize=256)
def _space(nbar: tuple) -> _Space:
    return _Space(nbar)


def _nbars(n: int, t: Optional[int]) -> Iterator[tuple]:
    ts = [t] if t is not None else range(1, n + 1)
    for tt in ts:
        yield from compositions(n, tt)


def enumerate_complete(n: int, t: Optional[int] = None, r: Optional[int] = None) -> Iterator[CharacteristicInvariants]:
    """Every complete game on ``n`` players (optionally with fixed t and r) once."""
    if n < 1:
        raise ValueError("n must be positive")
    for nbar in _nbars(n, t):
        sp = _space(nbar)
        for idx in sp.antichains(r):
            yield sp.invariants(idx)


def count_complete(n: int, t: Optional[int] = None, r: Optional[int] = None) -> int:
    total = 0
    for nbar in _nbars(n, t):
        for _ in _space(nbar).antichains(r):
            total += 1
    return total


# -- classification ----------------------------------------------------------

@dataclass
class ClassificationRecord:
    invariants: CharacteristicInvariants
    weighted: bool
    representation: Optional[WeightedRepresentation] = None
    k_trade_fail: Optional[int] = None
    k_invariant_fail: Optional[int] = None
    certificate: Optional[VectorialTrade] = None
    invariant_certificate: Optional[VectorialTrade] = None
    cap: int = DEFAULT_CAP

    @property
    def t(self) -> int:
        return self.invariants.t

    @property
    def r(self) -> int:
        return self.invariants.r

    def to_dict(self) -> dict:
        doc = {"invariants": self.invariants.to_dict(), "t": self.t, "r": self.r,
               "weighted": self.weighted, "k_trade_fail": self.k_trade_fail,
               "k_invariant_fail": self.k_invariant_fail, "cap": self.cap}
        if self.representation is not None:
            doc["representation"] = self.representation.to_dict()
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_dict(Mode.TRADE)
        if self.invariant_certificate is not None:
            doc["invariant_certificate"] = self.invariant_certificate.to_dict(Mode.INVARIANT)
        return doc


def bucket_name(k: Optional[int]) -> str:
    return "robust-up-to-cap" if k is None else f"fails-at-{k}"


@dataclass
class CountReport:
    n: Optional[int]
    t: Optional[int] = None
    r: Optional[int] = None
    mode: Mode = Mode.TRADE
    cap: int = DEFAULT_CAP
    buckets: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.buckets.values())

    @property
    def weighted(self) -> int:
        return self.buckets.get("weighted", 0)

    def fails_at(self, k: int) -> int:
        return self.buckets.get(bucket_name(k), 0)

    @property
    def non_weighted(self) -> int:
        return self.total - self.weighted

    def merge(self, other: "CountReport") -> None:
        self.buckets.update(other.buckets)

    def to_dict(self) -> dict:
        return {"n": self.n, "t": self.t, "r": self.r, "mode": self.mode.value, "cap": self.cap,
                "total": self.total, "buckets": dict(sorted(self.buckets.items()))}

    def csv_row(self, extended: bool = False) -> list:
        row = [self.n, self.total, self.weighted, self.fails_at(2), self.fails_at(3)]
        if extended:
            row += [self.fails_at(k) for k in range(4, ESCALATED_CAP + 1)]
            row.append(self.buckets.get(bucket_name(None), 0))
        return row


CSV_HEADER = ["n", "CG", "WG", "N-2T", "N-3T"]
CSV_EXTENDED = ["N-4T", "N-5T", "N-6T", "ROBUST"]


def _deep_level(ci: CharacteristicInvariants, mode: Mode, cap: int) -> RobustnessReport:
    rep = find_failure(ci, mode, cap)
    if not rep.fails and cap < ESCALATED_CAP:
        rep = find_failure(ci, mode, ESCALATED_CAP)
    return rep


def _classify_idx(sp: _Space, idx: tuple, mode: Mode, cap: int) -> str:
    fails2, losing = sp.kernel(idx, mode)
    if fails2:
        return bucket_name(2)
    if sp.weighted(idx, losing):
        return "weighted"
    return bucket_name(_deep_level(sp.invariants(idx), mode, cap).k)


def classify_one(ci: CharacteristicInvariants, cap: int = DEFAULT_CAP) -> ClassificationRecord:
    """Full record for one game: both modes, with certificates."""
    rep = decide_weighted(ci)
    if rep is not None:
        return ClassificationRecord(ci, True, rep, cap=cap)
    tr = _deep_level(ci, Mode.TRADE, cap)
    it = _deep_level(ci, Mode.INVARIANT, cap)
    return ClassificationRecord(ci, False, None, tr.k, it.k, tr.certificate, it.certificate,
                                cap=max(cap, tr.max_k, it.max_k))


def classify(stream: Iterable[CharacteristicInvariants], cap_k: int = DEFAULT_CAP,
             mode: Mode = Mode.TRADE, records: bool = False):
    """Bucket counts for a stream of games, optionally with full records.

    Returns ``(report, records_list_or_None)``.
    """
    if cap_k < 2:
        raise ValueError("cap_k must be at least 2")
    report = CountReport(None, mode=mode, cap=cap_k)
    out = [] if records else None
    for ci in stream:
        if records:
            rec = classify_one(ci, cap_k)
            k = rec.k_trade_fail if mode is Mode.TRADE else rec.k_invariant_fail
            report.buckets["weighted" if rec.weighted else bucket_name(k)] += 1
            out.append(rec)
        else:
            sp = _space(ci.nbar)
            idx = tuple(sp.lat.index[row] for row in ci.rows)
            report.buckets[_classify_idx(sp, idx, mode, cap_k)] += 1
    return report, out


def _count_prefix(args) -> Counter:
    nbar, first, r, mode_value, cap = args
    sp = _space(nbar)
    mode = Mode(mode_value)
    c: Counter = Counter()
    for idx in sp.antichains(r, first):
        c[_classify_idx(sp, idx, mode, cap)] += 1
    return c


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    return max(1, threads)


def classify_count(n: int, t: Optional[int] = None, r: Optional[int] = None,
                   mode: Mode = Mode.TRADE, cap_k: int = DEFAULT_CAP,
                   threads: Optional[int] = None) -> CountReport:
    """Counts per bucket over all complete games with the given filters.

    Work is split by (nbar, first row); with more than one worker the
    prefixes are farmed out to a process pool and the counters summed.
    """
    if cap_k < 2:
        raise ValueError("cap_k must be at least 2")
    jobs = [(nbar, first, r, mode.value, cap_k)
            for nbar in _nbars(n, t) for first in _space(nbar).first_rows()]
    report = CountReport(n, t, r, mode, cap_k)
    workers = resolve_threads(threads)
    if workers == 1:
        for job in jobs:
            report.buckets.update(_count_prefix(job))
    else:
        from multiprocessing import Pool
        with Pool(workers) as pool:
            for c in pool.imap_unordered(_count_prefix, jobs, chunksize=4):
                report.buckets.update(c)
    return report


def select(n: int, bucket: str, t: Optional[int] = None, r: Optional[int] = None,
           mode: Mode = Mode.TRADE, cap_k: int = DEFAULT_CAP) -> Iterator[CharacteristicInvariants]:
    """Games whose bucket (as counted by ``classify_count``) equals ``bucket``."""
    for nbar in _nbars(n, t):
        sp = _space(nbar)
        for idx in sp.antichains(r):
            if _classify_idx(sp, idx, mode, cap_k) == bucket:
                yield sp.invariants(idx)


def classify_records(n: int, t: Optional[int] = None, r: Optional[int] = None,
                     cap_k: int = DEFAULT_CAP) -> Iterator[ClassificationRecord]:
    for ci in enumerate_complete(n, t, r):
        yield classify_one(ci, cap_k)


# -- closed forms ------------------------------------------------------------

def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def formula_value(which: str, n: int) -> int:
    if which == "cg_r1":
        return 2 ** n - 1
    if which == "wg_r1":
        if n <= 5:
            return 2 ** n - 1
        num = n ** 4 - 6 * n ** 3 + 23 * n ** 2 - 18 * n + 12
        assert num % 12 == 0
        return num // 12
    if which == "cg_t2":
        return fibonacci(n + 6) - (n * n + 4 * n + 8)
    if which in ("cg_t1", "wg_t1"):
        return n
    raise ValueError(f"unknown formula {which!r}")


FORMULAS = ("cg_r1", "wg_r1", "cg_t2", "cg_t1", "wg_t1")


def enumerated_value(which: str, n: int) -> int:
    if which == "cg_r1":
        return count_complete(n, r=1)
    if which == "cg_t2":
        return count_complete(n, t=2)
    if which == "cg_t1":
        return count_complete(n, t=1)
    if which == "wg_r1":
        return sum(1 for ci in enumerate_complete(n, r=1) if decide_weighted(ci) is not None)
    if which == "wg_t1":
        return sum(1 for ci in enumerate_complete(n, t=1) if decide_weighted(ci) is not None)
    raise ValueError(f"unknown formula {which!r}")


@dataclass
class FormulaReport:
    which: str
    rows: list  # (n, formula, enumerated)

    @property
    def all_match(self) -> bool:
        return all(f == e for _, f, e in self.rows)

    def to_dict(self) -> dict:
        return {"formula": self.which, "all_match": self.all_match,
                "rows": [{"n": n, "formula": f, "enumerated": e, "match": f == e} for n, f, e in self.rows]}


def formula_check(which: str, n_max: int, n_min: int = 1) -> FormulaReport:
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if which not in FORMULAS:
        raise ValueError(f"unknown formula {which!r}; choose from {FORMULAS}")
    rows = [(n, formula_value(which, n), enumerated_value(which, n)) for n in range(max(1, n_min), n_max + 1)]
    return FormulaReport(which, rows)


# -- conjecture scans ---------------------------------------------------------

SCANS = ("C6.2_t3r2_family_exactness", "Q6.1_t3_3TR", "Q6.2_r2_3TR")


@dataclass
class ScanReport:
    target: str
    n_range: tuple
    examined: int = 0
    counterexamples: list = field(default_factory=list)
    family_hits: int = 0

    def to_dict(self) -> dict:
        return {"target": self.target, "n_min": self.n_range[0], "n_max": self.n_range[1],
                "examined": self.examined, "family_hits": self.family_hits,
                "counterexamples": self.counterexamples}


def conjecture_scan(target: str, n_max: int, n_min: int = 1) -> ScanReport:
    """Search for counterexamples; an empty list is the expected outcome."""
    from .families import lemma_6_1_instances, lemma_6_1_membership

    if target not in SCANS:
        raise ValueError(f"unknown scan {target!r}; choose from {SCANS}")
    report = ScanReport(target, (n_min, n_max))
    if target.startswith("C6.2"):
        t_filter, r_filter = 3, 2
    elif target.startswith("Q6.1"):
        t_filter, r_filter = 3, None
    else:
        t_filter, r_filter = None, 2
    for n in range(max(1, n_min), n_max + 1):
        found_at_3 = set()
        for nbar in _nbars(n, t_filter):
            sp = _space(nbar)
            for idx in sp.antichains(r_filter):
                report.examined += 1
                fails2, losing = sp.kernel(idx, Mode.TRADE)
                if fails2 or sp.weighted(idx, losing):
                    continue
                ci = sp.invariants(idx)
                k = _deep_level(ci, Mode.TRADE, 3).k
                if k != 3:
                    report.counterexamples.append({"n": n, "reason": "3-trade robust, not weighted",
                                                   "k_trade_fail": k, **ci.to_dict()})
                    continue
                if target.startswith("C6.2"):
                    found_at_3.add(ci)
                    if lemma_6_1_membership(ci) is None:
                        report.counterexamples.append({"n": n, "reason": "fails at 3 outside the family",
                                                       **ci.to_dict()})
                    else:
                        report.family_hits += 1
        if target.startswith("C6.2"):
            for ci in lemma_6_1_instances(n):
                if ci not in found_at_3:
                    report.counterexamples.append({"n": n, "reason": "family member not found failing at 3",
                                                   **ci.to_dict()})
    return report
