"""Concrete learners: the standard and set-cover monomial learners, greedy
superstring merging, and a brute-force smallest-consistent-hypothesis search.

``PacLearner`` packages a deterministic learning rule with the sample size it
declares, which is what the reverse-Occam constructions consume.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .bounds import ceil_count
from .circuits import circuit_table
from .core import (
    BINARY,
    DNA,
    LabeledSample,
    Monomial,
    SuperstringRep,
    check_example,
    example_to_point,
)
from .errors import InfeasibleError, LengthError, NotRealizableError


def _points(sample: LabeledSample, n: int):
    pos, neg = [], []
    for x, y in sample:
        check_example(x, BINARY, n, exact=True)
        (pos if y else neg).append(example_to_point(x))
    return pos, neg


# -- monomials -----------------------------------------------------------------


def standard_monomial_learn(sample: LabeledSample, n: int) -> Monomial:
    """Start from every literal; each positive example deletes the literals it falsifies."""
    full = (1 << n) - 1
    pos_mask = neg_mask = full
    for x, y in sample:
        if len(x) != n:
            raise LengthError(f"example {x!r} has length {len(x)}, expected {n}")
        if y:
            p = example_to_point(x)
            pos_mask &= p           # x_i survives only if every positive has x_i = 1
            neg_mask &= ~p & full   # ~x_i survives only if every positive has x_i = 0
    return Monomial(n, pos_mask, neg_mask)


def _literal_index(lit: int) -> int:
    # x1, ~x1, x2, ~x2, ...
    return 2 * (abs(lit) - 1) + (lit < 0)


def haussler_cover(sample: LabeledSample, n: int) -> list[int]:
    """Greedy set cover of the negatives by literals that every positive satisfies.

    Returns the chosen literals in selection order. Ties go to the lower
    literal index (x1, ~x1, x2, ...).
    """
    pos, neg = _points(sample, n)
    full = (1 << n) - 1
    always_one, always_zero = full, full
    for p in pos:
        always_one &= p
        always_zero &= ~p & full
    candidates = [i + 1 for i in range(n) if always_one >> i & 1]
    candidates += [-(i + 1) for i in range(n) if always_zero >> i & 1]
    candidates.sort(key=_literal_index)

    negatives = sorted(set(neg))
    covers = {}
    for lit in candidates:
        bit = 1 << (abs(lit) - 1)
        # a literal falsifies a negative when the variable takes the wrong value
        covers[lit] = {q for q in negatives if bool(q & bit) != (lit > 0)}
    uncovered = set(negatives)
    chosen = []
    while uncovered:
        best = max(candidates, key=lambda l: (len(covers[l] & uncovered), -_literal_index(l)),
                   default=None)
        if best is None or not covers[best] & uncovered:
            raise NotRealizableError("negatives cannot be covered by literals consistent "
                                     "with the positives")
        chosen.append(best)
        uncovered -= covers[best]
    return chosen


def haussler_monomial_learn(sample: LabeledSample, n: int) -> Monomial:
    """Conjunction of the greedy cover.

    Without positive examples the cover may pick a literal and its negation;
    that conjunction is unsatisfiable and is returned as the all-literals
    monomial, which denotes the same (empty) concept.
    """
    chosen = haussler_cover(sample, n)
    if any(-lit in chosen for lit in chosen):
        return Monomial.all_literals(n)
    return Monomial.from_literals(n, chosen)


def _monomial_candidates_in_order(n: int, allowed: list[int]):
    """Monomials over ``allowed`` literals by size, then lexicographic literal index."""
    allowed = sorted(allowed, key=_literal_index)
    for k in range(len(allowed) + 1):
        for combo in combinations(allowed, k):
            vars_ = [abs(l) for l in combo]
            if len(set(vars_)) == k:
                yield combo


MONOMIAL_ENUMERATION_LIMIT = 12
ENUMERATION_BUDGET = 5_000_000


def consistent_monomial_bruteforce(sample: LabeledSample, n: int, max_size: int | None = None):
    if n > MONOMIAL_ENUMERATION_LIMIT:
        raise InfeasibleError(f"monomial enumeration limited to n <= {MONOMIAL_ENUMERATION_LIMIT}")
    if max_size is not None and max_size < 2 * n:
        return None
    pos, neg = _points(sample, n)
    full = (1 << n) - 1
    one, zero = full, full
    for p in pos:
        one &= p
        zero &= ~p & full
    # literals falsified by some positive can never appear in a consistent monomial
    allowed = [i + 1 for i in range(n) if one >> i & 1] + [-(i + 1) for i in range(n) if zero >> i & 1]
    neg = sorted(set(neg))
    checked = 0
    for combo in _monomial_candidates_in_order(n, allowed):
        checked += 1
        if checked > ENUMERATION_BUDGET:
            raise InfeasibleError("monomial enumeration budget exceeded")
        m = Monomial.from_literals(n, combo)
        if not any(m.accepts_point(q) for q in neg):
            return m
    if not pos:
        return Monomial.all_literals(n)
    return None


def consistent_circuit_bruteforce(sample: LabeledSample, n: int, max_size: int | None = None):
    table = circuit_table(n)
    pos, neg = _points(sample, n)
    mask = want = 0
    for p in pos:
        mask |= 1 << p
        want |= 1 << p
    for p in neg:
        mask |= 1 << p
    tts = table.reachable
    ok = ((tts ^ want) & mask) == 0
    if max_size is not None:
        ok &= table.best_len[tts] <= max_size
    cand = tts[ok]
    if not len(cand):
        return None
    length, row, theta = table.order_key(cand)
    best = cand[np.lexsort((theta, row, length))[0]]
    return table.witness(int(best))


def consistent_bruteforce(sample: LabeledSample, system_id: str, n: int,
                          max_size: int | None = None):
    """Smallest consistent representation (bits, then enumeration order), or ``None``."""
    if system_id == "monomial":
        return consistent_monomial_bruteforce(sample, n, max_size)
    if system_id == "threshold":
        return consistent_circuit_bruteforce(sample, n, max_size)
    raise InfeasibleError(f"no brute-force enumeration for system {system_id!r}")


# -- greedy superstring --------------------------------------------------------


def _prepare_strings(strings) -> list[str]:
    """Sorted distinct strings with every substring of another string removed."""
    uniq = sorted(set(strings))
    if not uniq:
        raise ValueError("greedy superstring needs at least one string")
    if any(not s for s in uniq):
        raise ValueError("empty strings are not allowed")
    by_len = sorted({len(s) for s in uniq})
    keep = uniq
    if len(by_len) > 1:
        longer_windows = {}
        for length in by_len[:-1]:
            windows = set()
            for t in uniq:
                if len(t) > length:
                    windows.update(t[i:i + length] for i in range(len(t) - length + 1))
            longer_windows[length] = windows
        keep = [s for s in uniq if len(s) == by_len[-1] or s not in longer_windows[len(s)]]
    return keep


class _MergeKey:
    """Orders candidate merges by the merged string ``a + b[overlap:]`` without building it."""

    __slots__ = ("a", "b", "cut", "_merged")

    def __init__(self, a, b, cut):
        self.a, self.b, self.cut = a, b, cut
        self._merged = None

    def merged(self):
        if self._merged is None:
            self._merged = self.a + self.b[self.cut:]
        return self._merged

    def __lt__(self, other):
        a1, a2 = self.a, other.a
        if a1 == a2:
            return self.b[self.cut:] < other.b[other.cut:]
        if a1.startswith(a2) or a2.startswith(a1):
            return self.merged() < other.merged()
        return a1 < a2

    def __eq__(self, other):
        return self.merged() == other.merged()


def greedy_merge(strings) -> str:
    """Repeatedly merge the pair of fragments with the largest suffix/prefix overlap.

    Ties go to the lexicographically smallest merged string, then to the
    smaller (left, right) indices of the end strings in sorted order.
    """
    strs = _prepare_strings(strings)
    k = len(strs)
    if k == 1:
        return strs[0]
    parent = list(range(k))        # union-find; a chain's id is its head string

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    has_next = [False] * k
    has_prev = [False] * k
    tail = list(range(k))          # chain id -> its last string
    text = {i: strs[i] for i in range(k)}
    version = [0] * k              # globally unique stamps, bumped when a chain's text changes
    stamp = 0
    chains = k

    for level in range(max(len(s) for s in strs) - 1, -1, -1):
        tails = [i for i in range(k) if not has_next[i] and len(strs[i]) > level]
        heads = [j for j in range(k) if not has_prev[j] and len(strs[j]) > level]
        by_prefix, by_suffix = {}, {}
        for j in heads:
            by_prefix.setdefault(strs[j][:level], []).append(j)
        for i in tails:
            by_suffix.setdefault(strs[i][len(strs[i]) - level:], []).append(i)

        heap = []

        def push(i, j):
            ci = find(i)
            heapq.heappush(heap, (_MergeKey(text[ci], text[j], level), i, j,
                                  version[ci], version[j]))

        for i in tails:
            for j in by_prefix.get(strs[i][len(strs[i]) - level:], ()):
                if find(i) != find(j):
                    push(i, j)
        while heap and chains > 1:
            _, i, j, vi, vj = heapq.heappop(heap)
            if has_next[i] or has_prev[j]:
                continue
            ci = find(i)
            if ci == j:
                continue
            if version[ci] != vi or version[j] != vj:
                continue  # superseded by the fresh entry pushed at merge time
            text[ci] = text[ci] + text[j][level:]
            del text[j]
            parent[j] = ci
            has_next[i] = has_prev[j] = True
            tail[ci] = tail[j]
            stamp += 1
            version[ci] = stamp
            chains -= 1
            # candidates whose merged string just changed get fresh keys
            new_tail = tail[ci]
            for jj in by_prefix.get(strs[new_tail][len(strs[new_tail]) - level:], ()):
                if not has_prev[jj] and find(jj) != ci:
                    push(new_tail, jj)
            for ii in by_suffix.get(strs[ci][:level], ()):
                if not has_next[ii] and find(ii) != ci:
                    push(ii, ci)
        if chains == 1:
            break
    (result,) = text.values()
    return result


def greedy_superstring(substrings, n: int | None = None, alphabet: str | None = None) -> SuperstringRep:
    strs = list(substrings)
    if not strs:
        raise ValueError("greedy superstring needs at least one string")
    merged = greedy_merge(strs)
    if n is None:
        n = min(len(s) for s in strs)
    if alphabet is None:
        symbols = set(merged)
        alphabet = DNA if symbols <= set(DNA) else "".join(sorted(symbols))
    return SuperstringRep(merged, n, alphabet)


# -- packaged PAC learners ------------------------------------------------------


@dataclass(frozen=True)
class PacLearner:
    """A deterministic learning rule plus its declared sample size m(n, s, eps, delta).

    ``order_invariant`` learners depend only on the set of labeled examples
    they see, which lets witness codes describe their input as a set.
    """

    name: str
    system: str
    learn: Callable[[LabeledSample], object]
    sample_size: Callable[[int, float, float, float], float]
    order_invariant: bool = False

    def draw_count(self, n, s, epsilon, delta) -> int:
        return max(1, ceil_count(self.sample_size(n, s, epsilon, delta)))

    def run(self, oracle, n, s, epsilon, delta):
        fed = oracle.draw(self.draw_count(n, s, epsilon, delta))
        return self.learn(fed), fed


def _finite_class_size(class_size):
    return lambda n, s, eps, delta: math.log(class_size / delta) / eps


def standard_learner(n: int) -> PacLearner:
    return PacLearner("standard", "monomial", lambda smp: standard_monomial_learn(smp, n),
                      _finite_class_size(3 ** n + 1), order_invariant=True)


def haussler_learner(n: int) -> PacLearner:
    return PacLearner("haussler", "monomial", lambda smp: haussler_monomial_learn(smp, n),
                      _finite_class_size(3 ** n + 1), order_invariant=True)


def bruteforce_monomial_learner(n: int) -> PacLearner:
    def learn(smp):
        rep = consistent_monomial_bruteforce(smp, n)
        if rep is None:
            raise NotRealizableError("no monomial is consistent with the sample")
        return rep

    return PacLearner("bruteforce", "monomial", learn, _finite_class_size(3 ** n + 1),
                      order_invariant=True)


def circuit_learner(n: int) -> PacLearner:
    """Smallest consistent circuit of at most two gates; |H| = reachable functions."""
    table = circuit_table(n)

    def learn(smp):
        rep = consistent_circuit_bruteforce(smp, n)
        if rep is None:
            raise NotRealizableError("no enumerated circuit is consistent with the sample")
        return rep

    return PacLearner("bruteforce", "threshold", learn, _finite_class_size(table.class_size),
                      order_invariant=True)


def cheating_learner(target, n: int) -> PacLearner:
    """Returns the target regardless of the sample; a harness sanity check."""
    return PacLearner("cheat", target.system, lambda smp: target, lambda *a: 1.0,
                      order_invariant=True)


LEARNERS = {
    ("monomial", "standard"): standard_learner,
    ("monomial", "haussler"): haussler_learner,
    ("monomial", "bruteforce"): bruteforce_monomial_learner,
    ("threshold", "bruteforce"): circuit_learner,
}
