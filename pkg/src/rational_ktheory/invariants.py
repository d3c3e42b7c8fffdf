"""Cycle-length tuples and their gcd-sum sequences.

For a nondecreasing tuple A = (a_1, ..., a_k), the gcd sum (A, n) is
sum_i gcd(a_i, n). Applied to the Fatou cycle lengths it counts the Fatou
cycles of the n-th iterate, and the whole sequence determines the tuple.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Sequence

import numpy as np
import sympy

from .exceptions import InconsistentSequence

__all__ = [
    "CycleLengthTuple",
    "Ambiguous",
    "gcd_sum",
    "fatou_count_sequence",
    "recover_tuple",
    "recover_tuple_recursive",
    "min_distinguishing_n",
    "LemmaReport",
    "lemma_number_bruteforce",
]


class CycleLengthTuple(tuple):
    """Nondecreasing tuple of positive integers."""

    def __new__(cls, entries: Iterable[int] = ()):
        values = sorted(int(x) for x in entries)
        if any(x < 1 for x in values):
            raise ValueError("cycle lengths must be positive")
        return super().__new__(cls, values)

    def __repr__(self):
        return f"CycleLengthTuple({tuple(self)!r})"


@dataclass(frozen=True)
class Ambiguous:
    candidates: tuple[CycleLengthTuple, ...]

    def to_json(self) -> dict:
        return {"ambiguous": [list(c) for c in self.candidates]}


def gcd_sum(a: Sequence[int], n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    return sum(math.gcd(int(x), n) for x in a)


def fatou_count_sequence(lengths: Sequence[int], n_max: int) -> list[int]:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return [gcd_sum(lengths, n) for n in range(1, n_max + 1)]


def _lcm(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


# beyond this, entries larger than the sequence length are not searched
_REPRESENTATIVE_LCM_CAP = 10**6


def _candidate_entries(n_terms: int, value_bound: int) -> list[int]:
    """Entries worth trying for a sequence of ``n_terms`` terms.

    An entry a <= n_terms shows itself at n = a, so it obeys the value bound.
    A larger entry is only seen through gcd(a, lcm(1..n_terms)); that divisor
    is the smallest integer behaving identically and stands for the class.
    """
    small = list(range(1, min(n_terms, value_bound) + 1))
    window = _lcm(range(1, n_terms + 1))
    if window > _REPRESENTATIVE_LCM_CAP:
        return small
    return small + [d for d in sympy.divisors(window) if d > n_terms]


def recover_tuple(seq: Sequence[int], max_candidates: int = 64) -> CycleLengthTuple | Ambiguous:
    """The tuple(s) whose gcd-sum sequence starts with ``seq`` (indexed n = 1, 2, ...).

    Exhaustive search: the length is seq[0] and an entry a <= len(seq) cannot
    exceed max(seq) - seq[0] + 1, since (A, a) >= (k - 1) + a. Entries beyond
    the observed window are reported as their gcd with lcm(1..len(seq)), so
    a short sequence yields :class:`Ambiguous` rather than a guess.
    """
    target = np.array([int(x) for x in seq], dtype=np.int64)
    if target.size == 0:
        raise ValueError("empty sequence")
    k = int(target[0])
    if k < 0 or np.any(target < k):
        raise InconsistentSequence("a gcd-sum sequence never drops below its first term")
    if k == 0:
        if np.any(target != 0):
            raise InconsistentSequence("empty tuple must give the zero sequence")
        return CycleLengthTuple()
    values = _candidate_entries(target.size, int(target.max()) - k + 1)
    n = np.arange(1, target.size + 1)
    table = np.gcd.outer(np.array(values, dtype=np.int64), n)
    # suffix maxima: the largest contribution any later entry can make at each n
    reach = np.maximum.accumulate(table[::-1], axis=0)[::-1]
    found: list[CycleLengthTuple] = []
    chosen: list[int] = []

    def search(start: int, remaining: int, partial: np.ndarray):
        if len(found) >= max_candidates:
            return
        for i in range(start, len(values)):
            total = partial + table[i]
            rest = remaining - 1
            if rest == 0:
                if np.array_equal(total, target):
                    found.append(CycleLengthTuple(chosen + [values[i]]))
                continue
            if np.any(total + rest > target) or np.any(total + rest * reach[i] < target):
                continue
            chosen.append(values[i])
            search(i, rest, total)
            chosen.pop()

    search(0, k, np.zeros(target.size, dtype=np.int64))
    if not found:
        raise InconsistentSequence("no tuple has this gcd-sum sequence")
    if len(found) == 1:
        return found[0]
    return Ambiguous(tuple(sorted(found)))


def recover_tuple_recursive(seq: Sequence[int]) -> CycleLengthTuple:
    """Rebuild the tuple by splitting off, one prime at a time, the entries
    divisible by its top power.

    Assumes ``seq`` reaches the lcm of the entries: the lcm is read off as the
    first index where the maximum occurs, and (A, n) = seq[gcd(n, lcm)].
    Raises InconsistentSequence when the reconstruction does not reproduce
    ``seq``.
    """
    seq = [int(x) for x in seq]
    if not seq:
        raise ValueError("empty sequence")
    top = max(seq)
    lcm = seq.index(top) + 1

    def g(n: int) -> int:
        return seq[math.gcd(n, lcm) - 1]

    result = CycleLengthTuple(_split(g, lcm, 0))
    if fatou_count_sequence(result, len(seq)) != seq:
        raise InconsistentSequence("sequence is not the gcd-sum sequence of any tuple it determines")
    return result


def _split(g: Callable[[int], int], lcm: int, depth: int) -> list[int]:
    if depth > 64:
        raise InconsistentSequence("recursion did not terminate")
    k = g(1)
    if k < 0:
        raise InconsistentSequence("negative tuple length")
    if k == 0:
        return []
    # lcm of this sub-tuple: smallest divisor of the ambient lcm reaching the maximum
    top = g(lcm)
    m = min(d for d in sympy.divisors(lcm) if g(d) == top)
    if k == 1:
        return [m]
    factors = sympy.factorint(m)
    for p, e in sorted(factors.items()):
        pe = p ** e
        scale = pe - pe // p

        def g_p(x: int, p=p, pe=pe, scale=scale) -> int:
            while x % p == 0:
                x //= p
            diff = g(pe * x) - g(pe // p * x)
            if diff % scale:
                raise InconsistentSequence("non-integral prime-split count")
            return diff // scale

        k_p = g_p(1)
        if k_p < k:
            divisible = [a * pe for a in _split(g_p, m // pe, depth + 1)]

            def rest(x: int, divisible=divisible) -> int:
                return g(x) - gcd_sum(divisible, x)

            return divisible + _split(rest, m, depth + 1)
    return [m] * k


def min_distinguishing_n(a: Sequence[int], b: Sequence[int], n_max: int | None = None) -> int | None:
    """Smallest n with (a, n) != (b, n); None if the tuples agree up to n_max
    (default: the lcm of all entries, beyond which nothing changes)."""
    if n_max is None:
        n_max = _lcm(list(a) + list(b))
    for n in range(1, n_max + 1):
        if gcd_sum(a, n) != gcd_sum(b, n):
            return n
    return None


@dataclass(frozen=True)
class LemmaReport:
    max_len: int
    max_val: int
    n_max: int
    tuple_count: int
    collisions: tuple[tuple[CycleLengthTuple, CycleLengthTuple], ...]
    # minimal distinguishing n -> number of same-length pairs first separated there
    distinguishing_histogram: dict[int, int]
    hardest_pairs: tuple[tuple[CycleLengthTuple, CycleLengthTuple], ...]

    @property
    def injective(self) -> bool:
        return not self.collisions

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "max_val": self.max_val,
            "n_max": self.n_max,
            "tuples": self.tuple_count,
            "injective": self.injective,
            "collisions": [[list(a), list(b)] for a, b in self.collisions],
            "distinguishing_histogram": {str(k): v for k, v in sorted(self.distinguishing_histogram.items())},
            "hardest_pairs": [[list(a), list(b)] for a, b in self.hardest_pairs],
        }


def lemma_number_bruteforce(max_len: int, max_val: int) -> LemmaReport:
    """Check that A -> ((A, n))_{n <= lcm(1..max_val)} is injective on all
    nondecreasing tuples of length 1..max_len with entries 1..max_val.

    Pairs of different length already differ at n = 1; for each same-length
    pair the first separating n is tallied.
    """
    if not (1 <= max_len <= 4 and 1 <= max_val <= 10):
        raise ValueError("desk budget: max_len <= 4 and max_val <= 10")
    n_max = _lcm(range(1, max_val + 1))
    n = np.arange(1, n_max + 1)
    table = np.gcd.outer(np.arange(1, max_val + 1), n)
    tuples: list[CycleLengthTuple] = []
    collisions = []
    histogram: Counter = Counter()
    hardest: list = []
    worst = 0
    for length in range(1, max_len + 1):
        group = [CycleLengthTuple(t) for t in combinations_with_replacement(range(1, max_val + 1), length)]
        seqs = np.array([table[[a - 1 for a in t]].sum(axis=0) for t in group])
        tuples.extend(group)
        for i in range(len(group)):
            rest = seqs[i + 1:] != seqs[i]
            if rest.size == 0:
                continue
            differs = rest.any(axis=1)
            first = rest.argmax(axis=1) + 1
            for j in np.nonzero(~differs)[0]:
                collisions.append((group[i], group[i + 1 + j]))
            firsts = first[differs]
            histogram.update(Counter(firsts.tolist()))
            if firsts.size:
                top = int(firsts.max())
                if top > worst:
                    worst, hardest = top, []
                if top == worst:
                    for j in np.nonzero(differs & (first == top))[0]:
                        hardest.append((group[i], group[i + 1 + j]))
    return LemmaReport(max_len, max_val, n_max, len(tuples), tuple(collisions),
                       dict(histogram), tuple(hardest))
