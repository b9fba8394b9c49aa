"""Exhaustive searches, random monotone preferences and tight instances.

Everything here enumerates subsets, so each entry point carries a hard
size guard. Subsets are visited by popcount and then numerically, which
makes the reported witness the canonical smallest one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from agreeable import subsets
from agreeable.agreeability import dominance_matching, necessarily_worth
from agreeable.errors import InstanceTooLarge, InvalidArgument, TheoremViolation
from agreeable.prefs import (Additive, CappedAdditive, CountOnly, Explicit, ItemRanking, LexCount,
                             Pivot, PreferenceSpec, is_monotonic)

SEARCH_GUARD = 20
RANDOM_GUARD = 10

FAMILIES = ("lex-count", "pivot", "count-only", "additive", "capped-additive")
KINDS = ("prop41-pair", "thm42-rankings", "thm52-case1", "thm52-case2", "ex54", "worth-k-pair")

# x1 > x4 > x5 > x6 > x2 > x3 and so on, as 0-based item indices
EXAMPLE_54_ORDERS = (
    (0, 3, 4, 5, 1, 2),
    (1, 4, 5, 3, 2, 0),
    (2, 5, 3, 4, 0, 1),
)


def default_labels(m: int) -> Tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(m))


@dataclass
class Instance:
    m: int
    players: List[PreferenceSpec]
    label: str = ""
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            self.labels = default_labels(self.m)
        self.labels = tuple(self.labels)
        if len(self.labels) != self.m or len(set(self.labels)) != self.m:
            raise InvalidArgument("item labels must be unique, one per item")
        for i, p in enumerate(self.players):
            if p.m != self.m:
                raise InvalidArgument(f"player {i} is defined over {p.m} items, instance has {self.m}")
            if isinstance(p, Explicit) and not is_monotonic(p):
                raise InvalidArgument(f"player {i}: explicit table is not monotonic")

    @property
    def n(self) -> int:
        return len(self.players)

    def rankings(self) -> List[ItemRanking]:
        return [p.singles_ranking() for p in self.players]


@dataclass
class SearchResult:
    min_size: int
    witness: int
    subsets_examined: int


def existence_bound(m: int, n: int) -> int:
    return min((m + n) // 2, m)


def _guard(m: int, limit: int):
    if m > limit:
        raise InstanceTooLarge(f"m={m} exceeds the exhaustive-search guard of {limit}")


def _search(m: int, accept: Callable[[int], bool]) -> SearchResult:
    examined = 0
    for t in subsets.by_size(m):
        examined += 1
        if accept(t):
            return SearchResult(t.bit_count(), t, examined)
    raise AssertionError("the full set always qualifies")


def agreeable_to_all(instance: Instance, t: int) -> bool:
    rest = subsets.complement(t, instance.m)
    return all(p.compare(t, rest) >= 0 for p in instance.players)


def min_agreeable(instance: Instance) -> SearchResult:
    """Smallest subset every player weakly prefers to its complement."""
    _guard(instance.m, SEARCH_GUARD)
    return _search(instance.m, lambda t: agreeable_to_all(instance, t))


def min_necessarily_agreeable(rankings: Sequence[ItemRanking], m: int) -> SearchResult:
    _guard(m, SEARCH_GUARD)
    return _search(m, lambda t: all(dominance_matching(r, t) for r in rankings))


def min_necessarily_worth(rankings: Sequence[ItemRanking], m: int, k: int) -> SearchResult:
    _guard(m, SEARCH_GUARD)
    return _search(m, lambda t: all(necessarily_worth(r, t, k) for r in rankings))


def tight_instance(kind: str, m: int, n: Optional[int] = None, k: Optional[int] = None) -> Instance:
    """The worst-case profile of the given ``kind`` (see ``KINDS``)."""
    if m < 1:
        raise InvalidArgument("need at least one item")
    ident = ItemRanking.identity(m)
    if kind == "prop41-pair":
        return Instance(m, [LexCount(ident), LexCount(ident, reverse=True)], kind)
    if kind in ("thm42-rankings", "worth-k-pair"):
        if kind == "worth-k-pair" and (k is None or k < 2):
            raise InvalidArgument("worth-k-pair needs k >= 2")
        label = kind if k is None else f"{kind} k={k}"
        return Instance(m, [LexCount(ident), LexCount(ident.reversed())], label)
    if kind == "thm52-case1":
        n = m if n is None else n
        if n < m:
            raise InvalidArgument("thm52-case1 needs n >= m")
        return Instance(m, [Pivot(i % m, ident) for i in range(n)], f"{kind} n={n}")
    if kind == "thm52-case2":
        if n is None or not 1 <= n < m:
            raise InvalidArgument("thm52-case2 needs 1 <= n < m")
        support = subsets.complement(subsets.full(n - 1), m)
        players: List[PreferenceSpec] = [Pivot(i, ident) for i in range(n - 1)]
        players.append(CountOnly(support, m))
        return Instance(m, players, f"{kind} n={n}")
    if kind == "ex54":
        if m != 6:
            raise InvalidArgument("ex54 is fixed at m=6")
        return Instance(6, [LexCount(ItemRanking.from_order(o)) for o in EXAMPLE_54_ORDERS], kind)
    raise InvalidArgument(f"unknown tight-instance kind {kind!r}")


def random_monotone(m: int, seed: int) -> Explicit:
    """Seeded random monotone table.

    Every subset ``U`` gets a nonnegative integer mass (zero with
    probability one half) and ``f(T)`` sums the masses of all ``U`` inside
    ``T``. Integer masses keep the sums exact; ties in ``f`` are broken by
    bitmask so the table is a strict total order that is still monotone.
    """
    _guard(m, RANDOM_GUARD)
    if m < 1:
        raise InvalidArgument("need at least one item")
    rng = np.random.default_rng(seed)
    size = 1 << m
    mass = rng.integers(1, 1000, size=size) * (rng.random(size) < 0.5)
    mass[0] = 0
    f = mass.astype(np.int64)
    for bit in range(m):
        step = 1 << bit
        has = (np.arange(size) & step) != 0
        f[has] += f[np.arange(size)[has] ^ step]
    order = np.lexsort((np.arange(size), f))
    ranks = np.empty(size, dtype=np.int64)
    ranks[order] = np.arange(size)
    return Explicit(tuple(int(r) for r in ranks))


def random_responsive(m: int, rng: random.Random, family: Optional[str] = None) -> PreferenceSpec:
    """A random member of one of the responsive families.

    Integer weights in 0..9 make ties and zero-value items common; one
    additive draw in four uses float weights instead.
    """
    family = family or rng.choice(FAMILIES)
    if family == "lex-count":
        return LexCount(ItemRanking.from_order(rng.sample(range(m), m)), rng.random() < 0.5)
    if family == "pivot":
        return Pivot(rng.randrange(m), ItemRanking.from_order(rng.sample(range(m), m)))
    if family == "count-only":
        return CountOnly(rng.getrandbits(m), m)
    if family == "additive":
        if rng.random() < 0.25:
            return Additive(tuple(rng.random() for _ in range(m)))
        return Additive(tuple(rng.randrange(10) for _ in range(m)))
    if family == "capped-additive":
        weights = tuple(rng.randrange(10) for _ in range(m))
        return CappedAdditive(weights, rng.randint(0, sum(weights)))
    raise InvalidArgument(f"unknown family {family!r}")


@dataclass
class BoundReport:
    m: int
    n: int
    trials: int
    seed: int
    bound: int
    max_min: int
    violations: int
    tight_kind: str
    tight_min: int
    tight_achieved: bool
    histogram: dict = field(default_factory=dict)

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def verify_bound_thm52(m: int, n: int, trials: int, seed: int) -> BoundReport:
    """Random monotone profiles never need more than ``min(ceil((m+n-1)/2), m)`` items.

    Raises :class:`TheoremViolation` on the first counterexample; the
    report also states whether the matching tight construction reaches
    the bound exactly.
    """
    _guard(m, RANDOM_GUARD)
    if n < 1 or trials < 0:
        raise InvalidArgument("need n >= 1 and trials >= 0")
    bound = existence_bound(m, n)
    rng = np.random.default_rng(seed)
    worst = 0
    hist: dict = {}
    for trial in range(trials):
        seeds = rng.integers(0, 2**63 - 1, size=n)
        instance = Instance(m, [random_monotone(m, int(s)) for s in seeds],
                            f"random seed={seed} trial={trial}")
        found = min_agreeable(instance).min_size
        hist[found] = hist.get(found, 0) + 1
        worst = max(worst, found)
        if found > bound:
            raise TheoremViolation(f"trial {trial}: minimum agreeable size {found} > {bound}", instance)
    tight_kind = "thm52-case1" if n >= m else "thm52-case2"
    tight = min_agreeable(tight_instance(tight_kind, m, n)).min_size
    return BoundReport(m, n, trials, seed, bound, worst, 0, tight_kind, tight, tight == bound,
                       dict(sorted(hist.items())))
