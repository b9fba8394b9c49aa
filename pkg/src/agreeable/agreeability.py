"""Agreeable, necessarily agreeable and possibly agreeable subsets.

The ranking-based checks never look at a full preference: they decide what
holds for *every* responsive preference consistent with a single-item
ranking. For strict rankings necessity is the prefix-count test (every
top-``k`` prefix holds at least ``k/2`` items of the set); with ties the
operational test is the existence of a dominating injection from the
complement into the set, which is what :func:`dominance_matching` computes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from agreeable import subsets
from agreeable.errors import InvalidArgument
from agreeable.oracle import PreferenceOracle
from agreeable.prefs import Additive, CappedAdditive, ItemRanking

PREFIX = "prefix"
MATCHING = "matching"


@dataclass(frozen=True)
class AgreeVerdict:
    """Ranking-level verdict for one subset.

    ``witness_k`` is the first prefix length at which the necessity test
    fails (``None`` when the set is necessarily agreeable or when the test
    ran under matching semantics). ``semantics`` says which test produced
    the verdict.
    """

    necessary: bool
    possible: bool
    witness_k: Optional[int]
    semantics: str


def is_agreeable(oracle: PreferenceOracle, player: int, t: int) -> bool:
    """One oracle query: does ``player`` weakly prefer ``t`` to its complement."""
    return oracle.compare(player, t, subsets.complement(t, oracle.m)) >= 0


def first_failing_prefix(ranking: ItemRanking, t: int) -> Optional[int]:
    """Smallest ``k`` with fewer than ``k/2`` of the top-``k`` items in ``t``."""
    held = 0
    for k, item in enumerate(ranking.order, start=1):
        held += (t >> item) & 1
        if 2 * held < k:
            return k
    return None


def _first_majority_prefix(ranking: ItemRanking, t: int) -> Optional[int]:
    held = 0
    for k, item in enumerate(ranking.order, start=1):
        held += (t >> item) & 1
        if 2 * held > k:
            return k
    return None


def dominance_injection(ranking: ItemRanking, t: int) -> Optional[Dict[int, int]]:
    """Map each item outside ``t`` to a distinct, weakly better item of ``t``.

    The i-th best outside item is paired with the i-th best item of ``t``;
    an exchange argument shows this greedy pairing succeeds whenever any
    dominating injection exists. Returns ``None`` when none does.
    """
    inside = [x for x in ranking.order if (t >> x) & 1]
    outside = [y for y in ranking.order if not (t >> y) & 1]
    if len(inside) < len(outside):
        return None
    rank = ranking.ranks
    for x, y in zip(inside, outside):
        if rank[x] > rank[y]:
            return None
    return dict(zip(outside, inside))


def dominance_matching(ranking: ItemRanking, t: int) -> bool:
    return dominance_injection(ranking, t) is not None


def necessarily_agreeable(ranking: ItemRanking, t: int) -> bool:
    if ranking.strict:
        return first_failing_prefix(ranking, t) is None
    return dominance_matching(ranking, t)


def possibly_agreeable(ranking: ItemRanking, t: int) -> bool:
    if ranking.strict:
        return _first_majority_prefix(ranking, t) is not None
    return not dominance_matching(ranking, subsets.complement(t, ranking.m))


def agree_verdict(ranking: ItemRanking, t: int) -> AgreeVerdict:
    if ranking.strict:
        k = first_failing_prefix(ranking, t)
        return AgreeVerdict(k is None, _first_majority_prefix(ranking, t) is not None, k, PREFIX)
    return AgreeVerdict(necessarily_agreeable(ranking, t), possibly_agreeable(ranking, t), None, MATCHING)


def separating_preference(ranking: ItemRanking, t: int) -> Additive:
    """An additive preference consistent with ``ranking`` that strictly prefers ``-t``.

    Items in the first failing prefix get weight about 1, the rest weight
    about 0, with a small position-dependent term keeping the weights
    strictly decreasing along the ranking.
    """
    if not ranking.strict:
        raise InvalidArgument("separating preference needs a strict ranking")
    k = first_failing_prefix(ranking, t)
    if k is None:
        raise InvalidArgument("set is necessarily agreeable; nothing separates it")
    m = ranking.m
    eps = Fraction(1, 4 * m * m)
    weights = [Fraction(0)] * m
    for position, item in enumerate(ranking.order, start=1):
        weights[item] = (1 if position <= k else 0) + (m - position) * eps
    return Additive(tuple(weights))


def _slots(ranking: ItemRanking, t: int, k: int) -> bool:
    # each item of t may cover k-1 outside items, none of them better than it
    inside = [x for x in ranking.order if (t >> x) & 1 for _ in range(k - 1)]
    outside = [y for y in ranking.order if not (t >> y) & 1]
    if len(inside) < len(outside):
        return False
    rank = ranking.ranks
    return all(rank[x] <= rank[y] for x, y in zip(inside, outside))


def _prefix_worth(ranking: ItemRanking, t: int, k: int) -> bool:
    held = 0
    for j, item in enumerate(ranking.order, start=1):
        held += (t >> item) & 1
        if k * held < j:
            return False
    return True


def necessarily_worth(ranking: ItemRanking, t: int, k: int) -> bool:
    """Whether ``-t`` splits into ``k-1`` parts each dominated item-by-item by ``t``.

    Decided as a capacity-``k-1`` assignment; for strict rankings the
    prefix form ``|top_j & t| >= j/k`` is evaluated too and must agree.
    """
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    by_slots = _slots(ranking, t, k)
    if ranking.strict and by_slots != _prefix_worth(ranking, t, k):
        raise AssertionError(f"capacity and prefix tests disagree for t={t:#b}, k={k}")
    return by_slots


def welfare_ratio(utility: Additive | CappedAdditive, t: int) -> float:
    whole = utility.utility(subsets.full(utility.m))
    if whole == 0:
        return 0.0
    return float(utility.utility(t) / whole)
