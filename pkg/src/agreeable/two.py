"""Two-player selection from single-item rankings alone.

The output is necessarily agreeable for both rankings, so it is agreeable
under *every* pair of responsive preferences extending them.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from agreeable.errors import InvalidArgument
from agreeable.oracle import PreferenceOracle, singles_ranking
from agreeable.prefs import ItemRanking


def two_bound(m: int) -> int:
    return (m + 2) // 2


def worth_bound(m: int, k: int) -> int:
    return -(-(m + k - 1) // k)


def _check(r1: ItemRanking, r2: ItemRanking, m: Optional[int]) -> int:
    if r1.m != r2.m or (m is not None and m != r1.m):
        raise InvalidArgument(f"rankings over {r1.m} and {r2.m} items, expected {m}")
    if r1.m < 1:
        raise InvalidArgument("need at least one item")
    return r1.m


def _best(r2: ItemRanking, block: Sequence[int]) -> int:
    rank = r2.ranks
    return min(block, key=lambda x: (rank[x], x))


def _pick_blocks(r1: ItemRanking, r2: ItemRanking, skip: int, k: int) -> int:
    # r1-top item, then the r2-best item of each consecutive r1-block of size k
    order = [x for x in r1.order if not (skip >> x) & 1]
    mask = 1 << order[0]
    for start in range(1, len(order), k):
        mask |= 1 << _best(r2, order[start:start + k])
    return mask


def select_two(r1: ItemRanking, r2: ItemRanking, m: Optional[int] = None) -> int:
    """Subset of at most ``ceil((m+1)/2)`` items necessarily agreeable for both.

    For odd ``m`` take the top item of ``r1`` and, from each following
    ``r1``-consecutive pair, the item ``r2`` prefers (lower index on an
    ``r2`` tie). For even ``m`` item 0 is set aside, the odd case runs on
    the rest and item 0 is added back.
    """
    m = _check(r1, r2, m)
    aside = 1 if m % 2 == 0 else 0
    return _pick_blocks(r1, r2, aside, 2) | aside


def select_two_worth(r1: ItemRanking, r2: ItemRanking, m: Optional[int], k: int) -> int:
    """Subset of at most ``ceil((m+k-1)/k)`` items necessarily worth ``1/k`` for both.

    The top item of ``r1`` is taken, then the ``r2``-best item from each
    block of ``k`` ``r1``-consecutive items. When ``m - 1`` leaves a
    remainder of one modulo ``k``, item 0 is set aside first (matching
    :func:`select_two` at ``k = 2``); larger remainders form a short last
    block instead, which keeps the size within the bound.
    """
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    m = _check(r1, r2, m)
    aside = 1 if (m - 1) % k == 1 else 0
    return _pick_blocks(r1, r2, aside, k) | aside


def select_two_oracle(oracle: PreferenceOracle, k: int = 2) -> Tuple[int, List[ItemRanking]]:
    """Elicit both rankings through ``oracle`` and run the block selection.

    Returns the subset and the elicited rankings.
    """
    if oracle.n != 2:
        raise InvalidArgument(f"two-player selection got {oracle.n} players")
    rankings = [singles_ranking(oracle, p) for p in range(2)]
    if k == 2:
        return select_two(rankings[0], rankings[1], oracle.m), rankings
    return select_two_worth(rankings[0], rankings[1], oracle.m, k), rankings
