"""Counting comparison oracle and oracle-driven elicitation of item rankings."""

from __future__ import annotations

import threading
from functools import cmp_to_key
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from agreeable.errors import InconsistentOracle, InvalidArgument
from agreeable.prefs import Guarantees, ItemRanking


@dataclass
class QueryTally:
    singleton: int = 0
    subset: int = 0

    @property
    def total(self) -> int:
        return self.singleton + self.subset

    def as_dict(self) -> Dict[str, int]:
        return {"singleton": self.singleton, "subset": self.subset, "total": self.total}


class PreferenceOracle:
    """Answers "which of two subsets does player ``i`` prefer" and counts queries.

    ``players`` are objects with a ``compare(a, b)`` method (any
    :class:`~agreeable.prefs.PreferenceSpec` qualifies). Declared guarantees
    default to each player's own ``guarantees``; pass ``guarantees`` to
    override them, e.g. to mislabel a player in tests.

    A query whose two sides are both single items is tallied as a singleton
    query, anything else as a subset query. With ``record=True`` every
    answer is appended to ``transcript``.
    """

    def __init__(self, players: Sequence, m: Optional[int] = None,
                 guarantees: Optional[Sequence[Guarantees]] = None, record: bool = False):
        self.players = list(players)
        if m is None:
            if not self.players:
                raise InvalidArgument("m is required when there are no players")
            m = self.players[0].m
        for p in self.players:
            if getattr(p, "m", m) != m:
                raise InvalidArgument(f"player defined over {p.m} items, oracle over {m}")
        self.m = m
        if guarantees is None:
            guarantees = [getattr(p, "guarantees", Guarantees(False, False)) for p in self.players]
        self.guarantees = list(guarantees)
        if len(self.guarantees) != len(self.players):
            raise InvalidArgument("one guarantee entry per player")
        self.tallies = [QueryTally() for _ in self.players]
        self.record = record
        self.transcript: List[Tuple[int, int, int, int]] = []
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return len(self.players)

    def compare(self, player: int, a: int, b: int) -> int:
        result = self.players[player].compare(a, b)
        single = a.bit_count() == 1 and b.bit_count() == 1
        with self._lock:
            tally = self.tallies[player]
            if single:
                tally.singleton += 1
            else:
                tally.subset += 1
            if self.record:
                self.transcript.append((player, a, b, result))
        return result

    def snapshot(self) -> List[QueryTally]:
        with self._lock:
            return [QueryTally(t.singleton, t.subset) for t in self.tallies]

    def total(self) -> QueryTally:
        snap = self.snapshot()
        return QueryTally(sum(t.singleton for t in snap), sum(t.subset for t in snap))


def since(before: Sequence[QueryTally], after: Sequence[QueryTally]) -> List[QueryTally]:
    """Per-player queries issued between two snapshots."""
    return [QueryTally(b.singleton - a.singleton, b.subset - a.subset) for a, b in zip(before, after)]


def rank_items(oracle: PreferenceOracle, player: int, items: Sequence[int]) -> List[List[int]]:
    """Tie groups of ``items`` (best first) from singleton queries.

    The stable library sort keeps equal items in index order and needs
    ``O(len(items) * log(len(items)))`` comparisons; a further pass against
    each group's first member forms the tie groups, and the best item is
    compared with the worst once more. Every answer received is then checked
    against the final grouping, so intransitive answers seen along the way
    are reported instead of yielding an arbitrary order.
    """
    cache: Dict[Tuple[int, int], int] = {}

    def ask(x: int, y: int) -> int:
        key = (x, y) if x < y else (y, x)
        if key not in cache:
            cache[key] = oracle.compare(player, 1 << key[0], 1 << key[1])
        r = cache[key]
        return r if key[0] == x else -r

    ordered = sorted(sorted(items), key=cmp_to_key(lambda x, y: -ask(x, y)))
    groups: List[List[int]] = []
    for item in ordered:
        if groups and ask(groups[-1][0], item) == 0:
            groups[-1].append(item)
        else:
            groups.append([item])
    if len(ordered) > 2:
        ask(ordered[0], ordered[-1])
    where = {item: gi for gi, g in enumerate(groups) for item in g}
    for (x, y), r in cache.items():
        expected = (where[x] < where[y]) - (where[x] > where[y])
        if (r > 0) - (r < 0) != expected:
            raise InconsistentOracle(
                f"player {player}: answers on items {x} and {y} contradict a total preorder")
    return groups


def singles_ranking(oracle: PreferenceOracle, player: int) -> ItemRanking:
    """Elicit a player's ranking of all single items via the oracle."""
    return ItemRanking.from_groups(rank_items(oracle, player, range(oracle.m)))
