"""Three-player selection through a preference oracle.

Players are indexed 0, 1, 2. Player 0 fixes the pairing, player 1 drives
the swap loop, and player 2 picks one of two complementary halves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from agreeable import subsets
from agreeable.errors import InvalidArgument, NotResponsive, OracleViolation
from agreeable.oracle import PreferenceOracle, QueryTally, rank_items, since


def three_bound(m: int) -> int:
    return (m + 1) // 2 + 1


@dataclass
class SwapTrace:
    """What the swap loop and the case analysis did on one run.

    ``pairs`` holds the ``(better, worse)`` items of each pair under
    player 0's ranking; ``pair_states[j]`` is true once the set ``B`` holds
    the member player 1 prefers.
    """

    top_first: Optional[int] = None
    top_second: Optional[int] = None
    set_aside: Optional[int] = None
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    pair_states: List[bool] = field(default_factory=list)
    last_inserted: Optional[int] = None
    last_removed: Optional[int] = None
    iterations: int = 0
    case: int = 1
    half_source: str = "B"
    third_choice: str = "E"

    def as_dict(self, labels=None):
        name = (lambda i: None if i is None else labels[i]) if labels else (lambda i: i)
        return {
            "top_first": name(self.top_first),
            "top_second": name(self.top_second),
            "set_aside": name(self.set_aside),
            "pairs": [[name(a), name(b)] for a, b in self.pairs],
            "pair_states": ["more-preferred-held" if s else "less-preferred-held"
                            for s in self.pair_states],
            "last_inserted": name(self.last_inserted),
            "last_removed": name(self.last_removed),
            "iterations": self.iterations,
            "case": self.case,
            "half_source": self.half_source,
            "third_choice": self.third_choice,
        }


@dataclass
class ThreeResult:
    subset: int
    trace: SwapTrace
    queries: List[QueryTally]
    verification: List[QueryTally]


def _even_case(oracle: PreferenceOracle, universe: List[int], trace: SwapTrace) -> int:
    if not universe:
        return 0
    order = [x for g in rank_items(oracle, 0, universe) for x in g]
    top1 = order[0]
    rest = [x for x in universe if x != top1]
    top2 = rest[0]
    for x in rest[1:]:
        if oracle.compare(1, 1 << x, 1 << top2) > 0:
            top2 = x
    trace.top_first, trace.top_second = top1, top2

    ranked = [x for x in order if x not in (top1, top2)]
    whole = subsets.from_items(ranked)
    b = 0
    strict: List[bool] = []
    for j in range(0, len(ranked), 2):
        first, second = ranked[j], ranked[j + 1]
        c = oracle.compare(1, 1 << first, 1 << second)
        worse, better = (first, second) if c < 0 else (second, first)
        trace.pairs.append((first, second))
        trace.pair_states.append(False)
        strict.append(c != 0)
        b |= 1 << worse
    pending = [j for j, s in enumerate(strict) if s]

    def members(j):
        first, second = trace.pairs[j]
        held = first if (b >> first) & 1 else second
        return held, first + second - held

    # swap while player 1 weakly prefers A - B to B; only pairs where B holds
    # the strictly worse member may flip, so each pair flips at most once
    while pending:
        if oracle.compare(1, whole & ~b, b) < 0:
            break
        j = pending.pop(0)
        removed, inserted = members(j)
        b ^= (1 << removed) | (1 << inserted)
        trace.pair_states[j] = True
        trace.last_removed, trace.last_inserted = removed, inserted
        trace.iterations += 1

    two = 1 << top2
    if trace.iterations == 0:
        trace.case, half = 1, b
    else:
        trace.case = 2
        d = b ^ (1 << trace.last_inserted) ^ (1 << trace.last_removed)
        if oracle.compare(1, (whole & ~b) | two, b) >= 0:
            trace.half_source, half = "B", b
        elif oracle.compare(1, d | two, whole & ~d) >= 0:
            trace.half_source, half = "D", d
        else:
            raise OracleViolation(
                "neither half satisfies player 1; the oracle is not responsive",
                {"A": whole, "B": b, "C": whole & ~d, "D": d, "top_second": top2,
                 "transcript": list(oracle.transcript)})

    other = whole & ~half
    if whole and oracle.compare(2, half, other) < 0:
        trace.third_choice, half = "A-E", other
    return (1 << top1) | two | half


def run_three(oracle: PreferenceOracle) -> ThreeResult:
    """Run the three-player selection and verify the result with three queries.

    The returned ``queries`` covers the selection itself, ``verification``
    the closing ``T`` versus ``-T`` check for each player.
    """
    if oracle.n != 3:
        raise InvalidArgument(f"three-player selection got {oracle.n} players")
    if oracle.m < 1:
        raise InvalidArgument("need at least one item")
    for p, g in enumerate(oracle.guarantees):
        if not g.responsive:
            raise NotResponsive(f"player {p} is not declared responsive")
    m = oracle.m
    trace = SwapTrace()
    start = oracle.snapshot()
    universe = list(range(m))
    aside = 0
    if m % 2:
        trace.set_aside = universe.pop(0)
        aside = 1
    t = _even_case(oracle, universe, trace) | aside
    mid = oracle.snapshot()

    rest = subsets.complement(t, m)
    for p in range(3):
        if oracle.compare(p, t, rest) < 0:
            raise OracleViolation(
                f"player {p} strictly prefers the complement of the selected set",
                {"T": t, "player": p, "trace": trace.as_dict(),
                 "transcript": list(oracle.transcript)})
    return ThreeResult(t, trace, since(start, mid), since(mid, oracle.snapshot()))


def select_three(oracle: PreferenceOracle, m: Optional[int] = None) -> int:
    """Subset of at most ``ceil(m/2) + 1`` items agreeable to three responsive players."""
    if m is not None and m != oracle.m:
        raise InvalidArgument(f"oracle is over {oracle.m} items, not {m}")
    return run_three(oracle).subset
