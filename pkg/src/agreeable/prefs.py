"""Items, single-item rankings and the concrete preference families.

Every preference compares two subsets (int bitmasks, see :mod:`agreeable.subsets`)
and answers with a cmp-style int: positive when the first subset is strictly
preferred, ``0`` on indifference, negative when the second one is.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from numbers import Rational
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from agreeable import subsets
from agreeable.errors import InstanceTooLarge, InvalidArgument

TABLE_GUARD = 16
FLOAT_TIE_RTOL = 1e-12


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class ItemRanking:
    """A total preorder on the items ``0..m-1``.

    ``groups`` lists indifference classes from most to least preferred.
    Items inside a group are kept in index order, which is also the order
    every traversal uses to break ties.

    >>> r = ItemRanking.from_groups([[2], [0, 1]])
    >>> r.order, r.strict
    ((2, 0, 1), False)
    """

    groups: Tuple[Tuple[int, ...], ...]
    _rank: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _order: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        groups = tuple(tuple(sorted(int(i) for i in g)) for g in self.groups)
        if any(not g for g in groups):
            raise InvalidArgument("ranking groups must be nonempty")
        flat = [i for g in groups for i in g]
        if sorted(flat) != list(range(len(flat))):
            raise InvalidArgument(f"ranking groups must partition 0..{len(flat) - 1}: {groups}")
        rank = [0] * len(flat)
        for gi, g in enumerate(groups):
            for i in g:
                rank[i] = gi
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "_rank", tuple(rank))
        object.__setattr__(self, "_order", tuple(flat))

    @classmethod
    def from_order(cls, order: Iterable[int]) -> "ItemRanking":
        """Strict ranking, most preferred item first."""
        return cls(tuple((i,) for i in order))

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]]) -> "ItemRanking":
        return cls(tuple(tuple(g) for g in groups))

    @classmethod
    def identity(cls, m: int) -> "ItemRanking":
        return cls.from_order(range(m))

    @classmethod
    def from_scores(cls, scores: Sequence) -> "ItemRanking":
        """Higher score is better; equal scores become one tie group."""
        return ranking_from_compare(range(len(scores)), lambda a, b: _sign(scores[a] - scores[b]))

    @property
    def m(self) -> int:
        return len(self._order)

    @property
    def strict(self) -> bool:
        return all(len(g) == 1 for g in self.groups)

    @property
    def order(self) -> Tuple[int, ...]:
        """Items from best to worst, ties in index order."""
        return self._order

    @property
    def ranks(self) -> Tuple[int, ...]:
        """Group index of every item (0 = most preferred)."""
        return self._rank

    def rank(self, item: int) -> int:
        return self._rank[item]

    def weakly_prefers(self, x: int, y: int) -> bool:
        return self._rank[x] <= self._rank[y]

    def reversed(self) -> "ItemRanking":
        return ItemRanking(self.groups[::-1])

    def describe(self, labels: Optional[Sequence[str]] = None) -> str:
        name = (lambda i: labels[i]) if labels else (lambda i: f"x{i + 1}")
        return " > ".join(" ~ ".join(name(i) for i in g) for g in self.groups)


def ranking_from_compare(items: Iterable[int], cmp: Callable[[int, int], int]) -> ItemRanking:
    """Rank the whole universe ``items`` by a cmp-style single-item comparison."""
    ordered = sorted(items, key=functools.cmp_to_key(lambda a, b: -cmp(a, b)))
    groups: List[List[int]] = []
    for item in ordered:
        if groups and cmp(groups[-1][0], item) == 0:
            groups[-1].append(item)
        else:
            groups.append([item])
    return ItemRanking.from_groups(groups)


def lex_dominates(t1: int, t2: int, order: ItemRanking) -> bool:
    """Whether ``t1`` lexicographically dominates ``t2`` under a strict ``order``.

    Both sets are written in increasing order-position; the first position
    where they differ must belong to ``t1``.
    """
    if subsets.size(t1) != subsets.size(t2):
        raise InvalidArgument("lexicographic dominance needs equal-size sets")
    if not order.strict:
        raise InvalidArgument("lexicographic dominance needs a strict order")
    if t1 == t2:
        return False
    pa = sum(1 << order.rank(i) for i in subsets.to_items(t1))
    pb = sum(1 << order.rank(i) for i in subsets.to_items(t2))
    diff = pa ^ pb
    return bool(pa & diff & -diff)


def _byte_tables(values: Sequence) -> List[list]:
    # values summed over the set bits of each byte-sized chunk of a mask
    tables = []
    for start in range(0, len(values), 8):
        chunk = values[start:start + 8]
        table = [chunk[0] - chunk[0]]
        for w in chunk:
            table += [v + w for v in table]
        tables.append(table)
    return tables


def _table_sum(tables: List[list], mask: int):
    total = 0
    for table in tables:
        if not mask:
            break
        total = total + table[mask & 0xFF]
        mask >>= 8
    return total


@dataclass(frozen=True)
class Guarantees:
    monotonic: bool = True
    responsive: bool = True


class PreferenceSpec:
    """Common surface of the preference families.

    Subclasses provide ``m`` and ``compare``; everything else derives from
    those two.
    """

    kind: str = ""
    m: int

    def compare(self, a: int, b: int) -> int:
        raise NotImplementedError

    @property
    def guarantees(self) -> Guarantees:
        return Guarantees()

    def singles_ranking(self) -> ItemRanking:
        """The ranking induced by comparing singletons."""
        return ranking_from_compare(range(self.m), lambda x, y: self.compare(1 << x, 1 << y))


def compare_spec(spec: PreferenceSpec, t1: int, t2: int) -> int:
    return spec.compare(t1, t2)


def _check_strict(order: ItemRanking, what: str):
    if not order.strict:
        raise InvalidArgument(f"{what} needs a strict item order")


@dataclass(frozen=True)
class LexCount(PreferenceSpec):
    """Larger sets win; equal sizes are decided by lexicographic dominance.

    With ``reverse=True`` the lexicographically dominated set wins instead,
    which makes the last item in ``order`` the best single item.
    """

    order: ItemRanking
    reverse: bool = False
    kind = "lex-count"

    def __post_init__(self):
        _check_strict(self.order, "LexCount")
        positions = [1 << p for p in self.order.ranks]
        object.__setattr__(self, "_pos", _byte_tables(positions) if positions else [])

    @property
    def m(self) -> int:
        return self.order.m

    def compare(self, a: int, b: int) -> int:
        ca, cb = a.bit_count(), b.bit_count()
        if ca != cb:
            return 1 if ca > cb else -1
        if a == b:
            return 0
        if ca == 1:
            ranks = self.order.ranks
            win = 1 if ranks[a.bit_length() - 1] < ranks[b.bit_length() - 1] else -1
            return -win if self.reverse else win
        pa = _table_sum(self._pos, a)
        diff = pa ^ _table_sum(self._pos, b)
        win = 1 if pa & diff & -diff else -1
        return -win if self.reverse else win


@dataclass(frozen=True)
class Pivot(PreferenceSpec):
    """Holding ``pivot`` beats not holding it; then size, then lexicographic order."""

    pivot: int
    order: ItemRanking
    kind = "pivot"

    def __post_init__(self):
        _check_strict(self.order, "Pivot")
        if not 0 <= self.pivot < self.order.m:
            raise InvalidArgument(f"pivot item {self.pivot} outside 0..{self.order.m - 1}")
        object.__setattr__(self, "_lex", LexCount(self.order))

    @property
    def m(self) -> int:
        return self.order.m

    def compare(self, a: int, b: int) -> int:
        ha, hb = (a >> self.pivot) & 1, (b >> self.pivot) & 1
        if ha != hb:
            return 1 if ha else -1
        return self._lex.compare(a, b)


@dataclass(frozen=True)
class CountOnly(PreferenceSpec):
    """Only the number of held items from ``support`` matters."""

    support: int
    m: int
    kind = "count-only"

    def __post_init__(self):
        if self.support & ~subsets.full(self.m):
            raise InvalidArgument("support mentions items outside the universe")

    def compare(self, a: int, b: int) -> int:
        return _sign((a & self.support).bit_count() - (b & self.support).bit_count())

    def singles_ranking(self) -> ItemRanking:
        inside = subsets.to_items(self.support)
        outside = subsets.to_items(subsets.complement(self.support, self.m))
        return ItemRanking.from_groups([g for g in (inside, outside) if g])


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


class _Utility(PreferenceSpec):
    # exact comparison for int/Fraction weights, relative tolerance for floats

    def _setup(self, weights, extra=()):
        if any(w < 0 for w in weights) or any(v < 0 for v in extra):
            raise InvalidArgument("weights must be nonnegative")
        object.__setattr__(self, "_tables", _byte_tables(list(weights)) if weights else [])
        exact = _is_exact(weights) and _is_exact(extra)
        tol = 0 if exact else FLOAT_TIE_RTOL * max(1.0, float(self.utility(subsets.full(len(weights)))))
        object.__setattr__(self, "_tol", tol)

    @property
    def m(self) -> int:
        return len(self.weights)

    def total(self, mask: int):
        return _table_sum(self._tables, mask)

    def utility(self, mask: int):
        raise NotImplementedError

    def compare(self, a: int, b: int) -> int:
        d = self.utility(a) - self.utility(b)
        if self._tol and abs(d) <= self._tol:
            return 0
        return _sign(d)


@dataclass(frozen=True)
class Additive(_Utility):
    weights: Tuple
    kind = "additive"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        self._setup(self.weights)

    def utility(self, mask: int):
        return self.total(mask)


@dataclass(frozen=True)
class CappedAdditive(_Utility):
    """Utility ``min(sum of weights, cap)``: monotone and subadditive."""

    weights: Tuple
    cap: object
    kind = "capped-additive"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        self._setup(self.weights, (self.cap,))

    def utility(self, mask: int):
        return min(self.total(mask), self.cap)


@dataclass(frozen=True)
class Explicit(PreferenceSpec):
    """A preorder over all ``2**m`` subsets as a rank array indexed by bitmask.

    Higher rank means more preferred; equal ranks are indifferent.
    """

    ranks: Tuple[int, ...]
    kind = "explicit"

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        n = len(ranks)
        if n == 0 or n & (n - 1):
            raise InvalidArgument(f"table length {n} is not a power of two")
        if n > 1 << TABLE_GUARD:
            raise InstanceTooLarge(f"explicit tables are limited to m <= {TABLE_GUARD}")
        object.__setattr__(self, "ranks", ranks)

    @property
    def m(self) -> int:
        return len(self.ranks).bit_length() - 1

    def compare(self, a: int, b: int) -> int:
        return _sign(self.ranks[a] - self.ranks[b])

    @functools.cached_property
    def guarantees(self) -> Guarantees:
        return Guarantees(monotonic=is_monotonic(self), responsive=is_responsive(self))


def to_table(spec: PreferenceSpec) -> Explicit:
    """Materialize any preference as an explicit rank table (m <= 16)."""
    if isinstance(spec, Explicit):
        return spec
    m = spec.m
    if m > TABLE_GUARD:
        raise InstanceTooLarge(f"cannot tabulate m={m} > {TABLE_GUARD}")
    ordered = sorted(range(1 << m), key=functools.cmp_to_key(spec.compare))
    ranks = [0] * (1 << m)
    r = 0
    for prev, cur in zip(ordered, ordered[1:]):
        if spec.compare(cur, prev) > 0:
            r += 1
        ranks[cur] = r
    return Explicit(tuple(ranks))


def _rank_array(spec: PreferenceSpec) -> np.ndarray:
    return np.asarray(to_table(spec).ranks, dtype=np.int64)


def is_monotonic(spec: PreferenceSpec) -> bool:
    """``T + x`` is weakly preferred to ``T`` for every subset and item."""
    ranks = _rank_array(spec)
    m = len(ranks).bit_length() - 1
    masks = np.arange(len(ranks))
    for x in range(m):
        without = masks[(masks >> x) & 1 == 0]
        if np.any(ranks[without | (1 << x)] < ranks[without]):
            return False
    return True


def is_responsive(spec: PreferenceSpec) -> bool:
    """Monotonic, and swapping an item for a weakly better single never hurts."""
    if not is_monotonic(spec):
        return False
    ranks = _rank_array(spec)
    m = len(ranks).bit_length() - 1
    masks = np.arange(len(ranks))
    for x in range(m):
        for y in range(m):
            if x == y or ranks[1 << x] < ranks[1 << y]:
                continue
            sel = masks[((masks >> y) & 1 == 1) & ((masks >> x) & 1 == 0)]
            if np.any(ranks[sel ^ (1 << y) ^ (1 << x)] < ranks[sel]):
                return False
    return True
