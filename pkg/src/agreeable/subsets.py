"""Subsets of the item universe as integer bitmasks.

Item ``i`` belongs to subset ``T`` iff bit ``i`` of ``T`` is set. Plain ints
keep the exhaustive searches cheap; these helpers cover the few operations
that are not one-liners.
"""

from typing import Iterable, Iterator, List


def full(m: int) -> int:
    return (1 << m) - 1


def complement(mask: int, m: int) -> int:
    return full(m) & ~mask


def size(mask: int) -> int:
    return mask.bit_count()


def from_items(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def to_items(mask: int) -> List[int]:
    """Item indices of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def contains(mask: int, item: int) -> bool:
    return (mask >> item) & 1 == 1


def of_size(m: int, k: int) -> Iterator[int]:
    """All ``k``-subsets of ``m`` items in increasing numeric order.

    Uses Gosper's hack, so successive masks are produced without building
    tuples.

    >>> [bin(x) for x in of_size(4, 2)]
    ['0b11', '0b101', '0b110', '0b1001', '0b1010', '0b1100']
    """
    if k < 0 or k > m:
        return
    if k == 0:
        yield 0
        return
    limit = 1 << m
    x = (1 << k) - 1
    while x < limit:
        yield x
        low = x & -x
        ripple = x + low
        x = (((ripple ^ x) >> 2) // low) | ripple


def by_size(m: int) -> Iterator[int]:
    """Every subset of ``m`` items, ordered by popcount then numerically."""
    for k in range(m + 1):
        yield from of_size(m, k)
