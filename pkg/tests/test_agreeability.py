import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agreeable import subsets
from agreeable.agreeability import (MATCHING, PREFIX, agree_verdict, dominance_injection,
                                    dominance_matching, first_failing_prefix,
                                    necessarily_agreeable, necessarily_worth, possibly_agreeable,
                                    separating_preference, welfare_ratio)
from agreeable.brute import EXAMPLE_54_ORDERS
from agreeable.errors import InvalidArgument
from agreeable.prefs import Additive, CappedAdditive, ItemRanking


def S(*items):
    return subsets.from_items(i - 1 for i in items)


def random_groups(m, rng):
    order = rng.sample(range(m), m)
    groups, cur = [], [order[0]]
    for x in order[1:]:
        if rng.random() < 0.4:
            cur.append(x)
        else:
            groups.append(cur)
            cur = [x]
    groups.append(cur)
    return ItemRanking.from_groups(groups)


@st.composite
def rankings(draw, max_m=9, ties=True):
    m = draw(st.integers(1, max_m))
    order = draw(st.permutations(range(m)))
    if not ties:
        return ItemRanking.from_order(order)
    cuts = draw(st.lists(st.booleans(), min_size=m - 1, max_size=m - 1))
    groups, cur = [], [order[0]]
    for x, cut in zip(order[1:], cuts):
        if cut:
            groups.append(cur)
            cur = [x]
        else:
            cur.append(x)
    groups.append(cur)
    return ItemRanking.from_groups(groups)


# ---------------------------------------------------------------- worked examples

def test_example_first_player_prefix_failure():
    r = ItemRanking.from_order(EXAMPLE_54_ORDERS[0])
    assert first_failing_prefix(r, S(1, 2, 3)) == 3
    assert not necessarily_agreeable(r, S(1, 2, 3))
    assert necessarily_agreeable(r, S(1, 4, 5))
    v = agree_verdict(r, S(1, 2, 3))
    assert (v.necessary, v.possible, v.witness_k, v.semantics) == (False, True, 3, PREFIX)


def test_small_prefix_cases():
    r = ItemRanking.identity(4)
    assert necessarily_agreeable(r, S(1, 3))
    assert not necessarily_agreeable(r, S(2, 3, 4))
    assert possibly_agreeable(r, S(1))
    assert not possibly_agreeable(r, S(2, 4))
    assert necessarily_agreeable(r, subsets.full(4))
    assert not possibly_agreeable(r, 0)


def test_ties_use_matching_semantics():
    r = ItemRanking.from_groups([[0, 1], [2, 3]])
    v = agree_verdict(r, S(2, 3))
    assert v.semantics == MATCHING and v.witness_k is None
    assert v.necessary and not v.possible
    assert dominance_injection(r, S(2, 3)) == {0: 1, 3: 2}
    assert dominance_injection(r, S(3, 4)) is None


# ---------------------------------------------------------------- structural properties

def _prefix_oracle(r, t):
    return all(2 * bin(t & subsets.from_items(r.order[:k])).count("1") >= k
               for k in range(1, r.m + 1))


@pytest.mark.parametrize("m", range(1, 10))
def test_prefix_test_equals_matching_for_strict_rankings(m):
    rng = random.Random(m)
    for _ in range(5):
        r = ItemRanking.from_order(rng.sample(range(m), m))
        for t in range(1 << m):
            expected = _prefix_oracle(r, t)
            assert (first_failing_prefix(r, t) is None) == expected
            assert dominance_matching(r, t) == expected


def _networkx_matching(r, t):
    inside = subsets.to_items(t)
    outside = subsets.to_items(subsets.complement(t, r.m))
    g = nx.Graph()
    g.add_nodes_from(("o", y) for y in outside)
    g.add_nodes_from(("i", x) for x in inside)
    g.add_edges_from((("o", y), ("i", x)) for y in outside for x in inside
                     if r.weakly_prefers(x, y))
    top = [("o", y) for y in outside]
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    return sum(1 for node in top if node in matching) == len(outside)


@pytest.mark.parametrize("seed", range(12))
def test_greedy_injection_equals_maximum_matching(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 8)
    r = random_groups(m, rng)
    for t in range(1 << m):
        assert dominance_matching(r, t) == _networkx_matching(r, t)
        inj = dominance_injection(r, t)
        if inj is not None:
            assert len(set(inj.values())) == len(inj)
            assert all(r.weakly_prefers(x, y) and (t >> x) & 1 and not (t >> y) & 1
                       for y, x in inj.items())


@settings(max_examples=300, deadline=None)
@given(rankings(), st.data())
def test_duality(r, data):
    t = data.draw(st.integers(0, (1 << r.m) - 1))
    rest = subsets.complement(t, r.m)
    assert necessarily_agreeable(r, t) == (not possibly_agreeable(r, rest))


@settings(max_examples=300, deadline=None)
@given(rankings(), st.data())
def test_necessity_closed_under_adding_items(r, data):
    t = data.draw(st.integers(0, (1 << r.m) - 1))
    if necessarily_agreeable(r, t):
        for x in range(r.m):
            assert necessarily_agreeable(r, t | (1 << x))


def _consistent_additive(r, rng):
    # weights constant on tie groups, strictly decreasing across them
    values = sorted((Fraction(rng.randint(0, 50)) for _ in r.groups), reverse=True)
    values = [v + len(values) - i for i, v in enumerate(values)]
    w = [Fraction(0)] * r.m
    for g, v in zip(r.groups, values):
        for x in g:
            w[x] = v
    return Additive(tuple(w))


@pytest.mark.parametrize("seed", range(10))
def test_necessary_sets_survive_consistent_utilities(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 9)
    r = random_groups(m, rng) if seed % 2 else ItemRanking.from_order(rng.sample(range(m), m))
    utils = [_consistent_additive(r, rng) for _ in range(15)]
    for t in range(1 << m):
        rest = subsets.complement(t, m)
        if necessarily_agreeable(r, t):
            assert all(u.compare(t, rest) >= 0 for u in utils)
        if any(u.compare(t, rest) > 0 for u in utils):
            assert possibly_agreeable(r, t)


@pytest.mark.parametrize("m", range(1, 9))
def test_separating_preference_separates(m):
    rng = random.Random(100 + m)
    r = ItemRanking.from_order(rng.sample(range(m), m))
    for t in range(1 << m):
        if necessarily_agreeable(r, t):
            with pytest.raises(InvalidArgument):
                separating_preference(r, t)
            continue
        u = separating_preference(r, t)
        assert u.singles_ranking() == r
        assert u.compare(subsets.complement(t, m), t) > 0


def test_separating_preference_weights():
    u = separating_preference(ItemRanking.identity(3), S(3))
    assert u.weights == (1 + Fraction(2, 36), Fraction(1, 36), 0)
    with pytest.raises(InvalidArgument):
        separating_preference(ItemRanking.from_groups([[0, 1]]), 0)


# ---------------------------------------------------------------- worth 1/k

def _dominated(r, part, t):
    inside = sorted(subsets.to_items(t), key=lambda x: (r.rank(x), x))
    outside = sorted(part, key=lambda x: (r.rank(x), x))
    return len(outside) <= len(inside) and all(
        r.weakly_prefers(x, y) for x, y in zip(inside, outside))


def _worth_by_partition(r, t, k):
    outside = subsets.to_items(subsets.complement(t, r.m))
    for labels in itertools.product(range(k - 1), repeat=len(outside)):
        parts = [[y for y, p in zip(outside, labels) if p == q] for q in range(k - 1)]
        if all(_dominated(r, part, t) for part in parts):
            return True
    return False


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("seed", range(4))
def test_worth_matches_partition_search(k, seed):
    rng = random.Random(10 * k + seed)
    m = rng.randint(1, 7)
    r = random_groups(m, rng) if seed % 2 else ItemRanking.from_order(rng.sample(range(m), m))
    for t in range(1 << m):
        assert necessarily_worth(r, t, k) == _worth_by_partition(r, t, k)


@settings(max_examples=200, deadline=None)
@given(rankings(max_m=10), st.integers(2, 5), st.data())
def test_worth_weakens_as_k_grows(r, k, data):
    t = data.draw(st.integers(0, (1 << r.m) - 1))
    if necessarily_worth(r, t, k):
        assert necessarily_worth(r, t, k + 1)
    assert necessarily_worth(r, t, 2) == necessarily_agreeable(r, t)


@pytest.mark.parametrize("m", range(1, 11))
def test_worth_prefix_form_matches_capacity_form(m):
    # under the identity ranking the subsets run over every membership pattern,
    # so this covers all strict rankings of m items
    from agreeable.agreeability import _prefix_worth, _slots
    r = ItemRanking.identity(m)
    for k in (2, 3, 4):
        for t in range(1 << m):
            assert _slots(r, t, k) == _prefix_worth(r, t, k)


def test_worth_examples():
    r = ItemRanking.identity(7)
    assert necessarily_worth(r, S(1, 4, 7), 3)
    assert not necessarily_worth(r, S(1, 4, 7), 2)
    assert not necessarily_worth(r, S(2, 3, 4, 5, 6, 7), 3)
    with pytest.raises(InvalidArgument):
        necessarily_worth(r, 0, 1)


# ---------------------------------------------------------------- welfare

def test_welfare_ratio():
    assert welfare_ratio(Additive((3, 2, 1)), S(1)) == 0.5
    assert welfare_ratio(CappedAdditive((3, 2, 1), 4), S(1, 2)) == 1.0
    assert welfare_ratio(Additive((0, 0)), S(1)) == 0.0


# ---------------------------------------------------------------- further examples

def test_is_agreeable_examples():
    from agreeable.agreeability import is_agreeable
    from agreeable.oracle import PreferenceOracle
    from agreeable.prefs import LexCount, Pivot
    ident = ItemRanking.identity(3)
    oracle = PreferenceOracle([LexCount(ident), Pivot(0, ident)])
    assert is_agreeable(oracle, 0, S(1, 3))
    assert not is_agreeable(oracle, 1, S(2, 3))
    assert is_agreeable(oracle, 1, subsets.full(3))
    assert oracle.total().total == 3


@pytest.mark.parametrize("m", range(1, 8))
def test_all_indifferent_items(m):
    r = ItemRanking.from_groups([range(m)])
    for t in range(1 << m):
        assert dominance_matching(r, t) == (t.bit_count() >= (m + 1) // 2)


def test_separating_empty_set():
    u = separating_preference(ItemRanking.identity(4), 0)
    assert u.compare(subsets.full(4), 0) > 0


@pytest.mark.parametrize("m", range(1, 11))
def test_falsification_bridge_thousand_draws(m):
    # 1000 ranking-consistent additive utilities evaluated on every subset at once
    rng = np.random.default_rng(m)
    order = rng.permutation(m)
    r = ItemRanking.from_order(int(x) for x in order)
    draws = -np.sort(-rng.random((1000, m)), axis=1) + np.arange(m, 0, -1) * 1e-3
    weights = np.empty_like(draws)
    weights[:, order] = draws
    masks = np.arange(1 << m)
    incidence = ((masks[:, None] >> np.arange(m)) & 1).astype(float)
    u = incidence @ weights.T
    gap = 2 * u - weights.sum(axis=1)
    for t in range(1 << m):
        if necessarily_agreeable(r, t):
            assert gap[t].min() >= -1e-9
        else:
            assert separating_preference(r, t).compare(subsets.complement(t, m), t) > 0


@pytest.mark.parametrize("m", range(1, 9))
def test_worth_weakens_exhaustively(m):
    r = ItemRanking.identity(m)
    for t in range(1 << m):
        held = [necessarily_worth(r, t, k) for k in (2, 3, 4, 5)]
        assert held == sorted(held)
        for x in range(m):
            for k in (2, 3, 4):
                if held[k - 2]:
                    assert necessarily_worth(r, t | (1 << x), k)
