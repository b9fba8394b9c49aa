import math
import random

import pytest

from agreeable import subsets
from agreeable.agreeability import dominance_matching
from agreeable.brute import FAMILIES, min_agreeable, random_monotone, random_responsive, tight_instance
from agreeable.errors import InvalidArgument, NotResponsive, OracleViolation
from agreeable.oracle import PreferenceOracle
from agreeable.prefs import (Additive, CountOnly, Explicit, Guarantees, ItemRanking, LexCount, Pivot,
                             to_table)
from agreeable.three import run_three, select_three, three_bound


def test_bound():
    assert [three_bound(m) for m in range(1, 8)] == [2, 2, 3, 3, 4, 4, 5]


def _agreeable_to_all(players, t, m):
    rest = subsets.complement(t, m)
    return all(p.compare(t, rest) >= 0 for p in players)


def test_identical_lexcount_players():
    r = ItemRanking.identity(6)
    players = [LexCount(r)] * 3
    result = run_three(PreferenceOracle(players))
    assert result.subset.bit_count() <= 4
    assert _agreeable_to_all(players, result.subset, 6)
    tr = result.trace
    assert (tr.top_first, tr.top_second, tr.set_aside) == (0, 1, None)
    assert tr.pairs == [(2, 3), (4, 5)]


def test_odd_m_sets_item_zero_aside():
    players = [Additive((1, 5, 4, 3, 2))] * 3
    result = run_three(PreferenceOracle(players))
    assert result.trace.set_aside == 0
    assert result.subset & 1
    assert result.trace.top_first == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_tiny_instances(m):
    players = [LexCount(ItemRanking.identity(m))] * 3
    t = select_three(PreferenceOracle(players))
    assert t.bit_count() <= three_bound(m)
    assert _agreeable_to_all(players, t, m)


def _first_player_floor(r0, tr, m):
    # both tops, the aside item and the first player's worse member of every pair
    floor = subsets.from_items(x for x in (tr.top_first, tr.top_second, tr.set_aside)
                               if x is not None)
    floor |= subsets.from_items(worse for _, worse in tr.pairs)
    return floor.bit_count() <= three_bound(m) and dominance_matching(r0, floor)


def _check_run(players, m):
    oracle = PreferenceOracle(players, m)
    result = run_three(oracle)
    t, tr = result.subset, result.trace
    assert t.bit_count() <= three_bound(m)
    assert _agreeable_to_all(players, t, m)
    assert tr.iterations <= max(0, math.ceil(m / 2) - 1)
    assert tr.iterations == sum(tr.pair_states)
    covered = [x for pair in tr.pairs for x in pair]
    covered += [x for x in (tr.top_first, tr.top_second, tr.set_aside) if x is not None]
    assert sorted(covered) == list(range(m))
    for p in range(3):
        q = result.queries[p]
        assert q.singleton <= 4 * m * math.log2(m) if m > 1 else q.singleton == 0
        assert result.verification[p].subset + result.verification[p].singleton == 1
    assert result.queries[1].subset <= m
    everything = sum(q.total for q in result.queries) + sum(q.total for q in result.verification)
    if m > 1:
        assert everything <= 4 * m * math.log2(m) + m
    assert _first_player_floor(players[0].singles_ranking(), tr, m)
    assert result.queries[0].subset == 0
    assert result.queries[2].subset <= 1
    return result


@pytest.mark.parametrize("family", FAMILIES + (None,))
def test_random_families(family):
    rng = random.Random(str(family))
    for _ in range(150):
        m = rng.randint(1, 25)
        _check_run([random_responsive(m, rng, family) for _ in range(3)], m)


def test_responsive_tables():
    rng = random.Random(11)
    for _ in range(40):
        m = rng.randint(1, 8)
        players = [to_table(random_responsive(m, rng)) for _ in range(3)]
        _check_run(players, m)


def test_both_cases_occur():
    rng = random.Random(2)
    cases, sources, choices = set(), set(), set()
    for _ in range(400):
        m = rng.randint(4, 16)
        tr = _check_run([random_responsive(m, rng) for _ in range(3)], m).trace
        cases.add(tr.case)
        if tr.case == 2:
            sources.add(tr.half_source)
        choices.add(tr.third_choice)
    assert cases == {1, 2}
    assert sources == {"B", "D"}
    assert choices == {"E", "A-E"}


@pytest.mark.parametrize("m", range(4, 13, 2))
def test_count_only_profile_is_met_exactly(m):
    inst = tight_instance("thm52-case2", m, 3)
    t = select_three(PreferenceOracle(inst.players))
    assert t.bit_count() == three_bound(m) == min_agreeable(inst).min_size
    assert _agreeable_to_all(inst.players, t, m)


def test_refuses_undeclared_responsiveness():
    ident = ItemRanking.identity(3)
    ranks = list(to_table(LexCount(ident)).ranks)
    ranks[0b110], ranks[0b101] = ranks[0b101], ranks[0b110]
    players = [Explicit(tuple(ranks)), Pivot(0, ident), CountOnly(0b011, 3)]
    with pytest.raises(NotResponsive):
        run_three(PreferenceOracle(players))


def test_mislabeled_oracle_reports_violation():
    players = [random_monotone(6, 44 * 3 + i) for i in range(3)]
    oracle = PreferenceOracle(players, guarantees=[Guarantees(True, True)] * 3, record=True)
    with pytest.raises(OracleViolation) as info:
        run_three(oracle)
    details = info.value.details
    assert {"A", "B", "C", "D", "transcript"} <= set(details)
    assert details["transcript"]


def test_player_count_and_m_checks():
    two = [Additive((1, 2))] * 2
    with pytest.raises(InvalidArgument):
        run_three(PreferenceOracle(two))
    with pytest.raises(InvalidArgument):
        select_three(PreferenceOracle([Additive((1, 2))] * 3), m=3)
