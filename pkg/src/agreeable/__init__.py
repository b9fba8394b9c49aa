"""Small subsets of indivisible items that several players all find agreeable.

A subset is agreeable to a player who weakly prefers it to the items left
out. The package offers the ranking-level checks (necessarily / possibly
agreeable), a two-player selector that only needs single-item rankings, a
three-player selector driven by a preference oracle, and exhaustive
searches that reproduce the worst-case bounds on small instances.
"""

from agreeable.agreeability import (AgreeVerdict, agree_verdict, dominance_injection,
                                    dominance_matching, first_failing_prefix, is_agreeable,
                                    necessarily_agreeable, necessarily_worth,
                                    possibly_agreeable, separating_preference, welfare_ratio)
from agreeable.brute import (Instance, SearchResult, existence_bound, min_agreeable,
                             min_necessarily_agreeable, min_necessarily_worth, random_monotone,
                             tight_instance, verify_bound_thm52)
from agreeable.errors import (AgreeableError, InconsistentOracle, InstanceTooLarge,
                              InvalidArgument, NotResponsive, OracleViolation, TheoremViolation)
from agreeable.oracle import PreferenceOracle, QueryTally, singles_ranking
from agreeable.prefs import (Additive, CappedAdditive, CountOnly, Explicit, Guarantees,
                             ItemRanking, LexCount, Pivot, PreferenceSpec, compare_spec,
                             is_monotonic, is_responsive, lex_dominates, to_table)
from agreeable.three import SwapTrace, ThreeResult, run_three, select_three, three_bound
from agreeable.two import select_two, select_two_oracle, select_two_worth, two_bound, worth_bound

__version__ = "0.1.0"
