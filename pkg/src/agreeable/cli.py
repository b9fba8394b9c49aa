"""``agree`` command line: solve, check and brute-force instance files.

Results go to stdout as sorted-key JSON. Exit codes: 0 ok, 1 a check
failed, 2 the input could not be parsed, 3 a precondition or size guard
was violated, 4 an oracle contradicted its declared responsiveness.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from agreeable import subsets
from agreeable.agreeability import agree_verdict, is_agreeable, necessarily_agreeable, necessarily_worth
from agreeable.brute import (KINDS, Instance, existence_bound, min_agreeable,
                             min_necessarily_agreeable, min_necessarily_worth, tight_instance,
                             verify_bound_thm52)
from agreeable.errors import (AgreeableError, InconsistentOracle, InstanceTooLarge, InvalidArgument,
                              NotResponsive, OracleViolation, TheoremViolation)
from agreeable.instance_file import ParseError, dump_instance, load_instance
from agreeable.oracle import PreferenceOracle, QueryTally, since
from agreeable.three import run_three, three_bound
from agreeable.two import select_two_oracle, two_bound, worth_bound

EXIT_OK, EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PRECONDITION, EXIT_ORACLE = 0, 1, 2, 3, 4


class Precondition(AgreeableError):
    pass


def _emit(doc: Dict[str, Any]) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _names(instance: Instance, mask: int) -> List[str]:
    return [instance.labels[i] for i in subsets.to_items(mask)]


def _transcript(instance: Instance, oracle: PreferenceOracle) -> List[Dict[str, Any]]:
    return [{"player": p + 1, "a": _names(instance, a), "b": _names(instance, b), "answer": r}
            for p, a, b, r in oracle.transcript]


def _require_responsive(oracle: PreferenceOracle):
    for p, g in enumerate(oracle.guarantees):
        if not g.responsive:
            raise Precondition(f"player {p + 1} is not responsive")


def _tallies(tallies) -> List[Dict[str, int]]:
    return [dict(player=i + 1, **t.as_dict()) for i, t in enumerate(tallies)]


def _solve_two(instance: Instance, trace: bool) -> Dict[str, Any]:
    players = list(instance.players)
    if len(players) == 1:
        players = players * 2
    oracle = PreferenceOracle(players, instance.m, record=trace)
    _require_responsive(oracle)
    start = oracle.snapshot()
    mask, rankings = select_two_oracle(oracle)
    mid = oracle.snapshot()
    verdicts = []
    for p in range(instance.n):
        ok = is_agreeable(oracle, p, mask)
        if not ok:
            raise OracleViolation(f"player {p + 1} rejects a necessarily agreeable set")
        verdicts.append({"player": p + 1, "agreeable": ok,
                         "necessary": necessarily_agreeable(rankings[p], mask)})
    doc = {"algo": "two", "subset": _names(instance, mask), "size": mask.bit_count(),
           "bound": two_bound(instance.m), "verdicts": verdicts,
           "queries": _tallies(since(start, mid)[:instance.n]),
           "verification_queries": _tallies(since(mid, oracle.snapshot())[:instance.n])}
    if trace:
        doc["trace"] = {"rankings": [r.describe(instance.labels) for r in rankings[:instance.n]],
                        "transcript": _transcript(instance, oracle)}
    return doc


def _solve_three(instance: Instance, trace: bool) -> Dict[str, Any]:
    oracle = PreferenceOracle(instance.players, instance.m, record=trace)
    try:
        result = run_three(oracle)
    except NotResponsive as exc:
        raise Precondition(str(exc)) from None
    doc = {"algo": "three", "subset": _names(instance, result.subset),
           "size": result.subset.bit_count(), "bound": three_bound(instance.m),
           "verdicts": [{"player": p + 1, "agreeable": True} for p in range(3)],
           "queries": _tallies(result.queries),
           "verification_queries": _tallies(result.verification)}
    if trace:
        doc["trace"] = dict(result.trace.as_dict(instance.labels),
                            transcript=_transcript(instance, oracle))
    return doc


def cmd_solve(args) -> int:
    instance = load_instance(args.file)
    n = instance.n
    if n == 0:
        raise Precondition("instance has no players")
    algo = args.algo
    if algo == "auto":
        if n <= 2:
            algo = "two"
        elif n == 3:
            algo = "three"
        elif args.fallback_all:
            algo = "all"
        else:
            raise Precondition(
                f"no efficient selector for {n} players (open problem beyond three); "
                "use --fallback-all to return every item")
    if algo == "two":
        if args.algo == "two" and n != 2:
            raise Precondition(f"--algo two needs exactly 2 players, got {n}")
        doc = _solve_two(instance, args.trace)
    elif algo == "three":
        if n != 3:
            raise Precondition(f"--algo three needs exactly 3 players, got {n}")
        doc = _solve_three(instance, args.trace)
    else:
        full = subsets.full(instance.m)
        oracle = PreferenceOracle(instance.players, instance.m)
        doc = {"algo": "all", "subset": list(instance.labels), "size": instance.m,
               "bound": instance.m,
               "verdicts": [{"player": p + 1, "agreeable": is_agreeable(oracle, p, full)}
                            for p in range(n)],
               "queries": _tallies([QueryTally() for _ in range(n)]),
               "verification_queries": _tallies(oracle.snapshot())}
    doc.update(m=instance.m, n=n)
    _emit(doc)
    return EXIT_OK


def _parse_subset(instance: Instance, text: str) -> int:
    index = {lab: i for i, lab in enumerate(instance.labels)}
    mask = 0
    for raw in text.split(","):
        label = raw.strip()
        if not label:
            continue
        if label not in index:
            raise ParseError(f"unknown item label {label!r}")
        mask |= 1 << index[label]
    return mask


def cmd_check(args) -> int:
    instance = load_instance(args.file)
    mask = _parse_subset(instance, args.subset)
    mode = args.mode
    if mode == "worth-k" and args.k < 2:
        raise Precondition("--k must be at least 2")
    verdicts = []
    oracle = PreferenceOracle(instance.players, instance.m)
    for p, spec in enumerate(instance.players):
        entry: Dict[str, Any] = {"player": p + 1}
        if mode == "agreeable":
            entry["pass"] = entry["agreeable"] = is_agreeable(oracle, p, mask)
        else:
            ranking = spec.singles_ranking()
            v = agree_verdict(ranking, mask)
            entry.update(necessary=v.necessary, possible=v.possible, witness_k=v.witness_k,
                         semantics=v.semantics)
            if mode == "necessary":
                entry["pass"] = v.necessary
            elif mode == "possible":
                entry["pass"] = v.possible
            else:
                entry["worth"] = entry["pass"] = necessarily_worth(ranking, mask, args.k)
        verdicts.append(entry)
    passed = all(v["pass"] for v in verdicts)
    doc = {"mode": mode, "subset": _names(instance, mask), "size": mask.bit_count(),
           "verdicts": verdicts, "pass": passed, "m": instance.m, "n": instance.n}
    if mode == "worth-k":
        doc["k"] = args.k
    _emit(doc)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_brute_min(args) -> int:
    instance = load_instance(args.file)
    m, n = instance.m, instance.n
    if args.target == "agreeable":
        result, bound = min_agreeable(instance), existence_bound(m, n)
    elif args.target == "necessary":
        result = min_necessarily_agreeable(instance.rankings(), m)
        bound = two_bound(m) if n <= 2 else None
    else:
        if args.k < 2:
            raise Precondition("--k must be at least 2")
        result = min_necessarily_worth(instance.rankings(), m, args.k)
        bound = worth_bound(m, args.k) if n <= 2 else None
    doc = {"target": args.target, "min_size": result.min_size,
           "witness": _names(instance, result.witness),
           "subsets_examined": result.subsets_examined, "bound": bound,
           "within_bound": None if bound is None else result.min_size <= bound,
           "m": m, "n": n}
    if args.target == "worth-k":
        doc["k"] = args.k
    _emit(doc)
    return EXIT_OK


def cmd_brute_tight(args) -> int:
    instance = tight_instance(args.kind, args.m, args.n, args.k)
    doc = dump_instance(instance)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    else:
        _emit(doc)
    return EXIT_OK


def cmd_brute_verify(args) -> int:
    try:
        report = verify_bound_thm52(args.m, args.n, args.trials, args.seed)
    except TheoremViolation as exc:
        _emit({"error": str(exc), "violation": True})
        return EXIT_CHECK_FAILED
    doc = report.as_dict()
    doc["histogram"] = {str(k): v for k, v in doc["histogram"].items()}
    _emit(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="select a small agreeable subset")
    solve.add_argument("file")
    solve.add_argument("--algo", choices=("two", "three", "auto"), default="auto")
    solve.add_argument("--trace", action="store_true", help="include swap trace and query transcript")
    solve.add_argument("--fallback-all", action="store_true",
                       help="with four or more players, return every item")
    solve.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="check a subset against every player")
    check.add_argument("file")
    check.add_argument("--subset", required=True, help="comma-separated item labels")
    check.add_argument("--mode", choices=("agreeable", "necessary", "possible", "worth-k"),
                       default="agreeable")
    check.add_argument("--k", type=int, default=2)
    check.set_defaults(func=cmd_check)

    brute = sub.add_parser("brute", help="exhaustive searches and tight instances")
    bsub = brute.add_subparsers(dest="brute_command", required=True)
    bmin = bsub.add_parser("min", help="smallest qualifying subset")
    bmin.add_argument("file")
    bmin.add_argument("--target", choices=("agreeable", "necessary", "worth-k"), default="agreeable")
    bmin.add_argument("--k", type=int, default=2)
    bmin.set_defaults(func=cmd_brute_min)

    tight = bsub.add_parser("tight", help="emit a worst-case instance file")
    tight.add_argument("--kind", choices=KINDS, required=True)
    tight.add_argument("--m", type=int, default=6)
    tight.add_argument("--n", type=int)
    tight.add_argument("--k", type=int)
    tight.add_argument("--out")
    tight.set_defaults(func=cmd_brute_tight)

    verify = bsub.add_parser("verify-bound", help="random monotone profiles against the existence bound")
    verify.add_argument("--m", type=int, required=True)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=cmd_brute_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
    except (Precondition, InvalidArgument, InstanceTooLarge, NotResponsive) as exc:
        code, msg = EXIT_PRECONDITION, f"precondition: {exc}"
    except (OracleViolation, InconsistentOracle) as exc:
        code, msg = EXIT_ORACLE, f"oracle violation: {exc}"
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
