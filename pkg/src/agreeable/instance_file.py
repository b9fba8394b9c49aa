"""JSON instance files.

An instance file looks like::

    {
      "m": 3,
      "items": ["a", "b", "c"],
      "players": [
        {"type": "lex-count", "order": ["a", "b", "c"], "direction": "forward"},
        {"type": "pivot", "pivot": "b", "order": ["b", "a", "c"]},
        {"type": "count-only", "support": ["b", "c"]},
        {"type": "additive", "weights": [3, 2, 1]},
        {"type": "capped-additive", "weights": [3, 2, 1], "cap": 4},
        {"type": "explicit", "table": [0, 1, 1, 2, 1, 2, 2, 3], "responsive": true}
      ]
    }

``items`` is optional and defaults to ``x1..xm``. An ``order`` entry is
either a label or a list of labels forming one tie group. ``table`` holds
one rank per bitmask, higher meaning better.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from agreeable import subsets
from agreeable.brute import Instance, default_labels
from agreeable.errors import AgreeableError
from agreeable.prefs import (Additive, CappedAdditive, CountOnly, Explicit, ItemRanking, LexCount,
                             Pivot, PreferenceSpec, is_responsive)


class ParseError(AgreeableError):
    """The instance document is malformed or inconsistent."""


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return value


class _Labels:
    def __init__(self, labels: Sequence[str]):
        self.labels = list(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    def item(self, label, where) -> int:
        try:
            return self.index[label]
        except (KeyError, TypeError):
            raise ParseError(f"{where}: unknown item {label!r}") from None

    def order(self, raw, where) -> ItemRanking:
        if not isinstance(raw, list):
            raise ParseError(f"{where}: order must be an array")
        groups = [[self.item(x, where) for x in (g if isinstance(g, list) else [g])] for g in raw]
        try:
            return ItemRanking.from_groups(groups)
        except AgreeableError as exc:
            raise ParseError(f"{where}: {exc}") from None


def parse_spec(raw: Dict[str, Any], labels: Sequence[str], where: str = "player") -> PreferenceSpec:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object")
    lab = _Labels(labels)
    m = len(labels)
    kind = raw.get("type")
    try:
        if kind == "lex-count":
            direction = raw.get("direction", "forward")
            if direction not in ("forward", "reverse"):
                raise ParseError(f"{where}: direction must be forward or reverse")
            return LexCount(lab.order(raw.get("order", labels), where), direction == "reverse")
        if kind == "pivot":
            return Pivot(lab.item(raw.get("pivot"), where), lab.order(raw.get("order", labels), where))
        if kind == "count-only":
            support = raw.get("support")
            if not isinstance(support, list):
                raise ParseError(f"{where}: support must be an array of labels")
            return CountOnly(subsets.from_items(lab.item(x, where) for x in support), m)
        if kind in ("additive", "capped-additive"):
            weights = raw.get("weights")
            if not isinstance(weights, list) or len(weights) != m:
                raise ParseError(f"{where}: weights must be an array of {m} numbers")
            weights = [_number(w, where) for w in weights]
            if kind == "additive":
                return Additive(tuple(weights))
            return CappedAdditive(tuple(weights), _number(raw.get("cap"), where))
        if kind == "explicit":
            table = raw.get("table")
            if not isinstance(table, list) or len(table) != 1 << m:
                raise ParseError(f"{where}: table must hold 2^{m} ranks")
            if not all(isinstance(r, int) and not isinstance(r, bool) for r in table):
                raise ParseError(f"{where}: table ranks must be integers")
            spec = Explicit(tuple(table))
            if raw.get("responsive") and not is_responsive(spec):
                raise ParseError(f"{where}: table is claimed responsive but is not")
            return spec
    except ParseError:
        raise
    except AgreeableError as exc:
        raise ParseError(f"{where}: {exc}") from None
    raise ParseError(f"{where}: unknown preference type {kind!r}")


def parse_instance(doc: Dict[str, Any], label: str = "") -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    m = doc.get("m")
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ParseError("m must be a positive integer")
    labels = doc.get("items") or list(default_labels(m))
    if not isinstance(labels, list) or len(labels) != m or len(set(labels)) != m \
            or not all(isinstance(x, str) for x in labels):
        raise ParseError(f"items must be {m} unique strings")
    players = doc.get("players")
    if not isinstance(players, list):
        raise ParseError("players must be an array")
    specs = [parse_spec(p, labels, f"player {i + 1}") for i, p in enumerate(players)]
    try:
        return Instance(m, specs, doc.get("label") or label, tuple(labels))
    except AgreeableError as exc:
        raise ParseError(str(exc)) from None


def load_instance(path: Union[str, Path]) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return parse_instance(doc, Path(path).stem)


def _order_doc(ranking: ItemRanking, labels: Sequence[str]) -> List:
    return [labels[g[0]] if len(g) == 1 else [labels[i] for i in g] for g in ranking.groups]


def dump_spec(spec: PreferenceSpec, labels: Sequence[str]) -> Dict[str, Any]:
    if isinstance(spec, LexCount):
        return {"type": "lex-count", "order": _order_doc(spec.order, labels),
                "direction": "reverse" if spec.reverse else "forward"}
    if isinstance(spec, Pivot):
        return {"type": "pivot", "pivot": labels[spec.pivot], "order": _order_doc(spec.order, labels)}
    if isinstance(spec, CountOnly):
        return {"type": "count-only", "support": [labels[i] for i in subsets.to_items(spec.support)]}
    if isinstance(spec, CappedAdditive):
        return {"type": "capped-additive", "weights": [_plain(w) for w in spec.weights],
                "cap": _plain(spec.cap)}
    if isinstance(spec, Additive):
        return {"type": "additive", "weights": [_plain(w) for w in spec.weights]}
    if isinstance(spec, Explicit):
        return {"type": "explicit", "table": list(spec.ranks)}
    raise TypeError(f"cannot serialize {type(spec).__name__}")


def _plain(x):
    if isinstance(x, (int, float)):
        return x
    return int(x) if x == int(x) else float(x)


def dump_instance(instance: Instance) -> Dict[str, Any]:
    doc = {"m": instance.m, "items": list(instance.labels),
           "players": [dump_spec(p, instance.labels) for p in instance.players]}
    if instance.label:
        doc["label"] = instance.label
    return doc
