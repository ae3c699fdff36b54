"""Canonical JSON document schemas for every file the CLI reads or writes.

Documents are UTF-8 JSON with lexicographically sorted keys, two-space
indentation and a trailing newline; values are integers, integer arrays,
strings, booleans and nulls only. Map keys for ordinals are decimal strings.
Parsing is strict: wrong types, duplicate or unsorted set elements, and
unknown keys are all rejected with the offending field named.
"""

from __future__ import annotations

import json
from typing import Any

from .conditions import Condition, FinSet, Pair, PairTable
from .sideforce import PCondition, RankedFamily
from .spacelab import SeparatedSequence


class SchemaError(ValueError):
    """Malformed document; the message names the offending field."""


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None


def _expect_object(doc: Any, keys: set[str], where: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    extra = set(doc) - keys
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")
    missing = keys - set(doc)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")
    return doc


def _int(value: Any, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{where}: expected an integer")
    return value


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array of integers")
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _ordinal_set(value: Any, where: str) -> FinSet:
    vals = _int_list(value, where)
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise SchemaError(f"{where}: elements must be strictly ascending")
    return frozenset(vals)


def _pair_entries(value: Any, where: str) -> dict[Pair, FinSet]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array of pair entries")
    out: dict[Pair, FinSet] = {}
    for idx, entry in enumerate(value):
        spot = f"{where}[{idx}]"
        entry = _expect_object(entry, {"pair", "value"}, spot)
        pr = _int_list(entry["pair"], f"{spot}.pair")
        if len(pr) != 2 or pr[0] >= pr[1]:
            raise SchemaError(f"{spot}.pair: expected two ascending integers")
        key = (pr[0], pr[1])
        if key in out:
            raise SchemaError(f"{spot}.pair: duplicate pair {key}")
        out[key] = _ordinal_set(entry["value"], f"{spot}.value")
    return out


def _pair_entries_doc(entries: dict[Pair, FinSet]) -> list[dict]:
    return [
        {"pair": [a, b], "value": sorted(v)}
        for (a, b), v in sorted(entries.items())
        if v
    ]


# -- condition ---------------------------------------------------------------

def parse_condition(doc: Any) -> Condition:
    doc = _expect_object(doc, {"universe", "D", "h", "i"}, "condition")
    universe = _int(doc["universe"], "condition.universe")
    d = _ordinal_set(doc["D"], "condition.D")
    if not isinstance(doc["h"], dict):
        raise SchemaError("condition.h: expected an object keyed by ordinals")
    h: dict[int, FinSet] = {}
    for key, val in doc["h"].items():
        if not key.isdigit():
            raise SchemaError(f"condition.h: key {key!r} is not a decimal ordinal")
        h[int(key)] = _ordinal_set(val, f"condition.h[{key}]")
    i = _pair_entries(doc["i"], "condition.i")
    return Condition(universe, d, h, i)


def condition_doc(p: Condition) -> dict:
    return {
        "universe": p.universe,
        "D": sorted(p.D),
        "h": {str(x): sorted(v) for x, v in p.h.items()},
        "i": _pair_entries_doc(p.i),
    }


# -- pair table --------------------------------------------------------------

def parse_pair_table(doc: Any) -> PairTable:
    doc = _expect_object(doc, {"universe", "entries"}, "pair-table")
    universe = _int(doc["universe"], "pair-table.universe")
    table = PairTable(universe, _pair_entries(doc["entries"], "pair-table.entries"))
    bad = table.violations()
    if bad:
        v = bad[0]
        raise SchemaError(f"pair-table: {v.clause} at {list(v.witness)}")
    return table


def pair_table_doc(t: PairTable) -> dict:
    return {"universe": t.universe, "entries": _pair_entries_doc(t.entries)}


# -- ranked family -----------------------------------------------------------

def parse_family(doc: Any) -> RankedFamily:
    doc = _expect_object(doc, {"universe", "members"}, "family")
    universe = _int(doc["universe"], "family.universe")
    if not isinstance(doc["members"], list):
        raise SchemaError("family.members: expected an array")
    members = []
    ranks = []
    for idx, entry in enumerate(doc["members"]):
        spot = f"family.members[{idx}]"
        entry = _expect_object(entry, {"set", "rank"}, spot)
        members.append(_ordinal_set(entry["set"], f"{spot}.set"))
        ranks.append(_int(entry["rank"], f"{spot}.rank"))
    return RankedFamily(universe, tuple(members), tuple(ranks))


def family_doc(fam: RankedFamily) -> dict:
    return {
        "universe": fam.universe,
        "members": [
            {"set": sorted(m), "rank": r} for m, r in zip(fam.members, fam.ranks)
        ],
    }


# -- side conditions ---------------------------------------------------------

def parse_p_condition(doc: Any, fam: RankedFamily) -> PCondition:
    doc = _expect_object(doc, {"a", "f", "A"}, "p-condition")
    a = _ordinal_set(doc["a"], "p-condition.a")
    f = _pair_entries(doc["f"], "p-condition.f")
    indices = _int_list(doc["A"], "p-condition.A")
    attached = []
    for idx in indices:
        if not 0 <= idx < len(fam.members):
            raise SchemaError(f"p-condition.A: index {idx} outside the family")
        attached.append(fam.members[idx])
    return PCondition(a, f, frozenset(attached))


def p_condition_doc(p: PCondition, fam: RankedFamily) -> dict:
    indices = []
    for x in p.A:
        try:
            indices.append(fam.members.index(x))
        except ValueError:
            raise SchemaError(f"attached set {sorted(x)} is not a family member") from None
    return {"a": sorted(p.a), "f": _pair_entries_doc(p.f), "A": sorted(indices)}


# -- chains ------------------------------------------------------------------

def parse_chain(doc: Any) -> list[Condition]:
    doc = _expect_object(doc, {"conditions"}, "chain")
    if not isinstance(doc["conditions"], list) or not doc["conditions"]:
        raise SchemaError("chain.conditions: expected a nonempty array")
    out = [parse_condition(entry) for entry in doc["conditions"]]
    if len({p.universe for p in out}) != 1:
        raise SchemaError("chain.conditions: universes disagree")
    return out


def chain_doc(chain: list[Condition]) -> dict:
    return {"conditions": [condition_doc(p) for p in chain]}


def parse_p_chain(doc: Any, fam: RankedFamily) -> list[PCondition]:
    doc = _expect_object(doc, {"conditions"}, "chain")
    if not isinstance(doc["conditions"], list) or not doc["conditions"]:
        raise SchemaError("chain.conditions: expected a nonempty array")
    return [parse_p_condition(entry, fam) for entry in doc["conditions"]]


def p_chain_doc(chain: list[PCondition], fam: RankedFamily) -> dict:
    return {"conditions": [p_condition_doc(p, fam) for p in chain]}


# -- ensembles and sequences -------------------------------------------------

def parse_ensemble(doc: Any) -> list[list[FinSet]]:
    doc = _expect_object(doc, {"systems"}, "ensemble")
    if not isinstance(doc["systems"], list) or not doc["systems"]:
        raise SchemaError("ensemble.systems: expected a nonempty array")
    out = []
    for i, system in enumerate(doc["systems"]):
        if not isinstance(system, list) or not system:
            raise SchemaError(f"ensemble.systems[{i}]: expected a nonempty array of sets")
        out.append(
            [_ordinal_set(m, f"ensemble.systems[{i}][{j}]") for j, m in enumerate(system)]
        )
    return out


def ensemble_doc(systems: list[list[FinSet]]) -> dict:
    return {"systems": [[sorted(m) for m in system] for system in systems]}


def parse_sequence(doc: Any) -> SeparatedSequence:
    doc = _expect_object(doc, {"tuples", "guards"}, "sequence")
    if not isinstance(doc["tuples"], list) or not isinstance(doc["guards"], list):
        raise SchemaError("sequence: tuples and guards must be arrays")
    points = tuple(
        tuple(_int_list(t, f"sequence.tuples[{i}]")) for i, t in enumerate(doc["tuples"])
    )
    guards = []
    for i, per_point in enumerate(doc["guards"]):
        if not isinstance(per_point, list):
            raise SchemaError(f"sequence.guards[{i}]: expected an array")
        guards.append(
            tuple(
                _ordinal_set(g, f"sequence.guards[{i}][{j}]")
                for j, g in enumerate(per_point)
            )
        )
    if len(points) != len(guards):
        raise SchemaError("sequence: one guard tuple per point tuple")
    return SeparatedSequence(points, tuple(guards))


def sequence_doc(seq: SeparatedSequence) -> dict:
    return {
        "tuples": [list(t) for t in seq.points],
        "guards": [[sorted(g) for g in gs] for gs in seq.guards],
    }


# -- cut specification for the cut-based amalgamation ------------------------

def parse_cutspec(doc: Any, fam: RankedFamily) -> dict:
    doc = _expect_object(doc, {"x0", "a", "b", "z"}, "cutspec")
    idx = _int(doc["x0"], "cutspec.x0")
    if not 0 <= idx < len(fam.members):
        raise SchemaError(f"cutspec.x0: index {idx} outside the family")
    return {
        "x0": fam.members[idx],
        "delta": fam.ranks[idx],
        "a": _ordinal_set(doc["a"], "cutspec.a"),
        "b": _ordinal_set(doc["b"], "cutspec.b"),
        "z": _ordinal_set(doc["z"], "cutspec.z"),
    }
