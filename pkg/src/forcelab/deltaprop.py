"""Pair-function witness checking and search over ensembles of sunflower families.

A pair table earns a witness on a family when two of its members admit the
three inclusion clauses across their symmetric difference. The strong form
additionally demands the canonical order bijection between the members to fix
their root and move every point weakly upward; the base form only constrains
the root's trace. A search routine builds tables realizing witnesses on every
family of an ensemble by monotone constraint propagation, with a pure
brute-force twin for small universes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .conditions import (
    FinSet,
    OrderIso,
    Pair,
    PairTable,
    canonical_order_iso,
    pair,
)
from .errors import PreconditionError


@dataclass(frozen=True)
class DeltaSystem:
    """A finite sunflower: all pairwise intersections equal one fixed root."""

    members: tuple[FinSet, ...]
    root: FinSet


def recognize_delta_system(family: Iterable[Iterable[int]]) -> Optional[DeltaSystem]:
    """Recognize a sunflower among distinct equal-size finite sets.

    Returns the system with its root when every pairwise intersection
    coincides, absent otherwise. Equal member sizes are part of the shape
    (the canonical order bijections need them).
    """
    members = tuple(frozenset(m) for m in family)
    if not members:
        raise PreconditionError("family must be nonempty")
    if len(set(members)) != len(members):
        raise PreconditionError("family members must be distinct")
    if len({len(m) for m in members}) != 1:
        return None
    root = frozenset.intersection(*members)
    for a, b in itertools.combinations(members, 2):
        if a & b != root:
            return None
    return DeltaSystem(members, root)


@dataclass
class WitnessReport:
    """Clause evaluation for one ordered member pair.

    failed_clauses lists (tau, xi, eta, clause) tuples; clause 1 failures put
    the missing point in the tau slot. An empty list certifies the pair.
    """

    a_index: Optional[int]
    b_index: Optional[int]
    e: Optional[OrderIso]
    failed_clauses: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed_clauses

    def to_json(self) -> dict:
        return {
            "a_index": self.a_index,
            "b_index": self.b_index,
            "failed_clauses": [
                {"witness": [t, x, y], "clause": c} for (t, x, y, c) in self.failed_clauses
            ],
            "ok": self.ok,
        }


def _clause_failures(
    f: PairTable, a: FinSet, b: FinSet, strong: bool
) -> list[tuple[int, int, int, int]]:
    failures = []
    root = a & b
    first_base = a if strong else root
    for xi in sorted(a - b):
        for eta in sorted(b - a):
            fxe = f.value(xi, eta)
            m = min(xi, eta)
            for w in sorted(w for w in first_base if w < m and w not in fxe):
                failures.append((w, xi, eta, 1))
            for tau in sorted(root):
                if tau < xi and not f.value(tau, eta) <= fxe:
                    failures.append((tau, xi, eta, 2))
                if tau < eta and not f.value(tau, xi) <= fxe:
                    failures.append((tau, xi, eta, 3))
    return failures


def check_strong_witness(f: PairTable, a: FinSet, b: FinSet, e: OrderIso) -> WitnessReport:
    """Evaluate the three strong clauses for the ordered pair (a, b).

    The bijection must be the canonical one, fix the root pointwise and move
    every point weakly upward; anything else is a contract violation.
    """
    a, b = frozenset(a), frozenset(b)
    if e.source != tuple(sorted(a)) or e.target != tuple(sorted(b)):
        raise PreconditionError("bijection endpoints must be the two member sets")
    if not e.identity_on_overlap:
        raise PreconditionError("bijection must fix the shared part pointwise")
    if not e.lower:
        raise PreconditionError("bijection must move every point weakly upward")
    return WitnessReport(None, None, e, _clause_failures(f, a, b, strong=True))


def check_bs_witness(f: PairTable, a: FinSet, b: FinSet) -> WitnessReport:
    """Evaluate the base clauses (root-trace first clause, no bijection)."""
    a, b = frozenset(a), frozenset(b)
    if a == b:
        raise PreconditionError("base witness check needs two distinct sets")
    return WitnessReport(None, None, None, _clause_failures(f, a, b, strong=False))


def _eligible_pairs(sys: DeltaSystem, mode: str) -> list[tuple[int, int, OrderIso]]:
    out = []
    n = len(sys.members)
    for ia in range(n):
        for ib in range(n):
            if ia == ib:
                continue
            a, b = sys.members[ia], sys.members[ib]
            e = canonical_order_iso(a, b)
            if mode == "strong" and not (e.identity_on_overlap and e.lower):
                continue
            out.append((ia, ib, e))
    return out


def family_has_witness(
    f: PairTable, sys: DeltaSystem, mode: str = "strong"
) -> Optional[WitnessReport]:
    """Scan ordered member pairs for a full witness.

    Pairs are scanned in lexicographic index order and the first complete
    witness is returned. When none is complete the best partial report (fewest
    failed clauses, earliest pair) comes back instead; absent means the family
    offers no candidate pair at all.
    """
    if mode not in ("strong", "bs"):
        raise PreconditionError(f"unknown witness mode {mode!r}")
    best: Optional[WitnessReport] = None
    for ia, ib, e in _eligible_pairs(sys, mode):
        a, b = sys.members[ia], sys.members[ib]
        rep = WitnessReport(ia, ib, e, _clause_failures(f, a, b, strong=mode == "strong"))
        if rep.ok:
            return rep
        if best is None or len(rep.failed_clauses) < len(best.failed_clauses):
            best = rep
    return best


@dataclass
class SearchResult:
    """Search outcome: found table, proven unsatisfiable, or budget exhausted."""

    status: str  # "found" | "unsat" | "exhausted"
    table: Optional[PairTable]
    nodes: int
    unsat_system: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _propagation_rules(sys: DeltaSystem, ia: int, ib: int) -> list[tuple[Pair, Pair]]:
    a, b = sys.members[ia], sys.members[ib]
    rules = []
    for xi in a - b:
        for eta in b - a:
            dst = pair(xi, eta)
            for tau in a & b:
                if tau < xi:
                    rules.append((pair(tau, eta), dst))
                if tau < eta:
                    rules.append((pair(tau, xi), dst))
    return rules


def _clause_one_seeds(sys: DeltaSystem, ia: int, ib: int, mode: str) -> dict[Pair, set[int]]:
    a, b = sys.members[ia], sys.members[ib]
    base = a if mode == "strong" else a & b
    seeds: dict[Pair, set[int]] = {}
    for xi in a - b:
        for eta in b - a:
            m = min(xi, eta)
            seeds.setdefault(pair(xi, eta), set()).update(w for w in base if w < m)
    return seeds


def _fixpoint(entries: dict[Pair, set[int]], rules: list[tuple[Pair, Pair]]) -> int:
    steps = 0
    changed = True
    while changed:
        changed = False
        steps += 1
        for src, dst in rules:
            have = entries.get(src)
            if not have:
                continue
            tgt = entries.setdefault(dst, set())
            if not have <= tgt:
                tgt |= have
                changed = True
    return steps


def search_pair_table(
    n: int,
    ensemble: list[DeltaSystem],
    mode: str = "strong",
    budget: int = 100_000,
) -> SearchResult:
    """Build a pair table giving every ensemble member a witness, if possible.

    Per family the search picks a candidate ordered pair, seeds the first
    clause's lower bounds, propagates the monotone inclusion clauses to a
    least fixed point and verifies. Pair choices are explored by backtracking
    in lexicographic order and each propagation-and-verify pass costs one node
    against the budget, so the returned table is the one reached by the first
    successful assignment under that deterministic schedule. Unsatisfiability
    is reported only after exhausting all assignments, and is distinguished
    from running out of budget.
    """
    if mode not in ("strong", "bs"):
        raise PreconditionError(f"unknown witness mode {mode!r}")
    for idx, sys in enumerate(ensemble):
        for m in sys.members:
            if m and (min(m) < 0 or max(m) >= n):
                raise PreconditionError(f"system {idx} leaves the universe")

    options: list[list[tuple[int, int, OrderIso]]] = []
    for idx, sys in enumerate(ensemble):
        pairs = _eligible_pairs(sys, mode)
        if not pairs:
            return SearchResult("unsat", None, 0, unsat_system=idx)
        options.append(pairs)

    nodes = 0
    for assignment in itertools.product(*options):
        nodes += 1
        if nodes > budget:
            return SearchResult("exhausted", None, nodes - 1)
        entries: dict[Pair, set[int]] = {}
        rules: list[tuple[Pair, Pair]] = []
        for sys, (ia, ib, _) in zip(ensemble, assignment):
            for key, val in _clause_one_seeds(sys, ia, ib, mode).items():
                entries.setdefault(key, set()).update(val)
            rules.extend(_propagation_rules(sys, ia, ib))
        nodes += _fixpoint(entries, rules)
        if nodes > budget:
            return SearchResult("exhausted", None, nodes)
        table = PairTable(n, {k: frozenset(v) for k, v in entries.items()})
        if all(
            (rep := family_has_witness(table, sys, mode)) is not None and rep.ok
            for sys in ensemble
        ):
            return SearchResult("found", table, nodes)
    return SearchResult("unsat", None, nodes)


def brute_force_search_pair_table(
    n: int, ensemble: list[DeltaSystem], mode: str = "strong", bound: int = 6
) -> Optional[PairTable]:
    """Exhaustive twin of the table search for tiny universes.

    Enumerates every admissible table by total size, smallest first, and
    returns the first one giving each family a witness; absent only after the
    whole space is exhausted. The space is two to the number of (pair, point)
    slots, so the universe is capped at `bound`.
    """
    if n > bound:
        raise PreconditionError(f"brute-force search is restricted to universes of size at most {bound}")
    slots: list[tuple[Pair, int]] = []
    for a, b in itertools.combinations(range(n), 2):
        slots.extend(((a, b), w) for w in range(a))  # a == min of the pair
    for k in range(len(slots) + 1):
        for combo in itertools.combinations(slots, k):
            entries: dict[Pair, set[int]] = {}
            for key, w in combo:
                entries.setdefault(key, set()).add(w)
            table = PairTable(n, {k2: frozenset(v) for k2, v in entries.items()})
            if all(
                (rep := family_has_witness(table, sys, mode)) is not None and rep.ok
                for sys in ensemble
            ):
                return table
    return None
