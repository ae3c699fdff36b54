"""Side-condition forcing over a rank-annotated family of sets.

Conditions here carry a finite point set, a pair function on it, and a finite
batch of family members acting as ceilings: every pair value must sit inside
each attached member containing the pair, and below the pair minimum. The
module provides validation, supports, isomorphism, two amalgamations (the
plain isomorphic one and the cut-based one that realizes the strong witness
clauses), restriction to a cut, and extraction of the accumulated pair table
from a descending chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .conditions import (
    EMPTY,
    FinSet,
    OrderIso,
    Pair,
    PairTable,
    ValidationReport,
    all_pairs,
    canonical_order_iso,
    pair,
)
from .errors import PreconditionError, PropertyFault


@dataclass(frozen=True)
class RankedFamily:
    """Finite family of point sets with a well-founded rank annotation.

    Invariants (checked by `validate_ranked_family`): a strict subset has a
    strictly smaller rank, and whenever a point lies in two members the
    lower-ranked member's trace below that point embeds in the other's.
    """

    universe: int
    members: tuple[FinSet, ...]
    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(frozenset(m) for m in self.members))
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        if len(self.members) != len(self.ranks):
            raise PreconditionError("one rank per member")

    def rank_of(self, member: FinSet) -> int:
        try:
            return self.ranks[self.members.index(frozenset(member))]
        except ValueError:
            raise PreconditionError(f"{sorted(member)} is not a family member") from None


def validate_ranked_family(fam: RankedFamily) -> ValidationReport:
    """Report every violation of the two family invariants, with witnesses."""
    rep = ValidationReport()
    seen: dict[FinSet, int] = {}
    for idx, m in enumerate(fam.members):
        if m in seen:
            rep.add("duplicate-member", seen[m], idx)
        seen.setdefault(m, idx)
        for w in sorted(m):
            if not 0 <= w < fam.universe:
                rep.add("member-range", idx, w)
        if fam.ranks[idx] < 0:
            rep.add("rank-negative", idx)
    for ix, x in enumerate(fam.members):
        for iy, y in enumerate(fam.members):
            if ix == iy:
                continue
            if x < y and fam.ranks[ix] >= fam.ranks[iy]:
                rep.add("well-founded", ix, iy)
            if fam.ranks[ix] <= fam.ranks[iy]:
                for alpha in sorted(x & y):
                    if not {w for w in x if w < alpha} <= {w for w in y if w < alpha}:
                        rep.add("rank-trace", ix, iy, alpha)
                        break
    return rep


@dataclass(frozen=True)
class PCondition:
    """A side-condition forcing condition (a, f, A).

    `f` is total on pairs from `a` with absent pairs meaning empty; empty
    values are normalized away so equality is representation-independent.
    """

    a: FinSet
    f: dict[Pair, FinSet]
    A: frozenset[FinSet]

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        norm = {}
        for key, val in self.f.items():
            val = frozenset(val)
            if val:
                norm[pair(*key)] = val
        object.__setattr__(self, "f", norm)
        object.__setattr__(self, "A", frozenset(frozenset(x) for x in self.A))

    def f_value(self, alpha: int, beta: int) -> FinSet:
        return self.f.get(pair(alpha, beta), EMPTY)


def supp(p: PCondition) -> FinSet:
    """The support: points, pair values, and attached members, all unioned."""
    out = set(p.a)
    for val in p.f.values():
        out |= val
    for x in p.A:
        out |= x
    return frozenset(out)


def validate_p_condition(p: PCondition, fam: RankedFamily) -> ValidationReport:
    """Check the defining clauses of a side condition against its family.

    An empty intersection of attached members leaves only the minimum bound
    in force.
    """
    rep = ValidationReport()
    for w in sorted(p.a):
        if not 0 <= w < fam.universe:
            rep.add("a-range", w)
    members = set(fam.members)
    for idx, x in enumerate(sorted(p.A, key=sorted)):
        if x not in members:
            rep.add("A-not-in-family", idx)
    for key in sorted(p.f):
        if not set(key) <= p.a:
            rep.add("f-domain", *key)
    for alpha, beta in all_pairs(p.a):
        val = p.f_value(alpha, beta)
        for w in sorted(val):
            if w >= alpha:  # alpha == min of the pair
                rep.add("min-bound", alpha, beta, w)
        for ix, x in enumerate(fam.members):
            if x in p.A and alpha in x and beta in x:
                for w in sorted(val - x):
                    rep.add("side-condition", alpha, beta, w, ix)
    return rep


def p_extends(p: PCondition, q: PCondition) -> bool:
    """Inverse-inclusion order, componentwise; pair values never get rewritten."""
    if not (q.a <= p.a and q.A <= p.A):
        return False
    return all(p.f_value(*pr) == q.f_value(*pr) for pr in all_pairs(q.a))


def p_isomorphic(p: PCondition, q: PCondition) -> Optional[OrderIso]:
    """The support bijection witnessing isomorphism, when there is one.

    Present when the unique order bijection between the supports fixes their
    intersection pointwise, carries points to points and attached members to
    attached members, and transports every pair value exactly.
    """
    sp, sq = supp(p), supp(q)
    if len(sp) != len(sq):
        return None
    pi = canonical_order_iso(sp, sq)
    if not pi.identity_on_overlap:
        return None
    if pi.image(p.a) != q.a:
        return None
    if {pi.image(x) for x in p.A} != set(q.A):
        return None
    for alpha, beta in all_pairs(p.a):
        if q.f_value(pi.apply(alpha), pi.apply(beta)) != pi.image(p.f_value(alpha, beta)):
            return None
    return pi


def amalgamate_p_isomorphic(p: PCondition, q: PCondition, pi: OrderIso) -> PCondition:
    """Merge an isomorphic pair into their componentwise union.

    Cross pairs get empty values. Pair values on the shared part must already
    agree; a disagreement there cannot arise from well-matched inputs and is
    surfaced as an internal fault.
    """
    found = p_isomorphic(p, q)
    if found is None or found != pi:
        raise PreconditionError("conditions are not isomorphic via the given bijection")
    merged: dict[Pair, FinSet] = {}
    for pr in all_pairs(p.a):
        merged[pr] = p.f_value(*pr)
    for pr in all_pairs(q.a):
        val = q.f_value(*pr)
        if pr in merged and merged[pr] != val:
            raise PropertyFault(f"pair values disagree on shared pair {pr}")
        merged[pr] = val
    return PCondition(p.a | q.a, merged, p.A | q.A)


def restrict_p(q: PCondition, cut: FinSet) -> PCondition:
    """Trace of a condition on a cut set.

    Keeps the points and pair values inside the cut and the attached members
    that are proper subsets of it; the original condition extends the result.
    """
    cut = frozenset(cut)
    a = q.a & cut
    f = {pr: val for pr, val in q.f.items() if set(pr) <= cut}
    ceilings = frozenset(x for x in q.A if x <= cut and x != cut)
    return PCondition(a, f, ceilings)


@dataclass(frozen=True)
class StrongDeltaAmalgamInput:
    """Inputs for the cut-based amalgamation.

    `q` reaches above the cut `x0` (a family member of rank `delta`) while
    `s` refines q's trace inside the cut and lives entirely inside it;
    `z` shields the traces of q's lower-ranked members. The tuples `a` (in s)
    and `b` (in q) agree inside the cut and are positioned so their symmetric
    difference meets only genuinely new points of either side.
    """

    q: PCondition
    s: PCondition
    a: FinSet
    b: FinSet
    x0: FinSet
    delta: int
    z: FinSet

    def __post_init__(self):
        for name in ("a", "b", "x0", "z"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))


def strong_delta_input_violations(inp: StrongDeltaAmalgamInput, fam: RankedFamily) -> list[str]:
    """Names of every violated entry clause, empty when the input is usable."""
    out = []
    q, s = inp.q, inp.s
    if inp.x0 not in q.A:
        out.append("cut-not-attached")
    if inp.x0 in set(fam.members):
        if fam.rank_of(inp.x0) != inp.delta:
            out.append("delta-mismatch")
    else:
        out.append("cut-not-in-family")
    if not p_extends(s, restrict_p(q, inp.x0)):
        out.append("s-not-refining-the-trace")
    if not supp(s) <= inp.x0:
        out.append("s-support-outside-cut")
    shield_floor = set()
    for x in q.A:
        if x in set(fam.members) and fam.rank_of(x) < inp.delta:
            shield_floor |= x & inp.x0
    if not shield_floor <= inp.z:
        out.append("shield-too-small")
    if (s.a - (q.a & inp.x0)) & inp.z:
        out.append("s-fresh-part-meets-shield")
    if not inp.a <= s.a:
        out.append("tuple-a-not-in-s")
    if not inp.b <= q.a:
        out.append("tuple-b-not-in-q")
    if not inp.a - (inp.b & inp.x0) <= inp.x0 - inp.z:
        out.append("tuple-a-meets-shield")
    if not (inp.a & q.a <= inp.b and inp.b & s.a <= inp.a):
        out.append("tuple-positioning")
    if inp.a != inp.b and not inp.b - inp.x0:
        out.append("tuple-b-inside-cut")
    return out


def amalgamate_p_strong_delta(inp: StrongDeltaAmalgamInput, fam: RankedFamily) -> PCondition:
    """Merge q with its in-cut refinement s, filling cross pairs by formula.

    For a cross pair (xi in s only, eta in q only) the filled value is
    [A | B | C] & D where A collects the tuple points below the pair minimum,
    B and C pull in the already-decided pair values at shared tuple points
    below the opposite endpoint, and D cuts to the pair minimum and every
    attached high-rank member of q containing the pair. The result validates,
    extends both inputs, and its pair table realizes the three strong witness
    clauses on (a, b).
    """
    bad = strong_delta_input_violations(inp, fam)
    if bad:
        raise PreconditionError("unusable amalgamation input: " + ", ".join(bad))
    q, s = inp.q, inp.s
    merged: dict[Pair, FinSet] = {}
    for pr in all_pairs(s.a):
        merged[pr] = s.f_value(*pr)
    for pr in all_pairs(q.a):
        val = q.f_value(*pr)
        if pr in merged and merged[pr] != val:
            raise PropertyFault(f"pair values disagree on shared pair {pr}")
        merged[pr] = val
    root = inp.a & inp.b
    high = [
        x
        for x in q.A
        if fam.rank_of(x) >= inp.delta
    ]
    for xi in sorted(s.a - q.a):
        for eta in sorted(q.a - s.a):
            m = min(xi, eta)
            part_a = {w for w in inp.a if w < m}
            part_b = set()
            for tau in root:
                if tau < eta:
                    part_b |= s.f_value(tau, xi)
            part_c = set()
            for tau in root:
                if tau < xi:
                    part_c |= q.f_value(tau, eta)
            bound = {w for w in range(m)}
            for x in high:
                if xi in x and eta in x:
                    bound &= x
            merged[pair(xi, eta)] = frozenset((part_a | part_b | part_c) & bound)
    return PCondition(s.a | q.a, merged, s.A | q.A)


def extract_pair_table(chain: list[PCondition], n: int) -> PairTable:
    """Union of the pair functions along a descending chain.

    Each chain element must extend its predecessor, which makes the union
    consistent; absent pairs stay empty in the resulting table.
    """
    if not chain:
        raise PreconditionError("chain must be nonempty")
    for earlier, later in zip(chain, chain[1:]):
        if not p_extends(later, earlier):
            raise PreconditionError("list is not a descending chain")
    entries: dict[Pair, FinSet] = {}
    for p in chain:
        for pr in all_pairs(p.a):
            val = p.f_value(*pr)
            if pr in entries and entries[pr] != val:
                raise PropertyFault(f"chain disagrees on pair {pr}")
            entries[pr] = val
    for (a, b), val in entries.items():
        if any(w >= a for w in val) or (val and max(val) >= n):
            raise PropertyFault(f"extracted value escapes the bound at pair {(a, b)}")
    return PairTable(n, entries)
