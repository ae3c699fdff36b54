"""Asymmetric amalgamation of isomorphic conditions, plus its brute-force oracle.

Two isomorphic conditions, one lower than the other, merge into a common
extension whose new seeds are pulled back along two maps: the least-capture
projection on the first domain and the order bijection on the second. The
construction needs two hypotheses on the ambient pair table, checked here
exhaustively and symmetrically in the two cross roles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .conditions import (
    EMPTY,
    Condition,
    FinSet,
    OrderIso,
    Pair,
    PairTable,
    all_pairs,
    delta2,
    extends,
    find_isomorphism,
    pair,
    star,
    validate_condition,
)
from .errors import PreconditionError, PropertyFault


@dataclass
class AmalgamHypotheses:
    """Outcome of the amalgamation hypothesis check.

    cond_a_ok records whether the two conditions agree on cover sets over the
    shared domain. cond_b_failures lists every failed inclusion instance as
    (zeta, xi, eta, clause) with clause one of "B(i)", "B(i)sym", "B(ii)".
    """

    cond_a_ok: bool
    cond_a_failures: list[Pair]
    cond_b_failures: list[tuple[int, int, int, str]]

    @property
    def ok(self) -> bool:
        return self.cond_a_ok and not self.cond_b_failures

    def to_json(self) -> dict:
        return {
            "cond_a_ok": self.cond_a_ok,
            "cond_a_failures": [list(p) for p in self.cond_a_failures],
            "cond_b_failures": [
                {"witness": [z, x, y], "clause": c} for (z, x, y, c) in self.cond_b_failures
            ],
            "ok": self.ok,
        }


class AmalgamationError(Exception):
    """Raised when the amalgamation hypotheses fail; carries the report."""

    def __init__(self, hypotheses: AmalgamHypotheses):
        super().__init__("amalgamation hypotheses failed")
        self.hypotheses = hypotheses


def _require_isomorphic(p1: Condition, p2: Condition, e: OrderIso) -> None:
    found = find_isomorphism(p1, p2)
    if found is None or found != e:
        raise PreconditionError("conditions are not isomorphic via the given bijection")
    if not e.lower:
        raise PreconditionError("the first condition must be lower than the second")


def check_amalgam_hypotheses(
    p1: Condition, p2: Condition, e: OrderIso, f: PairTable
) -> AmalgamHypotheses:
    """Evaluate both amalgamation hypotheses exhaustively.

    (A) the cover maps agree on pairs from the shared domain; (B) for every
    cross pair, the shared trace below the pair is inside the table value,
    and table values at shared points propagate upward into it. Clause (B) is
    checked in both role assignments of the cross pair, which is what the
    construction's case analysis actually consumes.
    """
    _require_isomorphic(p1, p2, e)
    shared = p1.D & p2.D
    a_failures = [pr for pr in all_pairs(shared) if p1.i_value(*pr) != p2.i_value(*pr)]
    b_failures: list[tuple[int, int, int, str]] = []
    for u in sorted(p1.D - p2.D):
        for v in sorted(p2.D - p1.D):
            fuv = f.value(u, v)
            m = min(u, v)
            for w in sorted(w for w in p1.D if w < m and w not in fuv):
                b_failures.append((w, u, v, "B(ii)"))
            for z in sorted(shared):
                if z < u and not f.value(z, v) <= fuv:
                    b_failures.append((z, u, v, "B(i)"))
                if z < v and not f.value(z, u) <= fuv:
                    b_failures.append((z, u, v, "B(i)sym"))
    return AmalgamHypotheses(not a_failures, a_failures, b_failures)


def amalgamate_asymmetric(
    p1: Condition, p2: Condition, e: OrderIso, f: PairTable
) -> Condition:
    """Build the common extension of an isomorphic lower/upper pair.

    New seeds on the first domain are enlarged by projection preimages, on
    the second by bijection preimages; cover sets on cross pairs are the
    table values cut to the merged domain. The result validates, extends both
    inputs, and transfers membership along the bijection:
    xi lands in the merged seed of eta exactly when e(xi) lands in the second
    condition's seed of eta.
    """
    hyp = check_amalgam_hypotheses(p1, p2, e, f)
    if not hyp.ok:
        raise AmalgamationError(hyp)
    d2 = delta2(p1, p2)
    d_q = p1.D | p2.D
    h_q: dict[int, FinSet] = {}
    for xi in d_q:
        via1 = p1.h[xi] | d2.preimage(p1.h[xi]) if xi in p1.D else None
        via2 = p2.h[xi] | e.preimage(p2.h[xi]) if xi in p2.D else None
        if via1 is not None and via2 is not None and via1 != via2:
            raise PropertyFault(f"merged seeds disagree on shared point {xi}")
        h_q[xi] = via1 if via1 is not None else via2
    i_q: dict[Pair, FinSet] = {}
    for xi, eta in all_pairs(d_q):
        if xi in p1.D and eta in p1.D:
            val = p1.i_value(xi, eta)
        elif xi in p2.D and eta in p2.D:
            val = p2.i_value(xi, eta)
        else:
            val = f.value(xi, eta) & d_q
        if val:
            i_q[(xi, eta)] = val
    return Condition(p1.universe, d_q, h_q, i_q)


def transfer_holds(p1: Condition, p2: Condition, e: OrderIso, q: Condition) -> bool:
    """The amalgam's defining biconditional, checked pointwise."""
    return all(
        (xi in q.h[eta]) == (e.apply(xi) in p2.h[eta]) for xi in p1.D for eta in p2.D
    )


def check_star_projection(
    p: Condition, q_D: FinSet, q_h: dict[int, FinSet], g: dict[int, int]
) -> bool:
    """Regression check for the star-set trace identities of an enlargement.

    `g` maps new points back into the base domain, fixing the shared part;
    base seeds are expected to grow by exactly their g-preimages. Under those
    hypotheses both displayed traces hold for every base pair:
    the star set cut to the base domain equals the base star set, and its cut
    to the new points equals the g-preimage of the base star set. A False
    return means the enlargement data is corrupted.
    """
    q_dom = frozenset(q_D)
    if not p.D <= q_dom:
        raise PreconditionError("base domain must sit inside the enlarged domain")
    dom_g = frozenset(g)
    if not dom_g <= q_dom:
        raise PreconditionError("g must be defined inside the enlarged domain")
    if any(v not in p.D for v in g.values()):
        raise PreconditionError("g must map into the base domain")
    if any(g[x] != x for x in p.D & dom_g):
        raise PreconditionError("g must fix the shared part pointwise")
    outside = q_dom - p.D
    for xi, eta in all_pairs(p.D):
        s_q = star(q_h[xi], q_h[eta])
        s_p = star(p.h[xi], p.h[eta])
        if s_q & p.D != s_p:
            return False
        pre = frozenset(x for x, y in g.items() if y in s_p)
        if s_q & outside != pre & outside:
            return False
    return True


def _subsets_smallest_first(pool: list[int]) -> list[FinSet]:
    pool = sorted(pool)
    out: list[FinSet] = []
    for k in range(len(pool) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(pool, k))
    return out


def brute_force_common_extension(
    p1: Condition, p2: Condition, f: PairTable, bound: int = 7
) -> Optional[Condition]:
    """Exhaustive oracle: search all candidate extensions on the merged domain.

    Candidates run over every admissible seed enlargement and cross cover
    assignment, smallest first and in deterministic lexicographic order; the
    first candidate that validates and extends both inputs is returned.
    Exponential by design, so it refuses universes above `bound`.
    """
    if p1.universe != p2.universe or p1.universe > bound:
        raise PreconditionError(f"oracle is restricted to universes of size at most {bound}")
    shared = p1.D & p2.D
    for xi in shared:
        if p1.h[xi] & p2.D != p2.h[xi] & p1.D:
            return None
    for pr in all_pairs(shared):
        if p1.i_value(*pr) != p2.i_value(*pr):
            return None

    d_q = p1.D | p2.D
    left = sorted(p1.D - p2.D)
    right = sorted(p2.D - p1.D)

    fixed_h = {xi: p1.h[xi] | p2.h[xi] for xi in shared}
    free_points = []
    for xi in sorted(d_q - shared):
        if xi in p1.D:
            base, room = p1.h[xi], [v for v in right if v < xi]
        else:
            base, room = p2.h[xi], [u for u in left if u < xi]
        free_points.append((xi, [base | extra for extra in _subsets_smallest_first(room)]))

    cross = [pair(u, v) for u in left for v in right]
    cross.sort()

    def candidate_valid(q: Condition) -> bool:
        return (
            validate_condition(q, f).ok and extends(q, p1) and extends(q, p2)
        )

    for choice in itertools.product(*(opts for _, opts in free_points)):
        h_q = dict(fixed_h)
        for (xi, _), hx in zip(free_points, choice):
            h_q[xi] = hx
        i_q: dict[Pair, FinSet] = {}
        for a, b in all_pairs(d_q):
            if a in p1.D and b in p1.D:
                i_q[(a, b)] = p1.i_value(a, b)
            elif a in p2.D and b in p2.D:
                i_q[(a, b)] = p2.i_value(a, b)
        # Cross covers decompose pair by pair: a cover choice only affects its
        # own clause, so the maximal pool decides feasibility and the smallest
        # covering subset realizes the lexicographically least witness.
        feasible = True
        for a, b in cross:
            pool = f.value(a, b) & d_q
            need = star(h_q[a], h_q[b])
            reach = set()
            for gamma in pool:
                reach |= h_q.get(gamma, EMPTY)
            if not need <= reach:
                feasible = False
                break
            for sub in _subsets_smallest_first(sorted(pool)):
                got = set()
                for gamma in sub:
                    got |= h_q.get(gamma, EMPTY)
                if need <= got:
                    i_q[(a, b)] = sub
                    break
        if not feasible:
            continue
        q = Condition(p1.universe, d_q, h_q, i_q)
        if candidate_valid(q):
            return q
    return None
