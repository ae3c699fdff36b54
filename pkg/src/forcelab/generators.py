"""Deterministic random instance builders for the test corpora.

Every builder threads a single `random.Random` so a seed pins the whole
corpus. Construction is generate-and-repair: neighborhood seeds are sampled
freely, then shrunk until every star set is coverable, cover sets are chosen
greedily, and pair tables are grown to a least fixed point of the monotone
inclusion clauses the instances are meant to satisfy.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .conditions import (
    Condition,
    FinSet,
    OrderIso,
    Pair,
    PairTable,
    all_pairs,
    canonical_order_iso,
    pair,
    star,
)
from .deltaprop import DeltaSystem
from .sideforce import (
    PCondition,
    RankedFamily,
    StrongDeltaAmalgamInput,
    restrict_p,
    strong_delta_input_violations,
    validate_p_condition,
)


# ---------------------------------------------------------------------------
# layout sampling: roots shared by all copies, tail slots holding one strictly
# ascending value stream per copy

def _ballot_split(rng: random.Random, values: list[int]) -> tuple[list[int], list[int]]:
    """Split 2m sorted values into two m-streams, pointwise first <= second."""
    m = len(values) // 2
    lo: list[int] = []
    hi: list[int] = []
    for v in values:
        can_lo = len(lo) < m
        can_hi = len(hi) < len(lo)
        if can_lo and can_hi:
            (lo if rng.random() < 0.5 else hi).append(v)
        elif can_lo:
            lo.append(v)
        else:
            hi.append(v)
    return lo, hi


def _interleaved_layout(rng, universe: int, r: int, k: int):
    """Roots plus two k-streams that may interleave inside each gap."""
    slots = ["R"] * r + ["T"] * k
    rng.shuffle(slots)
    roots: list[int] = []
    lows: list[int] = []
    highs: list[int] = []
    cursor = 0
    idx = 0
    while idx < len(slots):
        if slots[idx] == "R":
            need_after = sum(1 if s == "R" else 2 for s in slots[idx + 1 :])
            top = universe - need_after
            if cursor >= top:
                return None
            v = rng.randrange(cursor, top)
            roots.append(v)
            cursor = v + 1
            idx += 1
        else:
            run = 0
            while idx + run < len(slots) and slots[idx + run] == "T":
                run += 1
            need_after = sum(1 if s == "R" else 2 for s in slots[idx + run :])
            top = universe - need_after
            if top - cursor < 2 * run:
                return None
            vals = sorted(rng.sample(range(cursor, top), 2 * run))
            lo, hi = _ballot_split(rng, vals)
            lows += lo
            highs += hi
            cursor = vals[-1] + 1
            idx += run
    return roots, lows, highs


def _banded_layout(rng, universe: int, r: int, k: int, copies: int):
    """Roots plus k tail slots, each holding `copies` ascending values."""
    slots = ["R"] * r + ["T"] * k
    rng.shuffle(slots)
    roots: list[int] = []
    streams: list[list[int]] = []
    cursor = 0
    for idx, kind in enumerate(slots):
        need_after = sum(1 if s == "R" else copies for s in slots[idx + 1 :])
        top = universe - need_after
        if kind == "R":
            if cursor >= top:
                return None
            v = rng.randrange(cursor, top)
            roots.append(v)
            cursor = v + 1
        else:
            if top - cursor < copies:
                return None
            vals = sorted(rng.sample(range(cursor, top), copies))
            streams.append(vals)
            cursor = vals[-1] + 1
    return roots, streams


# ---------------------------------------------------------------------------
# condition body: random seeds, repair, greedy covers

def _random_seeds(rng, points: list[int], density: float = 0.4) -> dict[int, FinSet]:
    pts = sorted(points)
    h: dict[int, FinSet] = {}
    for xi in pts:
        picked = {w for w in pts if w < xi and rng.random() < density}
        h[xi] = frozenset(picked | {xi})
    return h


def _repair_root_pairs(h: dict[int, FinSet], roots: list[int]) -> None:
    """Shrink seeds until every root-pair star set is coverable inside the root."""
    roots = sorted(roots)
    changed = True
    while changed:
        changed = False
        for lo, hi in itertools.combinations(roots, 2):
            cover: set[int] = set()
            for gamma in roots:
                if gamma < lo:
                    cover |= h[gamma]
            extra = star(h[lo], h[hi]) - cover
            if extra:
                h[lo] = h[lo] - {max(extra)}
                changed = True
                break


def _greedy_cover(need: FinSet, candidates: list[int], h: dict[int, FinSet]) -> FinSet:
    chosen: list[int] = []
    covered: set[int] = set()
    for gamma in sorted(candidates, reverse=True):
        if need - covered and h[gamma] & (need - covered):
            chosen.append(gamma)
            covered |= h[gamma]
        if need <= covered:
            break
    assert need <= covered, "cover candidates cannot reach the star set"
    return frozenset(chosen)


def _cover_sets(h: dict[int, FinSet], points: FinSet, roots: list[int]) -> dict[Pair, FinSet]:
    """Choose cover sets pair by pair; root pairs only cite root points."""
    root_set = set(roots)
    covers: dict[Pair, FinSet] = {}
    for xi, eta in all_pairs(points):
        need = star(h[xi], h[eta])
        if not need:
            continue
        if xi in root_set and eta in root_set:
            cands = [g for g in root_set if g < xi]
        else:
            cands = sorted(need)
        covers[(xi, eta)] = _greedy_cover(need, cands, h)
    return covers


def _relabel(p: Condition, e: OrderIso) -> Condition:
    h = {e.apply(xi): e.image(hx) for xi, hx in p.h.items()}
    i = {(e.apply(a), e.apply(b)): e.image(v) for (a, b), v in p.i.items()}
    return Condition(p.universe, e.image(p.D), h, i)


def _propagate(entries: dict[Pair, set[int]], rules: list[tuple[Pair, Pair]]) -> None:
    changed = True
    while changed:
        changed = False
        for src, dst in rules:
            have = entries.get(src)
            if not have:
                continue
            tgt = entries.setdefault(dst, set())
            if not have <= tgt:
                tgt |= have
                changed = True


def _witness_rules(left: FinSet, right: FinSet, shared: FinSet) -> list[tuple[Pair, Pair]]:
    rules = []
    for u in left:
        for v in right:
            dst = pair(u, v)
            for z in shared:
                if z < u:
                    rules.append((pair(z, v), dst))
                if z < v:
                    rules.append((pair(z, u), dst))
    return rules


def _sprinkle(rng, entries: dict[Pair, set[int]], universe: int, rounds: int) -> None:
    for _ in range(rounds):
        a, b = rng.sample(range(universe), 2)
        lo = min(a, b)
        if lo:
            entries.setdefault(pair(a, b), set()).add(rng.randrange(lo))


# ---------------------------------------------------------------------------
# public builders

@dataclass
class IsoPairInstance:
    """An isomorphic lower/upper pair with an ambient table meeting both
    amalgamation hypotheses by construction."""

    p1: Condition
    p2: Condition
    e: OrderIso
    f: PairTable


def gen_iso_pair(rng: random.Random, universe: int) -> IsoPairInstance:
    """Sample a hypothesis-satisfying isomorphic pair over the given universe."""
    while True:
        r = rng.randint(0, 3)
        k_cap = 2 if universe <= 7 else 3
        k = rng.randint(0 if r else 1, k_cap)
        layout = _interleaved_layout(rng, universe, r, k)
        if layout is not None:
            roots, lows, highs = layout
            break
    d1 = frozenset(roots) | frozenset(lows)
    h1 = _random_seeds(rng, sorted(d1))
    _repair_root_pairs(h1, roots)
    i1 = _cover_sets(h1, d1, roots)
    p1 = Condition(universe, d1, h1, i1)
    e = OrderIso(tuple(sorted(d1)), tuple(sorted(frozenset(roots) | frozenset(highs))))
    p2 = _relabel(p1, e)

    entries: dict[Pair, set[int]] = {}
    for src in (p1, p2):
        for pr, val in src.i.items():
            entries.setdefault(pr, set()).update(val)
    left, right, shared = p1.D - p2.D, p2.D - p1.D, p1.D & p2.D
    for u in left:
        for v in right:
            m = min(u, v)
            entries.setdefault(pair(u, v), set()).update(w for w in p1.D if w < m)
    _sprinkle(rng, entries, universe, rng.randrange(0, 4))
    _propagate(entries, _witness_rules(left, right, shared))
    f = PairTable(universe, {k2: frozenset(v) for k2, v in entries.items()})
    return IsoPairInstance(p1, p2, e, f)


def gen_condition(rng: random.Random, universe: int, size: int | None = None):
    """A standalone valid condition with a table grown to carry its covers."""
    size = size or rng.randint(1, min(6, universe))
    d = frozenset(rng.sample(range(universe), size))
    h = _random_seeds(rng, sorted(d))
    covers: dict[Pair, FinSet] = {}
    for xi, eta in all_pairs(d):
        need = star(h[xi], h[eta])
        if need:
            covers[(xi, eta)] = _greedy_cover(need, sorted(need), h)
    entries = {pr: set(v) for pr, v in covers.items()}
    _sprinkle(rng, entries, universe, rng.randrange(0, 3))
    f = PairTable(universe, {k2: frozenset(v) for k2, v in entries.items()})
    return Condition(universe, d, h, covers), f


def prefix_condition(p: Condition, bound: int) -> Condition:
    """Trace of a condition on the initial segment up to and including bound."""
    d = frozenset(x for x in p.D if x <= bound)
    h = {x: p.h[x] for x in d}
    i = {pr: v for pr, v in p.i.items() if pr[1] <= bound}
    return Condition(p.universe, d, h, i)


def gen_chain(rng: random.Random, universe: int) -> tuple[list[Condition], PairTable]:
    """A descending chain built from initial-segment traces of one condition."""
    p, f = gen_condition(rng, universe, size=rng.randint(2, min(6, universe)))
    cuts = sorted(rng.sample(sorted(p.D), rng.randint(1, max(1, len(p.D) - 1))))
    chain = [prefix_condition(p, b) for b in cuts]
    chain.append(p)
    dedup = [chain[0]]
    for q in chain[1:]:
        if q.D != dedup[-1].D:
            dedup.append(q)
    return dedup, f


# ---------------------------------------------------------------------------
# sunflower ensembles (for witness search and uniformization)

def gen_sunflower(rng: random.Random, universe: int, copies: int) -> DeltaSystem | None:
    """One sunflower of equal-size members, canonical bijections all lower."""
    for _ in range(20):
        r = rng.randint(0, 2)
        k = rng.randint(1, 2)
        layout = _banded_layout(rng, universe, r, k, copies)
        if layout is None:
            continue
        roots, streams = layout
        members = []
        for t in range(copies):
            members.append(frozenset(roots) | frozenset(s[t] for s in streams))
        if len(set(members)) == copies:
            return DeltaSystem(tuple(members), frozenset(roots))
    return None


def ineligible_sunflower(universe: int, at: int) -> DeltaSystem:
    """A two-member family whose canonical bijections both fail the lower rule."""
    assert 1 <= at and at + 2 < universe
    a = frozenset({at, at + 1})
    b = frozenset({at - 1, at + 2})
    return DeltaSystem((a, b), frozenset())


def gen_search_ensemble(
    rng: random.Random, universe: int, systems: int, copies: int = 5
) -> list[DeltaSystem]:
    out = []
    while len(out) < systems:
        sys = gen_sunflower(rng, universe, copies)
        if sys is not None:
            out.append(sys)
    return out


# ---------------------------------------------------------------------------
# ranked families and side conditions

def gen_ranked_family(rng: random.Random, universe: int, count: int) -> RankedFamily:
    """Grow members in rank order, closing each under older members' traces."""
    members: list[FinSet] = []
    ranks: list[int] = []
    rank = 0
    for _ in range(count * 3):
        if len(members) >= count:
            break
        want = rng.randint(2, max(2, universe // 2))
        base = set(rng.sample(range(universe), min(want, universe)))
        changed = True
        while changed:
            changed = False
            for x in members:
                for alpha in sorted(base & x):
                    need = {w for w in x if w < alpha}
                    if not need <= base:
                        base |= need
                        changed = True
        fs = frozenset(base)
        if fs in members or any(fs <= x for x in members):
            continue
        members.append(fs)
        ranks.append(rank)
        rank += 1
    return RankedFamily(universe, tuple(members), tuple(ranks))


def gen_p_condition(rng: random.Random, fam: RankedFamily) -> PCondition:
    """A valid side condition over the family."""
    n = fam.universe
    a = frozenset(rng.sample(range(n), rng.randint(1, min(4, n))))
    attached = frozenset(m for m in fam.members if rng.random() < 0.4)
    f: dict[Pair, FinSet] = {}
    for alpha, beta in all_pairs(a):
        allowed = set(range(alpha))  # alpha == min of the pair
        for x in attached:
            if alpha in x and beta in x:
                allowed &= x
        picked = {w for w in allowed if rng.random() < 0.4}
        if picked:
            f[(alpha, beta)] = frozenset(picked)
    return PCondition(a, f, attached)


def gen_strong_delta_instance(
    rng: random.Random, universe: int | None = None
) -> tuple[StrongDeltaAmalgamInput, RankedFamily]:
    """Sample a usable cut-based amalgamation input (with its family)."""
    while True:
        n = universe if universe is not None else rng.randint(8, 14)
        fam = gen_ranked_family(rng, n, rng.randint(2, 4))
        cands = [
            idx
            for idx, m in enumerate(fam.members)
            if len(m) >= 3 and len(m) < n
        ]
        if not cands:
            continue
        ci = rng.choice(cands)
        x0 = fam.members[ci]
        delta = fam.ranks[ci]

        attached = {x0}
        for j, m in enumerate(fam.members):
            if j != ci and rng.random() < 0.5:
                attached.add(m)
        shield: set[int] = set()
        for m in attached:
            if fam.rank_of(m) < delta:
                shield |= m & x0
        z = frozenset(shield)

        outside_pool = sorted(set(range(n)) - x0)
        if not outside_pool:
            continue
        inside_pool = sorted(x0)
        a_q = frozenset(rng.sample(outside_pool, rng.randint(1, min(2, len(outside_pool)))))
        a_q |= frozenset(rng.sample(inside_pool, rng.randint(0, min(2, len(inside_pool)))))
        f_q: dict[Pair, FinSet] = {}
        for alpha, beta in all_pairs(a_q):
            allowed = set(range(alpha))
            for x in attached:
                if alpha in x and beta in x:
                    allowed &= x
            picked = {w for w in allowed if rng.random() < 0.5}
            if picked:
                f_q[(alpha, beta)] = frozenset(picked)
        q = PCondition(a_q, f_q, frozenset(attached))
        if not validate_p_condition(q, fam).ok:
            continue

        base = restrict_p(q, x0)
        fresh_pool = sorted(x0 - z - a_q)
        if not fresh_pool:
            continue
        fresh = frozenset(rng.sample(fresh_pool, rng.randint(1, min(2, len(fresh_pool)))))
        a_s = base.a | fresh
        f_s: dict[Pair, FinSet] = dict(base.f)
        for alpha, beta in all_pairs(a_s):
            if (alpha, beta) in f_s or (alpha in base.a and beta in base.a):
                continue
            allowed = {w for w in x0 if w < alpha}
            for x in base.A:
                if alpha in x and beta in x:
                    allowed &= x
            picked = {w for w in allowed if rng.random() < 0.5}
            if picked:
                f_s[(alpha, beta)] = frozenset(picked)
        s = PCondition(a_s, f_s, base.A)
        if not validate_p_condition(s, fam).ok:
            continue

        hb_pool = sorted(a_q - x0)
        la_pool = sorted(a_s - a_q)
        root_pool = sorted(a_q & x0)
        width = rng.randint(1, min(2, len(hb_pool), len(la_pool)))
        for _ in range(8):
            hb = frozenset(rng.sample(hb_pool, width))
            la = frozenset(rng.sample(la_pool, width))
            rt = frozenset(rng.sample(root_pool, rng.randint(0, min(1, len(root_pool)))))
            a_t, b_t = la | rt, hb | rt
            e = canonical_order_iso(a_t, b_t)
            if not (e.identity_on_overlap and e.lower):
                continue
            inp = StrongDeltaAmalgamInput(q, s, a_t, b_t, x0, delta, z)
            if not strong_delta_input_violations(inp, fam):
                return inp, fam


# ---------------------------------------------------------------------------
# aligned ensembles with tuples and guards (for the separation pipeline)

@dataclass
class SeparationInstance:
    """Aligned copies with tuples and guards, plus a table giving the first
    ordered pair of domains a strong witness."""

    items: list[tuple[Condition, tuple[int, ...], tuple[FinSet, ...]]]
    f: PairTable


def gen_separation_instance(
    rng: random.Random, universe: int, arity: int, copies: int
) -> SeparationInstance:
    """Sample aligned (condition, tuple, guards) copies over one sunflower."""
    while True:
        r = rng.randint(0, 2)
        k = rng.randint(max(1, min(arity, 2)), 3)
        layout = _banded_layout(rng, universe, r, k, copies)
        if layout is not None:
            roots, streams = layout
            break
    base_dom = frozenset(roots) | frozenset(s[0] for s in streams)
    h = _random_seeds(rng, sorted(base_dom))
    _repair_root_pairs(h, roots)
    covers = _cover_sets(h, base_dom, roots)
    base = Condition(universe, base_dom, h, covers)

    conds = [base]
    for t in range(1, copies):
        dom_t = frozenset(roots) | frozenset(s[t] for s in streams)
        e0t = canonical_order_iso(base_dom, dom_t)
        conds.append(_relabel(base, e0t))

    slot_values = [sorted(base_dom)]
    for t in range(1, copies):
        slot_values.append(sorted(conds[t].D))

    # coordinates prefer moving slots; guards are slots whose seeds miss the
    # coordinate in the base copy (relabeling preserves that)
    positions = list(range(len(base_dom)))
    tail_positions = [i for i, v in enumerate(slot_values[0]) if v not in roots]
    coord_slots = []
    for _ in range(arity):
        pool = tail_positions if tail_positions and rng.random() < 0.8 else positions
        coord_slots.append(rng.choice(pool))
    guard_slots: list[list[int]] = []
    for slot in coord_slots:
        x = slot_values[0][slot]
        okay = [
            j
            for j in positions
            if j != slot and x not in base.h[slot_values[0][j]]
        ]
        rng.shuffle(okay)
        guard_slots.append(sorted(okay[: rng.randint(0, min(2, len(okay)))]))

    items = []
    for t in range(copies):
        vals = slot_values[t]
        tup = tuple(vals[j] for j in coord_slots)
        guards = tuple(frozenset(vals[j] for j in gs) for gs in guard_slots)
        items.append((conds[t], tup, guards))

    entries: dict[Pair, set[int]] = {}
    for c in conds:
        for pr, val in c.i.items():
            entries.setdefault(pr, set()).update(val)
    d0, d1 = conds[0].D, conds[1].D
    left, right, shared = d0 - d1, d1 - d0, d0 & d1
    for u in left:
        for v in right:
            m = min(u, v)
            entries.setdefault(pair(u, v), set()).update(w for w in d0 if w < m)
    _sprinkle(rng, entries, universe, rng.randrange(0, 3))
    _propagate(entries, _witness_rules(left, right, shared))
    f = PairTable(universe, {k2: frozenset(v) for k2, v in entries.items()})
    return SeparationInstance(items, f)
