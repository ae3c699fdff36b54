"""Finite forcing conditions over a bounded ordinal universe.

Ordinals are plain ints below a fixed universe size; finite sets of them are
frozensets. A condition (D, h, i) assigns each point of its finite domain D a
neighborhood seed h(xi) whose maximum is xi, plus cover sets i({xi, eta})
drawn from an ambient pair table. The extension order is end-extension of
that data: a stronger condition never rewrites what a weaker one decided.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import PreconditionError

FinSet = frozenset[int]
Pair = tuple[int, int]

EMPTY: FinSet = frozenset()


def pair(a: int, b: int) -> Pair:
    """Unordered pair of distinct points, stored as (lo, hi)."""
    if a == b:
        raise PreconditionError(f"pair needs two distinct points, got {a} twice")
    return (a, b) if a < b else (b, a)


def all_pairs(points: Iterable[int]) -> list[Pair]:
    """Every unordered pair from `points`, in ascending (lo, hi) order."""
    return list(itertools.combinations(sorted(points), 2))


def star(x: FinSet, y: FinSet) -> FinSet:
    """Difference x - y when max x lands in y, intersection x & y otherwise.

    Defined only for nonempty operands with max x < max y; the result always
    sits inside x and strictly below max x.
    """
    if not x or not y:
        raise PreconditionError("star needs nonempty operands")
    if max(x) >= max(y):
        raise PreconditionError("star needs max x < max y")
    return x - y if max(x) in y else x & y


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {"clause": self.clause, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    """Complete list of violated clauses; empty means the object is valid."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, clause: str, *witness: int) -> None:
        self.violations.append(Violation(clause, tuple(witness)))

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


@dataclass(frozen=True)
class PairTable:
    """Function on unordered pairs of the universe; missing pairs mean empty.

    Every stored value must sit strictly below the smaller point of its pair.
    """

    universe: int
    entries: dict[Pair, FinSet] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for key, val in self.entries.items():
            val = frozenset(val)
            if val:
                norm[pair(*key)] = val
        object.__setattr__(self, "entries", norm)

    def value(self, a: int, b: int) -> FinSet:
        return self.entries.get(pair(a, b), EMPTY)

    def violations(self) -> list[Violation]:
        out = []
        for (a, b), val in sorted(self.entries.items()):
            if not (0 <= a < self.universe and 0 <= b < self.universe):
                out.append(Violation("pair-range", (a, b)))
            for w in sorted(val):
                if w >= a:  # a == min of the pair
                    out.append(Violation("value-below-min", (a, b, w)))
                if not 0 <= w < self.universe:
                    out.append(Violation("value-range", (a, b, w)))
        return out


@dataclass(frozen=True)
class Condition:
    """A finite condition (D, h, i); see the module docstring.

    The record itself is permissive: malformed data is representable and
    `validate_condition` reports every broken clause rather than throwing.
    """

    universe: int
    D: FinSet
    h: dict[int, FinSet]
    i: dict[Pair, FinSet]

    def __post_init__(self):
        object.__setattr__(self, "D", frozenset(self.D))
        object.__setattr__(self, "h", {x: frozenset(v) for x, v in self.h.items()})
        norm = {}
        for key, val in self.i.items():
            val = frozenset(val)
            if val:
                norm[pair(*key)] = val
        object.__setattr__(self, "i", norm)

    def i_value(self, a: int, b: int) -> FinSet:
        return self.i.get(pair(a, b), EMPTY)


def validate_condition(p: Condition, f: PairTable) -> ValidationReport:
    """Check every defining clause of a condition against the pair table.

    The report enumerates all violations with witnesses; an empty report
    certifies membership in the forcing. Structural damage (wrong h domain,
    stray points) is reported too, never thrown.
    """
    rep = ValidationReport()
    if p.universe != f.universe:
        rep.add("universe-mismatch", p.universe, f.universe)
    for xi in sorted(p.D):
        if not 0 <= xi < p.universe:
            rep.add("point-range", xi)
    for xi in sorted(set(p.h) ^ p.D):
        rep.add("h-domain", xi)

    star_ready = set()
    for xi in sorted(p.D):
        hx = p.h.get(xi)
        if hx is None:
            continue
        for stray in sorted(hx - p.D):
            rep.add("h-range", xi, stray)
        if not hx or max(hx) != xi:
            rep.add("max-rule", xi)
        elif hx <= p.D:
            star_ready.add(xi)

    for (a, b) in sorted(p.i):
        if a not in p.D or b not in p.D:
            rep.add("i-domain", a, b)

    for xi, eta in all_pairs(p.D):
        iv = p.i_value(xi, eta)
        for stray in sorted(iv - p.D):
            rep.add("i-range", xi, eta, stray)
        for stray in sorted(iv - f.value(xi, eta)):
            rep.add("i-subset-f", xi, eta, stray)
        if xi in star_ready and eta in star_ready:
            cover = set()
            for gamma in iv & p.D:
                cover |= p.h.get(gamma, EMPTY)
            for zeta in sorted(star(p.h[xi], p.h[eta]) - cover):
                rep.add("star-cover", xi, eta, zeta)
    return rep


def extends(p: Condition, q: Condition) -> bool:
    """Extension order: p extends q when q's data is exactly p's trace on q.

    Both conditions are assumed valid for the same pair table.
    """
    if not q.D <= p.D:
        return False
    for xi in q.D:
        if p.h[xi] & q.D != q.h[xi]:
            return False
    for xi, eta in all_pairs(q.D):
        if p.i_value(xi, eta) != q.i_value(xi, eta):
            return False
    return True


@dataclass(frozen=True)
class OrderIso:
    """The order-preserving bijection between two finite point sets.

    Stored as aligned ascending tuples; between two finite sets of equal size
    there is exactly one such bijection.
    """

    source: tuple[int, ...]
    target: tuple[int, ...]

    def __post_init__(self):
        src, tgt = tuple(self.source), tuple(self.target)
        if len(src) != len(tgt):
            raise PreconditionError("order bijection needs equal sizes")
        if any(a >= b for a, b in zip(src, src[1:])) or any(
            a >= b for a, b in zip(tgt, tgt[1:])
        ):
            raise PreconditionError("order bijection endpoints must be strictly ascending")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "_fwd", dict(zip(src, tgt)))
        object.__setattr__(self, "_bwd", dict(zip(tgt, src)))

    def apply(self, xi: int) -> int:
        return self._fwd[xi]

    def image(self, s: Iterable[int]) -> FinSet:
        return frozenset(self._fwd[x] for x in s)

    def preimage(self, s: Iterable[int]) -> FinSet:
        t = set(s)
        return frozenset(x for x, y in self._fwd.items() if y in t)

    def inverse(self) -> "OrderIso":
        return OrderIso(self.target, self.source)

    @property
    def lower(self) -> bool:
        """True when every point maps weakly upward."""
        return all(a <= b for a, b in zip(self.source, self.target))

    @property
    def identity_on_overlap(self) -> bool:
        shared = set(self.source) & set(self.target)
        return all(self._fwd[x] == x for x in shared)


def canonical_order_iso(a: Iterable[int], b: Iterable[int]) -> OrderIso:
    """The unique order bijection between two equal-size finite sets."""
    return OrderIso(tuple(sorted(a)), tuple(sorted(b)))


def find_isomorphism(p1: Condition, p2: Condition) -> Optional[OrderIso]:
    """Return the structure-preserving order bijection between two conditions.

    Present only when the unique order bijection of the domains fixes their
    intersection pointwise and carries the h-membership pattern of the first
    condition exactly onto the second. The caller reads the `lower` flag off
    the result.
    """
    if len(p1.D) != len(p2.D):
        return None
    e = canonical_order_iso(p1.D, p2.D)
    if not e.identity_on_overlap:
        return None
    for eta in p1.D:
        h2 = p2.h[e.apply(eta)]
        for xi in p1.D:
            if (xi in p1.h[eta]) != (e.apply(xi) in h2):
                return None
    return e


@dataclass(frozen=True)
class Delta2Map:
    """Projection of the second domain onto the shared part of two conditions.

    A point of the second domain is in scope when some shared point's
    neighborhood seed captures it; it projects to the least such point.
    Points outside the shared part always project strictly upward, and shared
    points project to themselves.
    """

    values: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    @property
    def dom(self) -> FinSet:
        return frozenset(self.values)

    def apply(self, eta: int) -> int:
        return self.values[eta]

    def preimage(self, s: Iterable[int]) -> FinSet:
        t = set(s)
        return frozenset(x for x, y in self.values.items() if y in t)


def delta2(p1: Condition, p2: Condition) -> Delta2Map:
    """Compute the least-capture projection for the ordered pair (p1, p2)."""
    shared = p1.D & p2.D
    vals = {}
    for eta in sorted(p2.D):
        caps = [d for d in shared if eta in p2.h[d]]
        if caps:
            vals[eta] = min(caps)
    return Delta2Map(vals)


def check_projection(p1: Condition, p2: Condition, e: OrderIso) -> bool:
    """Regression check: on the shared domain, the second condition's seeds
    are exactly the projection preimages of the first's.

    For genuinely isomorphic conditions this always holds; a False return
    flags corrupted input. The bijection `e` records the hypothesis under
    test; the displayed equality itself is computed from the projection.
    """
    _ = e
    d2 = delta2(p1, p2)
    for xi in sorted(p1.D & p2.D):
        if p2.h[xi] != d2.preimage(p1.h[xi]):
            return False
    return True
