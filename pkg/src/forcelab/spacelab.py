"""Generic-approximation diagnostics over descending chains of conditions.

Merging a finite descending chain yields one neighborhood seed per point;
basic neighborhoods subtract finitely many other seeds from a point's own.
On top of that sit the scattering level structure, the left-separation
predicate for guarded tuple sequences, and the amalgamation step that defeats
a left-separation claim at a witness pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .amalgam import amalgamate_asymmetric
from .conditions import (
    Condition,
    FinSet,
    OrderIso,
    PairTable,
    ValidationReport,
    extends,
    find_isomorphism,
    validate_condition,
)
from .errors import PreconditionError


@dataclass(frozen=True)
class GenericApproximation:
    """Merged neighborhood seeds of a chain, plus the compactification flag.

    The extra point carries no neighborhood data; it only marks that the
    merged space is read as compactified.
    """

    universe: int
    h: dict[int, FinSet]
    has_infinity: bool = True

    def __post_init__(self):
        object.__setattr__(self, "h", {x: frozenset(v) for x, v in self.h.items()})

    @property
    def domain(self) -> FinSet:
        return frozenset(self.h)


def validate_chain(chain: list[Condition], f: PairTable) -> ValidationReport:
    """Each element must validate and each successive element extend the previous."""
    rep = ValidationReport()
    if not chain:
        rep.add("empty-chain")
        return rep
    for idx, p in enumerate(chain):
        sub = validate_condition(p, f)
        for v in sub.violations:
            rep.add(f"element-{v.clause}", idx, *v.witness)
    for idx, (earlier, later) in enumerate(zip(chain, chain[1:])):
        if not extends(later, earlier):
            rep.add("chain-order", idx, idx + 1)
    return rep


def merge_chain(chain: list[Condition]) -> GenericApproximation:
    """Pointwise union of the seeds along a valid descending chain."""
    if not chain:
        raise PreconditionError("chain must be nonempty")
    h: dict[int, set[int]] = {}
    for p in chain:
        for xi, hx in p.h.items():
            h.setdefault(xi, set()).update(hx)
    return GenericApproximation(chain[0].universe, {x: frozenset(v) for x, v in h.items()})


def basic_nbhd(g: GenericApproximation, xi: int, guard: Iterable[int]) -> FinSet:
    """The point's seed with the guards' seeds carved out.

    The guard set may never contain the center itself.
    """
    guard = frozenset(guard)
    if xi not in g.h:
        raise PreconditionError(f"{xi} is outside the merged domain")
    if xi in guard:
        raise PreconditionError("the guard set must not contain the center")
    if not guard <= g.domain:
        raise PreconditionError("guards must come from the merged domain")
    out = set(g.h[xi])
    for eta in guard:
        out -= g.h[eta]
    return frozenset(out)


def level_structure(g: GenericApproximation) -> dict[int, int]:
    """Scattering levels read off the seeds.

    A point whose seed is just itself sits at level zero; otherwise its level
    is one above the deepest point its seed accumulates. Well-founded because
    seeds only reach downward.
    """
    levels: dict[int, int] = {}

    def level(xi: int) -> int:
        if xi not in levels:
            below = g.h[xi] - {xi}
            levels[xi] = 1 + max(level(eta) for eta in below) if below else 0
        return levels[xi]

    for xi in sorted(g.h):
        level(xi)
    return levels


def levels_summary(levels: dict[int, int]) -> tuple[int, int]:
    """Height (levels used) and width (largest level class)."""
    if not levels:
        return 0, 0
    height = max(levels.values()) + 1
    width = max(
        sum(1 for v in levels.values() if v == lvl) for lvl in range(height)
    )
    return height, width


@dataclass(frozen=True)
class SeparatedSequence:
    """Tuples with per-coordinate guard sets, in claimed separation order."""

    points: tuple[tuple[int, ...], ...]
    guards: tuple[tuple[FinSet, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(p) for p in self.points))
        object.__setattr__(
            self, "guards", tuple(tuple(frozenset(f) for f in gs) for gs in self.guards)
        )
        if len(self.points) != len(self.guards):
            raise PreconditionError("one guard tuple per point tuple")
        for pt, gs in zip(self.points, self.guards):
            if len(pt) != len(gs):
                raise PreconditionError("one guard set per coordinate")

    @property
    def arity(self) -> int:
        return len(self.points[0]) if self.points else 0


def sequence_violations(g: GenericApproximation, seq: SeparatedSequence) -> list[tuple[int, int]]:
    """Coordinates whose point leaves its own guarded neighborhood."""
    bad = []
    for idx, (pt, gs) in enumerate(zip(seq.points, seq.guards)):
        for coord, (x, guard) in enumerate(zip(pt, gs)):
            if x not in basic_nbhd(g, x, guard):
                bad.append((idx, coord))
    return bad


def is_left_separated(g: GenericApproximation, seq: SeparatedSequence) -> bool:
    """True when every later tuple's guarded box misses every earlier tuple.

    The convention follows the separation clause itself: for earlier alpha and
    later beta some coordinate of the alpha tuple must fall outside the beta
    tuple's guarded neighborhood at that coordinate.
    """
    for ia, ib in itertools.combinations(range(len(seq.points)), 2):
        pa, pb = seq.points[ia], seq.points[ib]
        gb = seq.guards[ib]
        if all(
            pa[i] in basic_nbhd(g, pb[i], gb[i]) for i in range(len(pb))
        ):
            return False
    return True


@dataclass
class KillResult:
    """Outcome of defeating a separation claim at one ordered pair."""

    q: Condition
    coordinates: tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.coordinates)


def kill_left_separation(
    p_a: Condition,
    p_b: Condition,
    e: OrderIso,
    xs: tuple[tuple[int, ...], tuple[int, ...]],
    guards_b: tuple[FinSet, ...],
    f: PairTable,
) -> KillResult:
    """Amalgamate a witness pair and verify the separation claim dies there.

    The bijection must align the two tuples coordinatewise, and the later
    tuple must sit inside its own guarded neighborhoods. The amalgam then
    places every earlier coordinate inside the later tuple's guarded
    neighborhood, refuting separation at this pair.
    """
    tup_a, tup_b = xs
    if len(tup_a) != len(tup_b) or len(guards_b) != len(tup_b):
        raise PreconditionError("tuples and guards must share one arity")
    for xa, xb in zip(tup_a, tup_b):
        if xa not in p_a.D or xb not in p_b.D:
            raise PreconditionError("tuple coordinates must lie in their domains")
        if e.apply(xa) != xb:
            raise PreconditionError("the bijection must align the tuples coordinatewise")
    for xb, guard in zip(tup_b, guards_b):
        guard = frozenset(guard)
        if not guard <= p_b.D:
            raise PreconditionError("guards must lie in the later domain")
        carved = set(p_b.h[xb])
        for eta in guard:
            carved -= p_b.h[eta]
        if xb not in carved:
            raise PreconditionError("the later tuple must sit inside its guarded neighborhoods")
    q = amalgamate_asymmetric(p_a, p_b, e, f)
    verdict = []
    for xa, xb, guard in zip(tup_a, tup_b, guards_b):
        inside = xa in q.h[xb] and all(xa not in q.h[eta] for eta in guard)
        verdict.append(inside)
    return KillResult(q, tuple(verdict))


@dataclass
class UniformizedEnsemble:
    """Largest aligned sub-ensemble plus its pairwise bijections."""

    indices: tuple[int, ...]
    e_maps: dict[tuple[int, int], OrderIso]


EnsembleItem = tuple[Condition, tuple[int, ...], tuple[FinSet, ...]]


def _aligned(items: list[EnsembleItem], picked: tuple[int, ...]):
    """Check one candidate index set; return its bijections or None."""
    domains = [items[k][0].D for k in picked]
    roots = {
        domains[x] & domains[y]
        for x, y in itertools.combinations(range(len(picked)), 2)
    }
    if len(roots) > 1:
        return None
    maps = {}
    for x, y in itertools.combinations(range(len(picked)), 2):
        j, k = picked[x], picked[y]
        pj, tj, gj = items[j]
        pk, tk, gk = items[k]
        e = find_isomorphism(pj, pk)
        if e is None:
            return None
        back = e.inverse()
        if not (e.lower or back.lower):
            return None
        if tuple(e.apply(t) for t in tj) != tuple(tk):
            return None
        if any(e.image(a) != b for a, b in zip(gj, gk)):
            return None
        maps[(j, k)] = e
        maps[(k, j)] = back
    return maps


def uniformize_ensemble(items: list[EnsembleItem]) -> UniformizedEnsemble:
    """Largest sub-list of mutually aligned items, ties broken lexicographically.

    Aligned means: the domains form a sunflower, the conditions are pairwise
    isomorphic with tuples and guards transported exactly, and every pair is
    comparable under the lower relation. Exhaustive over subsets, so meant for
    desk-scale ensembles; a singleton always qualifies.
    """
    if not items:
        raise PreconditionError("ensemble must be nonempty")
    n = len(items)
    for size in range(n, 0, -1):
        for picked in itertools.combinations(range(n), size):
            maps = _aligned(items, picked)
            if maps is not None:
                return UniformizedEnsemble(picked, maps)
    raise PreconditionError("unreachable: singletons always align")
