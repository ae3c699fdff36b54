"""Small builders shared across the test modules."""

from forcelab import Condition, PairTable


def cond(universe, h, i=None):
    """Condition from its seed map; the domain is the seed map's key set."""
    return Condition(universe, frozenset(h), {k: frozenset(v) for k, v in h.items()}, i or {})


def table(universe, entries=None):
    return PairTable(universe, entries or {})


# The worked lower/upper pair used throughout: a two-point condition and its
# upward copy over a three-point universe, with one forced table value.
def worked_pair():
    p1 = cond(3, {0: {0}, 1: {0, 1}})
    p2 = cond(3, {0: {0}, 2: {0, 2}})
    f = table(3, {(1, 2): {0}})
    return p1, p2, f
