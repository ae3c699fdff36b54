"""Side-condition forcing: families, conditions, both amalgamations, chains."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from forcelab import (
    PCondition,
    PreconditionError,
    RankedFamily,
    StrongDeltaAmalgamInput,
    amalgamate_p_isomorphic,
    amalgamate_p_strong_delta,
    canonical_order_iso,
    check_strong_witness,
    extract_pair_table,
    p_extends,
    p_isomorphic,
    restrict_p,
    supp,
    validate_p_condition,
    validate_ranked_family,
)
from forcelab.generators import gen_p_condition, gen_ranked_family
from forcelab.sideforce import strong_delta_input_violations


def fs(*xs):
    return frozenset(xs)


def fam_of(universe, *pairs):
    members, ranks = zip(*pairs)
    return RankedFamily(universe, tuple(members), tuple(ranks))


class TestRankedFamily:
    def test_nested_traces_valid(self):
        fam = fam_of(6, (fs(0, 5), 0), (fs(0, 3, 5), 1))
        assert validate_ranked_family(fam).ok

    def test_trace_violation_witnessed(self):
        fam = fam_of(6, (fs(0, 2, 5), 0), (fs(1, 5), 1))
        rep = validate_ranked_family(fam)
        assert [(v.clause, v.witness) for v in rep.violations] == [("rank-trace", (0, 1, 5))]

    def test_subset_needs_smaller_rank(self):
        fam = fam_of(6, (fs(0, 5), 1), (fs(0, 3, 5), 1))
        rep = validate_ranked_family(fam)
        assert any(v.clause == "well-founded" for v in rep.violations)

    def test_generated_families_validate(self):
        rng = random.Random(9)
        for _ in range(40):
            fam = gen_ranked_family(rng, rng.randint(4, 12), rng.randint(1, 4))
            assert validate_ranked_family(fam).ok


WORKED_FAMILY = fam_of(4, (fs(0, 1, 2, 3), 0))


class TestPCondition:
    def test_worked_valid(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 2, 3)))
        assert validate_p_condition(p, WORKED_FAMILY).ok

    def test_value_at_or_above_min_rejected(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(2)}, fs(fs(0, 1, 2, 3)))
        rep = validate_p_condition(p, WORKED_FAMILY)
        assert [(v.clause, v.witness) for v in rep.violations] == [("min-bound", (1, 3, 2))]

    def test_no_ceilings_leaves_min_bound_only(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())
        assert validate_p_condition(p, WORKED_FAMILY).ok

    def test_value_escaping_a_ceiling_witnessed(self):
        fam = fam_of(6, (fs(1, 3, 5), 0))
        p = PCondition(fs(3, 5), {(3, 5): fs(1, 2)}, fs(fs(1, 3, 5)))
        rep = validate_p_condition(p, fam)
        assert [(v.clause, v.witness) for v in rep.violations] == [("side-condition", (3, 5, 2, 0))]

    def test_generated_conditions_validate(self):
        rng = random.Random(13)
        for _ in range(40):
            fam = gen_ranked_family(rng, rng.randint(4, 12), rng.randint(1, 3))
            p = gen_p_condition(rng, fam)
            assert validate_p_condition(p, fam).ok


class TestSupport:
    def test_bare_point(self):
        assert supp(PCondition(fs(1), {}, fs())) == fs(1)

    def test_worked_support(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 2, 3)))
        assert supp(p) == fs(0, 1, 2, 3)

    def test_detached_ceilings_count(self):
        p = PCondition(fs(1), {}, fs(fs(4, 5), fs(7, 8)))
        assert supp(p) == fs(1, 4, 5, 7, 8)


class TestPOrder:
    def test_reflexive(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())
        assert p_extends(p, p)

    def test_extra_ceiling_orders_one_way(self):
        p = PCondition(fs(1), {}, fs())
        q = PCondition(fs(1), {}, fs(fs(0, 1)))
        assert p_extends(q, p) and not p_extends(p, q)

    def test_conflicting_value_on_shared_pair(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())
        q = PCondition(fs(1, 3), {}, fs())
        assert not p_extends(p, q) and not p_extends(q, p)


SHIFT_FAMILY = fam_of(14, (fs(0, 1, 3), 0), (fs(10, 11, 13), 1))


class TestPIsomorphism:
    def test_identity(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 3)))
        pi = p_isomorphic(p, p)
        assert pi is not None and pi.source == pi.target

    def test_disjoint_shift(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 3)))
        q = PCondition(fs(11, 13), {(11, 13): fs(10)}, fs(fs(10, 11, 13)))
        pi = p_isomorphic(p, q)
        assert pi is not None
        assert pi.source == (0, 1, 3) and pi.target == (10, 11, 13)

    def test_untransported_value_absent(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 3)))
        q = PCondition(fs(11, 13), {}, fs(fs(10, 11, 13)))
        assert p_isomorphic(p, q) is None


class TestPAmalgamation:
    def test_self_merge(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 3)))
        pi = p_isomorphic(p, p)
        assert amalgamate_p_isomorphic(p, p, pi) == p

    def test_disjoint_shift_union_validates(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 3)))
        q = PCondition(fs(11, 13), {(11, 13): fs(10)}, fs(fs(10, 11, 13)))
        pi = p_isomorphic(p, q)
        r = amalgamate_p_isomorphic(p, q, pi)
        assert r.a == fs(1, 3, 11, 13)
        assert r.f_value(1, 3) == fs(0) and r.f_value(11, 13) == fs(10)
        assert r.f_value(3, 11) == fs()
        assert validate_p_condition(r, SHIFT_FAMILY).ok
        assert p_extends(r, p) and p_extends(r, q)

    def test_non_isomorphic_rejected(self):
        p = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())
        q = PCondition(fs(11,), {}, fs())
        pi = canonical_order_iso(fs(1), fs(11))
        with pytest.raises(PreconditionError):
            amalgamate_p_isomorphic(p, q, pi)

    def test_moved_value_on_shared_pair_is_a_fault(self):
        # the support bijection may move a value below the shared points; the
        # merge has no consistent answer there and must refuse loudly
        from forcelab import PropertyFault

        p = PCondition(fs(2, 5), {(2, 5): fs(0)}, fs())
        q = PCondition(fs(2, 5), {(2, 5): fs(1)}, fs())
        pi = p_isomorphic(p, q)
        assert pi is not None  # the clauses themselves hold
        with pytest.raises(PropertyFault):
            amalgamate_p_isomorphic(p, q, pi)


class TestRestrict:
    def test_full_cut_only_drops_the_cut_itself(self):
        q = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 2, 3)))
        r = restrict_p(q, fs(0, 1, 2, 3))
        assert r == PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())

    def test_disjoint_cut_gives_empty_condition(self):
        q = PCondition(fs(1, 3), {(1, 3): fs(0)}, fs())
        r = restrict_p(q, fs(4, 5))
        assert r == PCondition(fs(), {}, fs())

    def test_worked_mid_cut(self):
        q = MIDCUT["q"]
        assert restrict_p(q, MIDCUT["x0"]) == PCondition(fs(1), {}, fs())

    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_idempotent_and_monotone(self, seed):
        rng = random.Random(seed)
        fam = gen_ranked_family(rng, rng.randint(4, 10), rng.randint(1, 3))
        q = gen_p_condition(rng, fam)
        cut = frozenset(rng.sample(range(fam.universe), rng.randint(0, fam.universe)))
        once = restrict_p(q, cut)
        assert restrict_p(once, cut) == once
        assert p_extends(q, once)


MIDCUT = {
    "family": fam_of(6, (fs(0, 1, 2, 3), 1), (fs(0, 1, 4, 5), 2)),
    "q": PCondition(fs(1, 4), {(1, 4): fs(0)}, fs(fs(0, 1, 2, 3), fs(0, 1, 4, 5))),
    "s": PCondition(fs(1, 2), {(1, 2): fs(0)}, fs()),
    "x0": fs(0, 1, 2, 3),
}


def midcut_input(a=fs(2), b=fs(4)):
    return StrongDeltaAmalgamInput(
        MIDCUT["q"], MIDCUT["s"], a, b, MIDCUT["x0"], 1, fs()
    )


class TestStrongDeltaAmalgam:
    def test_family_and_inputs_are_sound(self):
        assert validate_ranked_family(MIDCUT["family"]).ok
        assert validate_p_condition(MIDCUT["q"], MIDCUT["family"]).ok
        assert validate_p_condition(MIDCUT["s"], MIDCUT["family"]).ok
        assert strong_delta_input_violations(midcut_input(), MIDCUT["family"]) == []

    def test_worked_mid_cut_instance(self):
        r = amalgamate_p_strong_delta(midcut_input(), MIDCUT["family"])
        assert r.a == fs(1, 2, 4)
        assert r.f_value(1, 2) == fs(0)
        assert r.f_value(1, 4) == fs(0)
        assert r.f_value(2, 4) == fs()  # [A|B|C] & D collapses to nothing here
        assert r.A == fs(fs(0, 1, 2, 3), fs(0, 1, 4, 5))
        assert validate_p_condition(r, MIDCUT["family"]).ok
        assert p_extends(r, MIDCUT["q"]) and p_extends(r, MIDCUT["s"])
        table = extract_pair_table([r], 6)
        e = canonical_order_iso(fs(2), fs(4))
        assert check_strong_witness(table, fs(2), fs(4), e).ok

    def test_degenerate_equal_tuples(self):
        inp = midcut_input(a=fs(1), b=fs(1))
        r = amalgamate_p_strong_delta(inp, MIDCUT["family"])
        assert validate_p_condition(r, MIDCUT["family"]).ok
        assert p_extends(r, MIDCUT["q"]) and p_extends(r, MIDCUT["s"])
        # the cross fill absorbs the decided traces at the shared tuple point
        assert r.f_value(2, 4) == fs(0, 1)

    def test_detached_cut_rejected(self):
        q = PCondition(fs(1, 4), {(1, 4): fs(0)}, fs(fs(0, 1, 4, 5)))
        inp = StrongDeltaAmalgamInput(q, MIDCUT["s"], fs(2), fs(4), MIDCUT["x0"], 1, fs())
        with pytest.raises(PreconditionError, match="cut-not-attached"):
            amalgamate_p_strong_delta(inp, MIDCUT["family"])


class TestExtract:
    def test_singleton_chain(self):
        table = extract_pair_table([MIDCUT["s"]], 6)
        assert table.value(1, 2) == fs(0)

    def test_two_step_chain_unions(self):
        r = amalgamate_p_strong_delta(midcut_input(), MIDCUT["family"])
        table = extract_pair_table([MIDCUT["s"], r], 6)
        assert table.value(1, 2) == fs(0)
        assert table.value(1, 4) == fs(0)
        assert table.value(2, 4) == fs()

    def test_non_chain_rejected(self):
        r = amalgamate_p_strong_delta(midcut_input(), MIDCUT["family"])
        with pytest.raises(PreconditionError):
            extract_pair_table([r, MIDCUT["s"]], 6)
