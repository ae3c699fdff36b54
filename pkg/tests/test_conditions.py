"""Core condition machinery: star, validation, order, isomorphism, projection."""

import random

import pytest
from hypothesis import given, strategies as st

from forcelab import (
    Condition,
    PairTable,
    PreconditionError,
    check_projection,
    delta2,
    extends,
    find_isomorphism,
    star,
    validate_condition,
)
from forcelab.generators import gen_condition, gen_iso_pair

from helpers import cond, table, worked_pair


class TestStar:
    def test_max_in_second_gives_difference(self):
        assert star(frozenset({1, 3}), frozenset({3, 5})) == frozenset({1})

    def test_max_outside_gives_intersection(self):
        assert star(frozenset({1, 2}), frozenset({3, 5})) == frozenset()

    def test_difference_drops_shared_points(self):
        assert star(frozenset({0, 2}), frozenset({1, 2, 5})) == frozenset({0})

    def test_empty_operand_rejected(self):
        with pytest.raises(PreconditionError):
            star(frozenset(), frozenset({1}))

    def test_max_order_rejected(self):
        with pytest.raises(PreconditionError):
            star(frozenset({5}), frozenset({1, 2}))

    @given(
        st.frozensets(st.integers(0, 15), min_size=1),
        st.frozensets(st.integers(0, 15), min_size=1),
    )
    def test_result_inside_first_operand(self, x, y):
        if max(x) >= max(y):
            return
        assert star(x, y) <= x


class TestValidate:
    def test_trivial_condition_valid(self):
        p = cond(3, {0: {0}, 2: {0, 2}})
        assert validate_condition(p, table(3)).ok

    def test_uncovered_intersection_reported(self):
        p = cond(3, {0: {0}, 1: {0, 1}, 2: {0, 2}})
        rep = validate_condition(p, table(3))
        assert not rep.ok
        assert [(v.clause, v.witness) for v in rep.violations] == [("star-cover", (1, 2, 0))]

    def test_cover_set_repairs_it(self):
        p = cond(3, {0: {0}, 1: {0, 1}, 2: {0, 2}}, {(1, 2): {0}})
        assert validate_condition(p, table(3, {(1, 2): {0}})).ok

    def test_cover_outside_table_reported(self):
        p = cond(3, {0: {0}, 1: {0, 1}, 2: {0, 2}}, {(1, 2): {0}})
        rep = validate_condition(p, table(3))
        assert [v.clause for v in rep.violations] == ["i-subset-f"]

    def test_max_rule_reported(self):
        p = cond(3, {0: {0}, 2: {0}})
        rep = validate_condition(p, table(3))
        assert [v.clause for v in rep.violations] == [("max-rule")]

    def test_generated_conditions_validate(self):
        rng = random.Random(3)
        for _ in range(50):
            p, f = gen_condition(rng, rng.randint(2, 10))
            assert validate_condition(p, f).ok


class TestExtends:
    def test_reflexive(self):
        p, _, f = worked_pair()
        assert extends(p, p)

    def test_enlarged_seed_breaks_order(self):
        q = cond(3, {0: {0}, 1: {0, 1}})
        p_bad = cond(3, {0: {0}, 1: {1}})
        assert not extends(q, p_bad) and not extends(p_bad, q)

    def test_smaller_domain_never_extends(self):
        p1, _, _ = worked_pair()
        small = cond(3, {0: {0}})
        assert extends(p1, small) and not extends(small, p1)


class TestIsomorphism:
    def test_identity(self):
        p1, _, _ = worked_pair()
        e = find_isomorphism(p1, p1)
        assert e is not None and e.lower and e.source == e.target

    def test_worked_shift(self):
        p1, p2, _ = worked_pair()
        e = find_isomorphism(p1, p2)
        assert e is not None
        assert e.source == (0, 1) and e.target == (0, 2)
        assert e.lower

    def test_membership_mismatch_absent(self):
        p1, _, _ = worked_pair()
        p2 = cond(3, {0: {0}, 2: {2}})
        assert find_isomorphism(p1, p2) is None

    def test_size_mismatch_absent(self):
        p1, _, _ = worked_pair()
        assert find_isomorphism(p1, cond(3, {0: {0}})) is None

    def test_moved_overlap_absent(self):
        a = cond(4, {0: {0}, 1: {1}})
        b = cond(4, {1: {1}, 2: {2}})
        assert find_isomorphism(a, b) is None

    @given(st.integers(0, 10_000))
    def test_symmetry_with_inverse_maps(self, seed):
        rng = random.Random(seed)
        inst = gen_iso_pair(rng, rng.randint(4, 10))
        fwd = find_isomorphism(inst.p1, inst.p2)
        bwd = find_isomorphism(inst.p2, inst.p1)
        assert (fwd is None) == (bwd is None)
        assert fwd is not None
        assert bwd == fwd.inverse()


class TestDelta2:
    def test_empty_overlap_gives_empty_map(self):
        a = cond(6, {0: {0}, 1: {1}})
        b = cond(6, {2: {2}, 3: {3}})
        assert delta2(a, b).dom == frozenset()

    def test_overlap_points_are_fixed(self):
        p1 = cond(4, {0: {0}, 2: {2}})
        p2 = cond(4, {0: {0}, 3: {0, 3}})
        d = delta2(p1, p2)
        assert d.dom == frozenset({0}) and d.apply(0) == 0

    def test_new_points_project_strictly_up(self):
        p1 = cond(5, {2: {2}, 4: {4}})
        p2 = cond(5, {1: {1}, 2: {1, 2}})
        d = delta2(p1, p2)
        assert d.apply(1) == 2 and d.apply(2) == 2
        assert all(eta < d.apply(eta) for eta in d.dom - p1.D)


class TestProjection:
    def test_trivial_overlap_vacuous(self):
        a = cond(6, {0: {0}, 1: {1}})
        b = cond(6, {2: {2}, 3: {3}})
        e = find_isomorphism(a, b)
        assert check_projection(a, b, e)

    def test_holds_on_generated_pairs(self):
        rng = random.Random(17)
        for _ in range(100):
            inst = gen_iso_pair(rng, rng.randint(4, 12))
            assert check_projection(inst.p1, inst.p2, inst.e)

    def test_corrupted_second_condition_fails(self):
        p1 = cond(6, {0: {0}, 3: {0, 3}, 4: {4}})
        p2 = cond(6, {0: {0}, 3: {0, 3}, 5: {5}})
        e = find_isomorphism(p1, p2)
        assert e is not None and check_projection(p1, p2, e)
        broken = Condition(6, p2.D, {0: {0}, 3: {3}, 5: {5}}, {})
        assert not check_projection(p1, broken, e)


class TestNormalization:
    def test_empty_cover_entries_are_dropped(self):
        a = Condition(3, {0, 1}, {0: {0}, 1: {0, 1}}, {(0, 1): frozenset()})
        b = Condition(3, {0, 1}, {0: {0}, 1: {0, 1}}, {})
        assert a == b

    def test_pair_table_drops_empty_values(self):
        assert PairTable(3, {(1, 2): frozenset()}) == PairTable(3, {})
