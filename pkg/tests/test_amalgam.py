"""Amalgamation: hypotheses, the construction, star traces, and the oracle."""

import random

import pytest

from forcelab import (
    AmalgamationError,
    PreconditionError,
    amalgamate_asymmetric,
    brute_force_common_extension,
    check_amalgam_hypotheses,
    check_star_projection,
    extends,
    find_isomorphism,
    transfer_holds,
    validate_condition,
)
from forcelab.conditions import delta2
from forcelab.generators import gen_iso_pair

from helpers import cond, table, worked_pair


class TestHypotheses:
    def test_disjoint_domains_with_rich_table(self):
        p1 = cond(4, {0: {0}, 1: {0, 1}})
        p2 = cond(4, {2: {2}, 3: {2, 3}})
        f = table(4, {(0, 2): {}, (1, 2): {0}, (0, 3): {}, (1, 3): {0}})
        e = find_isomorphism(p1, p2)
        hyp = check_amalgam_hypotheses(p1, p2, e, f)
        assert hyp.cond_a_ok and hyp.ok

    def test_worked_pair_passes(self):
        p1, p2, f = worked_pair()
        e = find_isomorphism(p1, p2)
        assert check_amalgam_hypotheses(p1, p2, e, f).ok

    def test_missing_trace_reported_with_witness(self):
        p1, p2, _ = worked_pair()
        e = find_isomorphism(p1, p2)
        hyp = check_amalgam_hypotheses(p1, p2, e, table(3))
        assert not hyp.ok
        assert (0, 1, 2, "B(ii)") in hyp.cond_b_failures

    def test_cover_disagreement_breaks_first_hypothesis(self):
        # identical shape over the shared part, but only the first condition
        # cites a cover for the shared pair (1, 2); both are still valid
        f = table(6, {(1, 2): {0}, (4, 5): {0, 1, 2}})
        shape = {0: {0}, 1: {0, 1}, 2: {0, 1, 2}}
        p1 = cond(6, {**shape, 4: {4}}, {(1, 2): {0}})
        p2 = cond(6, {**shape, 5: {5}})
        assert validate_condition(p1, f).ok and validate_condition(p2, f).ok
        e = find_isomorphism(p1, p2)
        assert e is not None and e.lower
        hyp = check_amalgam_hypotheses(p1, p2, e, f)
        assert not hyp.cond_a_ok
        assert hyp.cond_a_failures == [(1, 2)]
        assert not hyp.cond_b_failures


class TestAmalgamate:
    def test_worked_example_exactly(self):
        p1, p2, f = worked_pair()
        e = find_isomorphism(p1, p2)
        q = amalgamate_asymmetric(p1, p2, e, f)
        assert q == cond(3, {0: {0}, 1: {0, 1}, 2: {0, 1, 2}}, {(1, 2): {0}})
        assert validate_condition(q, f).ok
        assert extends(q, p1) and extends(q, p2)
        assert transfer_holds(p1, p2, e, q)

    def test_self_amalgam_is_identity(self):
        p1, _, f = worked_pair()
        e = find_isomorphism(p1, p1)
        assert amalgamate_asymmetric(p1, p1, e, f) == p1

    def test_disjoint_singletons(self):
        p1 = cond(4, {1: {1}})
        p2 = cond(4, {3: {3}})
        e = find_isomorphism(p1, p2)
        q = amalgamate_asymmetric(p1, p2, e, table(4))
        # the transfer property forces the pullback membership 1 in h_q(3)
        assert q == cond(4, {1: {1}, 3: {1, 3}})
        assert transfer_holds(p1, p2, e, q)
        assert validate_condition(q, table(4)).ok

    def test_hypothesis_failure_raises_with_report(self):
        p1, p2, _ = worked_pair()
        e = find_isomorphism(p1, p2)
        with pytest.raises(AmalgamationError) as err:
            amalgamate_asymmetric(p1, p2, e, table(3))
        assert not err.value.hypotheses.ok

    def test_wrong_bijection_rejected(self):
        p1, p2, f = worked_pair()
        e = find_isomorphism(p2, p1)  # not lower in this direction
        with pytest.raises(PreconditionError):
            amalgamate_asymmetric(p2, p1, e, f)


class TestStarProjection:
    def test_trivial_enlargement(self):
        p1, _, _ = worked_pair()
        assert check_star_projection(p1, p1.D, dict(p1.h), {})

    def test_worked_amalgam_both_maps(self):
        p1, p2, f = worked_pair()
        e = find_isomorphism(p1, p2)
        q = amalgamate_asymmetric(p1, p2, e, f)
        d2m = delta2(p1, p2)
        assert check_star_projection(p1, q.D, dict(q.h), dict(d2m.values))
        assert check_star_projection(p2, q.D, dict(q.h), dict(zip(e.source, e.target)))

    def test_dropped_preimage_point_detected(self):
        # frozen seed whose amalgam has a base-pair star set reaching outside
        rng = random.Random(12)
        inst = gen_iso_pair(rng, 10)
        q = amalgamate_asymmetric(inst.p1, inst.p2, inst.e, inst.f)
        d2m = delta2(inst.p1, inst.p2)
        g = dict(d2m.values)
        assert check_star_projection(inst.p1, q.D, dict(q.h), g)
        bad_h = dict(q.h)
        bad_h[7] = q.h[7] - {2}
        assert not check_star_projection(inst.p1, q.D, bad_h, g)

    def test_map_must_fix_shared_part(self):
        p1, _, _ = worked_pair()
        with pytest.raises(PreconditionError):
            check_star_projection(p1, p1.D, dict(p1.h), {0: 1})


class TestOracle:
    def test_worked_pair_has_extension(self):
        p1, p2, f = worked_pair()
        w = brute_force_common_extension(p1, p2, f)
        assert w is not None
        assert validate_condition(w, f).ok
        assert extends(w, p1) and extends(w, p2)

    def test_equal_inputs_return_the_condition(self):
        p1, _, f = worked_pair()
        assert brute_force_common_extension(p1, p1, f) == p1

    def test_conflicting_seeds_have_no_extension(self):
        p1 = cond(3, {0: {0}, 1: {1}})
        p2 = cond(3, {0: {0}, 1: {0, 1}})
        assert brute_force_common_extension(p1, p2, table(3)) is None

    def test_universe_bound_enforced(self):
        p = cond(9, {0: {0}})
        with pytest.raises(PreconditionError):
            brute_force_common_extension(p, p, table(9))

    def test_certifies_the_construction(self):
        rng = random.Random(23)
        for _ in range(40):
            inst = gen_iso_pair(rng, rng.randint(4, 7))
            q = amalgamate_asymmetric(inst.p1, inst.p2, inst.e, inst.f)
            assert validate_condition(q, inst.f).ok
            assert extends(q, inst.p1) and extends(q, inst.p2)
            assert brute_force_common_extension(inst.p1, inst.p2, inst.f) is not None
