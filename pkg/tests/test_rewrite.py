"""Constraints, redundant-join elimination, and the anti-join solver."""

import pytest

from relattice.checking import random_relation
from relattice.errors import (
    ConstraintViolationError,
    SchemaError,
    SearchSpaceError,
    UnboundNameError,
    UnsatisfiableConstraintsError,
)
from relattice.relations import antijoin, relation, universe
from relattice.rewrite import (
    ConstraintSet,
    RewriteStep,
    check_constraints,
    eliminate_redundant_joins,
    solve_antijoin,
    verify_rewrite,
)
from relattice.rng import SplitMix64
from relattice.terms import evaluate, normalize_ac, parse_term, to_text

U2 = universe({"x": ["1", "2"], "y": ["a", "b"]})
EMPDEPT = universe({"deptno": ["10", "20", "30"], "ename": ["SMITH", "JONES"]})

E = relation(["deptno", "ename"], [("10", "SMITH"), ("20", "JONES")], EMPDEPT)
D = relation(["deptno"], [("10",), ("20",)], EMPDEPT)
E0 = relation(["ename"], [("SMITH",)], EMPDEPT)
GOOD_ENV = {"E": E, "D": D, "E0": E0}

FK_PROJ = ConstraintSet(foreign_keys=(("E", "D"),), projections=(("E0", "E"),))


class TestConstraintSet:
    def test_json_round_trip(self):
        assert ConstraintSet.from_json(FK_PROJ.to_json()) == FK_PROJ

    def test_missing_keys_default_empty(self):
        c = ConstraintSet.from_json({})
        assert c.foreign_keys == () and c.projections == ()
        assert not c.require_empty_projection

    def test_bad_pair_rejected(self):
        with pytest.raises(SchemaError):
            ConstraintSet.from_json({"foreign_keys": [["E"]]})
        with pytest.raises(SchemaError):
            ConstraintSet.from_json([])

    def test_names_deduplicated(self):
        c = ConstraintSet(
            foreign_keys=(("E", "D"),), projections=(("E0", "E"), ("E0", "D"))
        )
        assert c.names() == ("E", "D", "E0")

    def test_step_rendering(self):
        step = RewriteStep(
            before=parse_term("E0 v (E ^ D)"),
            after=parse_term("E0 v E"),
            rule="redundant-join-elimination",
            justification=FK_PROJ,
        )
        assert str(step) == "E0 v E ^ D  =>  E0 v E  [redundant-join-elimination]"


class TestCheckConstraints:
    def test_satisfying_env_is_clean(self):
        assert check_constraints(FK_PROJ, GOOD_ENV) == []

    def test_dangling_tuple_names_the_foreign_key(self):
        bad_e = relation(
            ["deptno", "ename"],
            [("10", "SMITH"), ("30", "JONES")],
            EMPDEPT,
        )
        violations = check_constraints(FK_PROJ, {**GOOD_ENV, "E": bad_e})
        assert violations == ["foreign key (E, D)"]

    def test_foreign_header_names_the_projection(self):
        bad_e0 = relation(["deptno", "ename"], [], EMPDEPT)
        c = ConstraintSet(projections=(("E0", "E"),))
        env = {"E": D, "E0": bad_e0}
        assert check_constraints(c, env) == ["projection (E0, E)"]

    def test_missing_binding_raises(self):
        with pytest.raises(UnboundNameError):
            check_constraints(FK_PROJ, {"E": E, "D": D})

    def test_require_empty_projection(self):
        c = ConstraintSet(
            projections=(("E0", "E"),), require_empty_projection=True
        )
        assert check_constraints(c, GOOD_ENV) == ["empty projection (E0)"]
        empty_e0 = relation(["ename"], [], EMPDEPT)
        assert check_constraints(c, {**GOOD_ENV, "E0": empty_e0}) == []


class TestSolveAntijoin:
    def test_unmatched_employee_is_the_unique_solution(self):
        d_only_20 = relation(["deptno"], [("20",)], EMPDEPT)
        solutions = solve_antijoin(E, d_only_20, EMPDEPT)
        expected = relation(["deptno", "ename"], [("10", "SMITH")], EMPDEPT)
        assert solutions == frozenset({expected})

    def test_empty_target_leaves_everything(self):
        d_empty = relation(["deptno"], [], EMPDEPT)
        assert solve_antijoin(E, d_empty, EMPDEPT) == frozenset({E})

    def test_agrees_with_direct_antijoin(self):
        rng = SplitMix64(0xA17)
        for _ in range(40):
            e = random_relation(U2, rng=rng)
            d = random_relation(U2, rng=rng)
            assert solve_antijoin(e, d, U2) == frozenset({antijoin(e, d)})

    def test_large_header_refused(self):
        u3 = universe(
            {"a": ["1", "2", "3"], "b": ["1", "2", "3"], "c": ["1", "2", "3"]}
        )
        wide = relation(["a", "b", "c"], [], u3)
        narrow = relation(["a"], [], u3)
        with pytest.raises(SearchSpaceError, match=r"2\*\*27"):
            solve_antijoin(wide, narrow, u3)


class TestVerifyRewrite:
    def test_holds_under_both_constraints(self):
        verdict = verify_rewrite(
            parse_term("E0 v (E ^ D)"), parse_term("E0 v E"), FK_PROJ, U2,
            trials=300,
        )
        assert not verdict.found
        assert verdict.trials == 300

    def test_falsified_without_the_foreign_key(self):
        proj_only = ConstraintSet(projections=(("E0", "E"),))
        before = parse_term("E0 v (E ^ D)")
        after = parse_term("E0 v E")
        verdict = verify_rewrite(before, after, proj_only, U2, trials=300)
        assert verdict.found
        env = verdict.assignment
        assert evaluate(before, env, U2) != evaluate(after, env, U2)

    def test_identical_terms_hold_without_constraints(self):
        t = parse_term("A ^ B")
        verdict = verify_rewrite(t, t, ConstraintSet(), U2, trials=50)
        assert not verdict.found

    def test_cyclic_constraints_rejected(self):
        cyc = ConstraintSet(foreign_keys=(("A", "B"), ("B", "A")))
        with pytest.raises(UnsatisfiableConstraintsError):
            verify_rewrite(parse_term("A"), parse_term("A"), cyc, U2, trials=5)

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            verify_rewrite(parse_term("A"), parse_term("A"), ConstraintSet(),
                           U2, trials=0)


class TestEliminate:
    def test_basic_collapse(self):
        term, steps = eliminate_redundant_joins(
            parse_term("E0 v (E ^ D)"), FK_PROJ, GOOD_ENV, trials=200
        )
        assert to_text(term) == "E0 v E"
        assert len(steps) == 1
        assert steps[0].justification == FK_PROJ

    def test_operand_order_does_not_matter(self):
        term, steps = eliminate_redundant_joins(
            parse_term("(D ^ E) v E0"), FK_PROJ, GOOD_ENV, trials=200
        )
        assert len(steps) == 1
        assert normalize_ac(term) == normalize_ac(parse_term("E0 v E"))

    def test_rewrites_under_a_join(self):
        term, steps = eliminate_redundant_joins(
            parse_term("(E0 v (E ^ D)) ^ Q"), FK_PROJ, GOOD_ENV, trials=200
        )
        assert to_text(term) == "(E0 v E) ^ Q"
        assert len(steps) == 1

    def test_repeated_matches_reach_fixpoint(self):
        term, steps = eliminate_redundant_joins(
            parse_term("E0 v (E ^ D) v (E ^ D)"), FK_PROJ, GOOD_ENV, trials=200
        )
        assert to_text(term) == "E0 v E v E"
        assert len(steps) == 2

    def test_no_match_returns_input(self):
        t = parse_term("E ^ D")
        term, steps = eliminate_redundant_joins(t, FK_PROJ, GOOD_ENV, trials=50)
        assert term == t and steps == []

    def test_unrelated_meet_left_alone(self):
        t = parse_term("E0 v (E ^ E0)")
        term, steps = eliminate_redundant_joins(t, FK_PROJ, GOOD_ENV, trials=50)
        assert term == t and steps == []

    def test_violating_env_is_refused_by_name(self):
        bad_e = relation(
            ["deptno", "ename"],
            [("10", "SMITH"), ("30", "JONES")],
            EMPDEPT,
        )
        with pytest.raises(ConstraintViolationError, match=r"foreign key \(E, D\)"):
            eliminate_redundant_joins(
                parse_term("E0 v (E ^ D)"), FK_PROJ, {**GOOD_ENV, "E": bad_e}
            )
