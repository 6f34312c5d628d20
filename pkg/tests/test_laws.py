"""Catalogue shape, statuses, witnesses, and premise coverage."""

import pytest

from relattice.checking import check_law, default_universe, sweep_universes
from relattice.laws import (
    LawStatus,
    SLA_IDS,
    law_by_id,
    law_catalogue,
    resolve_law_ids,
)
from relattice.terms import evaluate


CATALOGUE = law_catalogue()
BY_STATUS = {
    status: [law for law in CATALOGUE if law.status is status] for status in LawStatus
}


class TestShape:
    def test_ids_unique(self):
        ids = [law.id for law in CATALOGUE]
        assert len(ids) == len(set(ids))

    def test_counts(self):
        assert len(CATALOGUE) == 31
        assert len(BY_STATUS[LawStatus.VALID]) == 27
        assert len(BY_STATUS[LawStatus.INVALID]) == 3
        assert len(BY_STATUS[LawStatus.OPEN]) == 1

    def test_axioms_have_no_assumptions(self):
        axioms = [
            law.id
            for law in BY_STATUS[LawStatus.VALID]
            if law.assumptions is None
        ]
        assert set(SLA_IDS) <= set(axioms)
        assert {"fda", "fda-inv", "sdc", "dch"} <= set(axioms)
        assert len(axioms) == 10

    def test_every_law_statement_parses_to_text(self):
        for law in CATALOGUE:
            assert law.text
            assert str(law.statement)

    def test_header_domain_equiv_is_the_only_iff(self):
        iffs = [law.id for law in CATALOGUE if law.iff]
        assert iffs == ["header-domain-equiv"]


class TestResolution:
    def test_sla_alias_expands(self):
        assert resolve_law_ids(["SLA"]) == SLA_IDS

    def test_inverse_alias_spellings(self):
        assert resolve_law_ids(["FDA-INV"]) == ("fda-inv",)
        assert resolve_law_ids(["FDA⁻¹"]) == ("fda-inv",)

    def test_unknown_id_raises(self):
        with pytest.raises(KeyError):
            law_by_id("no-such-law")

    def test_duplicates_collapse(self):
        assert resolve_law_ids(["fda", "FDA", "fda"]) == ("fda",)


class TestWitnesses:
    """Stored counterexamples replay through the plain evaluator."""

    @pytest.mark.parametrize(
        "law_id", ["fda-dual", "r00-join-not-hom", "r11-meet-not-hom"]
    )
    def test_witness_falsifies(self, law_id):
        law = law_by_id(law_id)
        w = law.witness
        assert w is not None
        imp = law.statement
        for eq in imp.premises:
            assert evaluate(eq.lhs, w.assignment, w.universe) == evaluate(
                eq.rhs, w.assignment, w.universe
            )
        eq = imp.conclusion
        assert evaluate(eq.lhs, w.assignment, w.universe) != evaluate(
            eq.rhs, w.assignment, w.universe
        )

    def test_fda_dual_witness_is_the_three_tuple_relation(self):
        w = law_by_id("fda-dual").witness
        assert w.assignment["x"].rows == {("1", "a"), ("1", "b"), ("2", "a")}


class TestVerdicts:
    @pytest.mark.parametrize("law", BY_STATUS[LawStatus.VALID], ids=lambda l: l.id)
    def test_valid_laws_hold_on_default_universe(self, law):
        verdict = check_law(law, default_universe(), trials=1000, seed=42)
        assert not verdict.found, verdict

    @pytest.mark.parametrize("law", BY_STATUS[LawStatus.INVALID], ids=lambda l: l.id)
    def test_invalid_laws_fall_within_bounded_search(self, law):
        verdict = check_law(law, default_universe(), trials=1000, seed=42)
        assert verdict.found

    def test_open_law_is_reported_not_asserted(self):
        law = law_by_id("or-over-meet")
        verdict = check_law(law, default_universe(), trials=500, seed=42)
        assert hasattr(verdict, "found")

    def test_valid_laws_hold_on_degenerate_universe(self):
        from relattice.relations import universe

        u0 = universe({})
        for law in BY_STATUS[LawStatus.VALID]:
            verdict = check_law(law, u0, trials=200, seed=7)
            assert not verdict.found, law.id


class TestPremiseCoverage:
    """Conditioned sampling keeps premise-bearing laws non-vacuous."""

    @pytest.mark.parametrize(
        "law_id",
        ["sdc", "union-over-join-criterion", "header-domain-equiv", "sdc-domain-form"],
    )
    def test_premises_hit_at_least_five_percent(self, law_id):
        law = law_by_id(law_id)
        for u in (default_universe(), sweep_universes()[-1]):
            verdict = check_law(law, u, trials=1000, seed=42)
            assert not verdict.found
            hit_fraction = (verdict.trials - verdict.vacuous) / verdict.trials
            assert hit_fraction >= 0.05, (law_id, hit_fraction)
