"""Abstract lattice enumeration, validation, and separating-model search."""

import pytest

from relattice.errors import SearchSpaceError
from relattice.laws import SLA_IDS
from relattice.lattices import (
    check_model,
    enumerate_lattices,
    find_separating_model,
    is_diamond,
    is_pentagon,
    lattice_count,
    model_dot,
    model_report,
    replay,
    validate_lattice,
)

SLA = list(SLA_IDS)


class TestEnumeration:
    def test_labeled_counts(self):
        assert [lattice_count(n) for n in range(1, 6)] == [1, 2, 6, 36, 380]

    def test_isomorphism_classes(self):
        counts = [sum(1 for _ in enumerate_lattices(n, dedup=True)) for n in range(1, 6)]
        assert counts == [1, 1, 1, 2, 5]

    def test_size_bounds(self):
        with pytest.raises(SearchSpaceError):
            list(enumerate_lattices(0))
        with pytest.raises(SearchSpaceError):
            list(enumerate_lattices(8))

    def test_n5_census_has_both_named_shapes(self):
        shapes = list(enumerate_lattices(5))
        assert sum(1 for lat in shapes if is_diamond(lat)) == 20
        assert sum(1 for lat in shapes if is_pentagon(lat)) == 120

    def test_diamonds_enumerate_before_pentagons(self):
        shapes = list(enumerate_lattices(5))
        first_diamond = next(i for i, lat in enumerate(shapes) if is_diamond(lat))
        first_pentagon = next(i for i, lat in enumerate(shapes) if is_pentagon(lat))
        assert first_diamond < first_pentagon


class TestValidator:
    def test_all_small_tables_pass(self):
        for n in range(1, 5):
            for lat in enumerate_lattices(n):
                assert validate_lattice(lat) == []

    def test_sample_at_five_passes(self):
        for lat in list(enumerate_lattices(5))[::41]:
            assert validate_lattice(lat) == []

    def test_validator_catches_a_broken_table(self):
        from dataclasses import replace

        lat = next(iter(enumerate_lattices(3)))
        bad = list(lat.meet)
        bad[1] = (bad[1] + 1) % lat.n
        assert validate_lattice(replace(lat, meet=tuple(bad)))


class TestCheckModel:
    def test_two_chain_bottom_designation(self):
        """r00 = r11 = bottom satisfies the decomposition axiom but not its
        inverse, with the top element as witness."""
        chain = next(iter(enumerate_lattices(2)))
        cand = chain.designate(chain.bottom, chain.bottom)
        assert check_model(cand, SLA + ["fda"]) is None
        hit = check_model(cand, ["fda-inv"])
        assert hit is not None
        assert hit.assignment == {"x": chain.top}
        assert replay(hit)

    def test_two_chain_top_designation_breaks_fda(self):
        chain = next(iter(enumerate_lattices(2)))
        cand = chain.designate(chain.top, chain.top)
        assert check_model(cand, ["fda"]) is not None

    def test_designation_required_for_constant_laws(self):
        lat = next(iter(enumerate_lattices(2)))
        with pytest.raises(ValueError):
            check_model(lat, ["fda"])

    def test_sla_holds_on_every_enumerated_lattice(self):
        for lat in enumerate_lattices(3):
            assert check_model(lat.designate(0, 0), SLA) is None


class TestSeparation:
    def test_fda_needs_more_than_sla(self):
        got = find_separating_model(SLA, "fda", max_size=3)
        assert got is not None
        lat, cx = got
        assert lat.n == 2
        assert replay(cx)

    def test_fda_inv_needs_more_than_fda(self):
        got = find_separating_model(SLA + ["fda"], "fda-inv", max_size=3)
        assert got is not None
        lat, cx = got
        assert lat.n == 2
        assert (lat.r00, lat.r11) == (lat.bottom, lat.bottom)
        assert cx.assignment == {"x": lat.top}

    def test_sdc_separated_by_the_diamond(self):
        got = find_separating_model(SLA + ["fda", "fda-inv"], "sdc", max_size=5)
        assert got is not None
        lat, cx = got
        assert is_diamond(lat)
        assert replay(cx)

    def test_dch_separated_by_the_pentagon(self):
        got = find_separating_model(
            SLA + ["fda", "fda-inv", "sdc"], "dch", max_size=5
        )
        assert got is not None
        lat, cx = got
        assert is_pentagon(lat)
        assert replay(cx)

    def test_theorem_has_no_small_countermodel(self):
        got = find_separating_model(
            SLA + ["fda", "fda-inv", "sdc", "dch"], "dch-dual", max_size=4
        )
        assert got is None

    def test_max_size_is_capped(self):
        with pytest.raises(SearchSpaceError):
            find_separating_model(SLA, "fda", max_size=9)


class TestReplayIndependence:
    def test_tampered_assignment_fails_replay(self):
        from dataclasses import replace

        got = find_separating_model(SLA + ["fda", "fda-inv"], "sdc", max_size=5)
        lat, cx = got
        wrong = dict(cx.assignment)
        wrong["x"] = lat.bottom
        wrong["y"] = lat.bottom
        wrong["z"] = lat.bottom
        assert not replay(replace(cx, assignment=wrong))


class TestReports:
    def test_report_mentions_shape_and_designation(self):
        got = find_separating_model(SLA + ["fda", "fda-inv"], "sdc", max_size=5)
        lat, cx = got
        text = model_report(lat, cx)
        assert "diamond" in text
        assert "R00 =" in text and "falsifies: sdc" in text

    def test_dot_has_one_node_per_element(self):
        lat = next(iter(enumerate_lattices(3))).designate(0, 2)
        dot = model_dot(lat)
        assert dot.count("[label=") == 3
        assert dot.startswith("digraph")
