"""Rule matching, application, derivation replay, enumeration."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octetgrammar.assembly import Assembly, LatticePlacement, fingerprint
from octetgrammar.errors import (
    CollisionDetected,
    StaleMatch,
    StepFailed,
    UnknownFeature,
    UnknownRule,
    UnsupportedRelation,
)
from octetgrammar.geometry import (
    LATTICE_SYMMETRIES,
    Species,
    interiors_overlap,
)
from octetgrammar.grammar import (
    RULES,
    DerivationScript,
    DerivationStep,
    GrammarRule,
    Relation,
    apply,
    enumerate_unique,
    find_matches,
    replay,
    seed,
)


class TestRegistry:
    def test_rule_ids(self):
        assert "tetra_on_octa_face" in RULES
        assert "octa_on_tetra_vertex" in RULES
        assert "octa_on_octa_edge" in RULES

    def test_unknown_rule(self):
        with pytest.raises(UnknownRule):
            find_matches(seed("octa"), "no_such_rule")

    def test_bad_species_class(self):
        with pytest.raises(ValueError):
            GrammarRule("x", "cube", "octa", Relation.FACE)


class TestFaceMatching:
    def test_octa_host_24_matches(self):
        matches = find_matches(seed("octa"), "tetra_on_octa_face")
        assert len(matches) == 24  # 8 faces x 3 rotational variants

    def test_match_count_divisible_by_3(self):
        for rule in ("tetra_on_octa_face", "octa_on_octa_face"):
            assert len(find_matches(seed("octa"), rule)) % 3 == 0

    def test_fundamental_unit_host_18_matches(self):
        from octetgrammar.pipeline import fundamental_unit

        matches = find_matches(fundamental_unit(), "tetra_on_octa_face")
        assert len(matches) == 18  # 2 of 8 faces already occupied

    def test_no_host_no_matches(self):
        assert find_matches(seed("tetra"), "octa_on_octa_face") == []

    def test_all_matches_collision_free(self):
        a = seed("octa")
        for m in find_matches(a, "tetra_on_octa_face"):
            for cell in a.cells:
                assert not interiors_overlap(m.cell, cell)

    def test_deterministic_order(self):
        a = seed("octa")
        keys = [(m.host, m.feature, m.variant) for m in find_matches(a, "tetra_on_octa_face")]
        assert keys == sorted(keys)


class TestApply:
    def test_volume_additivity(self):
        a = seed("octa")
        m = find_matches(a, "tetra_on_octa_face")[0]
        b = apply(a, m)
        from fractions import Fraction

        assert b.volume() == Fraction(5, 3)
        assert len(b) == 2

    def test_stale_on_reuse(self):
        a = seed("octa")
        m = find_matches(a, "tetra_on_octa_face")[0]
        b = apply(a, m)
        with pytest.raises(StaleMatch):
            apply(b, m)

    def test_provenance_recorded(self):
        a = seed("octa")
        m = find_matches(a, "tetra_on_octa_face")[0]
        b = apply(a, m)
        assert len(b.provenance.steps) == 1
        assert b.provenance.steps[0].rule == "tetra_on_octa_face"

    def test_closure_no_overlaps_after_random_growth(self):
        a = seed("octa")
        rules = ["tetra_on_octa_face", "octa_on_tetra_face"]
        for i in range(4):
            matches = find_matches(a, rules[i % 2])
            if not matches:
                break
            a = apply(a, matches[i % len(matches)])
        for x, y in itertools.combinations(a.cells, 2):
            assert not interiors_overlap(x, y)


class TestEdgeVertexCatalogs:
    def test_tetra_octa_edge_is_hinge(self):
        """No lattice placement puts a tetra and octa edge-to-edge, so
        the hinge fallback supplies the design off-lattice."""
        a = seed("octa")
        matches = find_matches(a, "tetra_on_octa_edge")
        assert matches
        for m in matches:
            hits = sum(
                1
                for v in m.cell.vertices
                for w in a.cells[0].vertices
                if sum((float(x) - float(y)) ** 2 for x, y in zip(v, w)) < 1e-18
            )
            assert hits == 2  # shares exactly the hinge edge

    def test_octa_octa_edge_on_lattice(self):
        a = seed("octa")
        matches = find_matches(a, "octa_on_octa_edge")
        assert len(matches) == 12  # one placement per edge
        for m in matches:
            assert m.cell.is_exact

    def test_vertex_catalog_shares_one_vertex(self):
        a = seed("octa")
        for m in find_matches(a, "tetra_on_octa_vertex"):
            shared = set(m.cell.vertices) & set(a.cells[0].vertices)
            assert len(shared) == 1


class TestEnumeration:
    def test_face_counts(self):
        assert len(enumerate_unique("tetra", "octa", "face")) == 1
        assert len(enumerate_unique("tetra", "tetra", "face")) == 1
        assert len(enumerate_unique("octa", "octa", "face")) == 1

    def test_tetra_octa_total_three(self):
        assert len(enumerate_unique("tetra", "octa")) == 3

    def test_per_relation_one_each(self):
        for rel in ("face", "edge", "vertex"):
            assert len(enumerate_unique("tetra", "octa", rel)) == 1

    def test_dedup_idempotent(self):
        designs = enumerate_unique("tetra", "octa")
        prints = [fingerprint(d) for d in designs]
        assert len(prints) == len(set(prints))

    def test_unsupported_relation(self):
        with pytest.raises(UnsupportedRelation):
            enumerate_unique("half_octa", "tetra", "edge")

    def test_orientation_invariance(self):
        """Enumerating from any rotated seed yields the same designs."""
        base = {
            fingerprint(d)
            for d in enumerate_unique("tetra", "octa", "face")
        }
        for sym in LATTICE_SYMMETRIES[::7]:
            host = seed("tetra").transformed_exact(sym)
            rotated = {
                fingerprint(d)
                for d in enumerate_unique("tetra", "octa", "face", host=host)
            }
            assert rotated == base


class TestReplay:
    def test_empty_script(self):
        a = replay(DerivationScript("octa"))
        assert len(a) == 1

    def test_roundtrip(self):
        a = seed("octa")
        for _ in range(2):
            a = apply(a, find_matches(a, "tetra_on_octa_face")[0])
        b = replay(a.provenance)
        assert fingerprint(a) == fingerprint(b)

    def test_fundamental_unit_script(self):
        from octetgrammar.pipeline import fundamental_unit

        script = DerivationScript(
            "octa",
            (
                DerivationStep("tetra_on_octa_face", 0, 0, 0),
                DerivationStep("tetra_on_octa_face", 0, 7, 0),
            ),
        )
        assert fingerprint(replay(script)) == fingerprint(fundamental_unit())

    def test_out_of_range_feature(self):
        script = DerivationScript(
            "octa", (DerivationStep("tetra_on_octa_face", 0, 99, 0),)
        )
        with pytest.raises(StepFailed) as exc:
            replay(script)
        assert exc.value.index == 0
        assert isinstance(exc.value.cause, UnknownFeature)

    def test_json_roundtrip(self):
        script = DerivationScript(
            "octa", (DerivationStep("tetra_on_octa_face", 0, 3, 1),)
        )
        assert DerivationScript.from_json(script.to_json()) == script

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 23), st.integers(0, 500))
    def test_two_step_replay_property(self, first, second_seed):
        """Any recorded 2-step derivation replays to the same fingerprint."""
        a = seed("octa")
        matches = find_matches(a, "tetra_on_octa_face")
        b = apply(a, matches[first])
        more = find_matches(b, "tetra_on_octa_face")
        c = apply(b, more[second_seed % len(more)])
        assert fingerprint(replay(c.provenance)) == fingerprint(c)
