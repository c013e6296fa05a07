"""Scene document round trips, schema validation, OBJ export."""

import json
from fractions import Fraction

import pytest

from octetgrammar.errors import SchemaViolation
from octetgrammar.framegraph import extract
from octetgrammar.grammar import seed
from octetgrammar.pipeline import TowerParams, build_tower, fundamental_unit
from octetgrammar.scene import (
    emit_obj,
    emit_scene,
    parse_scene,
    scene_from_assembly,
    scene_script,
)


@pytest.fixture
def unit_scene():
    return scene_from_assembly(fundamental_unit())


class TestRoundTrip:
    def test_emit_parse_identity(self, unit_scene):
        text = emit_scene(unit_scene)
        assert parse_scene(text) == unit_scene

    def test_reemit_byte_identical(self, unit_scene):
        text = emit_scene(unit_scene)
        assert emit_scene(parse_scene(text)) == text

    def test_tower_cell_count_preserved(self):
        tower = build_tower(TowerParams(plan=Fraction(1)))
        scene = scene_from_assembly(tower, units="feet")
        parsed = parse_scene(emit_scene(scene))
        assert len(parsed.cells) == len(tower)
        assert parsed.units == "feet"
        assert parsed.transform is not None

    def test_tags_preserved(self):
        tower = build_tower(TowerParams(plan=Fraction(1)))
        scene = parse_scene(emit_scene(scene_from_assembly(tower)))
        tags = {t for c in scene.cells for t in c["tags"]}
        assert "CAPITAL" in tags
        assert "FLOOR" in tags

    def test_script_preserved(self, unit_scene):
        script = scene_script(parse_scene(emit_scene(unit_scene)))
        assert script.initial == "fundamental_unit"


class TestSchemaValidation:
    def _doc(self):
        return json.loads(emit_scene(scene_from_assembly(seed("octa"))))

    def test_missing_cells(self):
        doc = self._doc()
        del doc["cells"]
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path == "/cells"

    def test_unknown_top_key(self):
        doc = self._doc()
        doc["color"] = "red"
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path == "/color"

    def test_bad_species_path(self):
        doc = self._doc()
        doc["cells"][0]["species"] = "cube"
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path == "/cells/0/species"

    def test_bad_vertex_path(self):
        doc = self._doc()
        doc["cells"][0]["vertices"][2] = [1, 2]
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path == "/cells/0/vertices/2"

    def test_member_out_of_range(self):
        doc = self._doc()
        doc["frame"]["members"][0] = [0, 999]
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path.startswith("/frame/members/0")

    def test_bad_units(self):
        doc = self._doc()
        doc["units"] = "meters"
        with pytest.raises(SchemaViolation) as exc:
            parse_scene(json.dumps(doc))
        assert exc.value.path == "/units"

    def test_not_json(self):
        with pytest.raises(SchemaViolation):
            parse_scene("not json {")


class TestObjExport:
    def test_tetra_faces(self, tmp_path):
        scene = scene_from_assembly(seed("tetra"))
        text = emit_obj(scene, tmp_path / "t.obj", mode="cells")
        lines = text.splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == 4
        assert sum(1 for l in lines if l.startswith("f ")) == 4

    def test_frame_counts_match_graph(self, tmp_path, unit_scene):
        graph = extract(fundamental_unit())
        text = emit_obj(unit_scene, tmp_path / "fu.obj", mode="frame")
        lines = text.splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == len(graph.nodes)
        assert sum(1 for l in lines if l.startswith("l ")) == len(graph.members)

    def test_deterministic(self, tmp_path, unit_scene):
        a = emit_obj(unit_scene, tmp_path / "a.obj")
        b = emit_obj(unit_scene, tmp_path / "b.obj")
        assert a == b
        assert (tmp_path / "a.obj").read_bytes() == (
            tmp_path / "b.obj"
        ).read_bytes()

    def test_indices_one_based(self, tmp_path, unit_scene):
        text = emit_obj(unit_scene, tmp_path / "x.obj", mode="frame")
        for line in text.splitlines():
            if line.startswith("l "):
                a, b = (int(x) for x in line.split()[1:])
                assert a >= 1 and b >= 1
