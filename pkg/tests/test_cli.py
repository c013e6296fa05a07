"""End-to-end command line checks."""

import json
import os

import pytest
from click.testing import CliRunner

from octetgrammar.cli import main

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


@pytest.fixture
def runner():
    return CliRunner()


class TestEnumerate:
    def test_three_unique_designs(self, runner):
        result = runner.invoke(
            main, ["enumerate", "--pair", "tetra,octa", "--relation", "all"]
        )
        assert result.exit_code == 0
        assert "3 unique designs" in result.output

    def test_face_only(self, runner):
        result = runner.invoke(
            main, ["enumerate", "--pair", "tetra,octa", "--relation", "face"]
        )
        assert result.exit_code == 0
        assert "1 unique designs" in result.output

    def test_bad_relation_usage_error(self, runner):
        result = runner.invoke(
            main, ["enumerate", "--relation", "diagonal"]
        )
        assert result.exit_code == 2


class TestProducts:
    @pytest.mark.parametrize(
        "command,cells",
        [("unit", 3), ("half-module", 2), ("hex-module", 9)],
    )
    def test_product_scenes(self, runner, tmp_path, command, cells):
        out = tmp_path / "scene.json"
        result = runner.invoke(main, [command, "--out", str(out)])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())
        assert len(doc["cells"]) == cells

    def test_plate(self, runner, tmp_path):
        out = tmp_path / "plate.json"
        result = runner.invoke(
            main, ["plate", "--radius", "1", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert len(json.loads(out.read_text())["cells"]) == 13

    def test_plate_radius_zero_domain_error(self, runner, tmp_path):
        result = runner.invoke(
            main, ["plate", "--radius", "0", "--out", str(tmp_path / "x")]
        )
        assert result.exit_code == 1
        assert "circumradius" in result.output


class TestDeriveAndValidate:
    def test_derive_then_validate(self, runner, tmp_path):
        script = os.path.join(CONFIG_DIR, "fundamental_unit.script.json")
        out = tmp_path / "scene.json"
        result = runner.invoke(
            main, ["derive", "--script", script, "--out", str(out)]
        )
        assert result.exit_code == 0
        result = runner.invoke(main, ["validate", "--scene", str(out)])
        assert result.exit_code == 0
        assert "connected: ok" in result.output

    def test_derive_matches_pipeline_unit(self, runner, tmp_path):
        from octetgrammar.assembly import fingerprint
        from octetgrammar.pipeline import fundamental_unit, replay_script
        from octetgrammar.grammar import DerivationScript

        script_path = os.path.join(CONFIG_DIR, "fundamental_unit.script.json")
        with open(script_path, encoding="utf-8") as fh:
            script = DerivationScript.from_json(fh.read())
        assert fingerprint(replay_script(script)) == fingerprint(
            fundamental_unit()
        )


class TestTowerDeterminism:
    def test_byte_identical_across_runs(self, runner, tmp_path):
        config = os.path.join(CONFIG_DIR, "city_tower.json")
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            result = runner.invoke(
                main, ["tower", "--config", config, "--out", str(out)]
            )
            assert result.exit_code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_bad_config_domain_error(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"bays": 1, "wobble": true}')
        result = runner.invoke(
            main, ["tower", "--config", str(bad), "--out", str(tmp_path / "x")]
        )
        assert result.exit_code == 1
        assert "wobble" in result.output


class TestExport:
    def test_obj_from_scene(self, runner, tmp_path):
        scene = tmp_path / "scene.json"
        obj = tmp_path / "out.obj"
        assert runner.invoke(
            main, ["unit", "--out", str(scene)]
        ).exit_code == 0
        result = runner.invoke(
            main, ["export", "--scene", str(scene), "--obj", str(obj)]
        )
        assert result.exit_code == 0
        assert obj.read_text().startswith("v ")

    def test_cells_mode(self, runner, tmp_path):
        scene = tmp_path / "scene.json"
        obj = tmp_path / "out.obj"
        runner.invoke(main, ["unit", "--out", str(scene)])
        result = runner.invoke(
            main,
            ["export", "--scene", str(scene), "--obj", str(obj), "--cells"],
        )
        assert result.exit_code == 0
        assert "f " in obj.read_text()


class TestReport:
    def test_outputs_written(self, runner, tmp_path):
        scene = tmp_path / "scene.json"
        outdir = tmp_path / "report"
        runner.invoke(main, ["plate", "--radius", "2", "--out", str(scene)])
        result = runner.invoke(
            main, ["report", "--scene", str(scene), "--outdir", str(outdir)]
        )
        assert result.exit_code == 0
        for name in ("plan.png", "elevation.png", "metrics.csv"):
            target = outdir / name
            assert target.exists()
            assert target.stat().st_size > 0

    def test_metrics_totals(self, runner, tmp_path):
        scene = tmp_path / "scene.json"
        outdir = tmp_path / "report"
        runner.invoke(main, ["unit", "--out", str(scene)])
        runner.invoke(
            main, ["report", "--scene", str(scene), "--outdir", str(outdir)]
        )
        lines = (outdir / "metrics.csv").read_text().strip().splitlines()
        assert lines[-1].startswith("total")
        assert lines[-1].endswith("3")
