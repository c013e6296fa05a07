"""Session service: optimistic concurrency, undo, scene export."""

import pytest
from fastapi.testclient import TestClient

from octetgrammar.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def _create(client, initial="octa"):
    response = client.post("/sessions", json={"initial": initial})
    assert response.status_code == 200
    return response.json()


class TestCreate:
    def test_octa_session(self, client):
        doc = _create(client)
        assert len(doc["state"]["cells"]) == 1
        assert doc["state"]["fingerprint"]

    def test_fundamental_unit_session(self, client):
        doc = _create(client, "fundamental_unit")
        assert len(doc["state"]["cells"]) == 3

    def test_unknown_initial_400(self, client):
        response = client.post("/sessions", json={"initial": "pyramid"})
        assert response.status_code == 400

    def test_sessions_independent(self, client):
        a = _create(client)["id"]
        b = _create(client)["id"]
        assert a != b


class TestMatches:
    def test_24_on_bare_octa(self, client):
        sid = _create(client)["id"]
        response = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        )
        assert response.status_code == 200
        assert len(response.json()["matches"]) == 24

    def test_unknown_rule_400(self, client):
        sid = _create(client)["id"]
        response = client.get(
            f"/sessions/{sid}/matches", params={"rule": "nope"}
        )
        assert response.status_code == 400

    def test_unknown_session_404(self, client):
        response = client.get(
            "/sessions/missing/matches", params={"rule": "tetra_on_octa_face"}
        )
        assert response.status_code == 404

    def test_deterministic_bytes(self, client):
        sid = _create(client)["id"]
        a = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        )
        b = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        )
        assert a.content == b.content


class TestApplyUndo:
    def test_apply_then_undo_roundtrip(self, client):
        doc = _create(client)
        sid = doc["id"]
        original = doc["state"]["fingerprint"]
        matches = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        ).json()
        response = client.post(
            f"/sessions/{sid}/apply",
            json={"rule": "tetra_on_octa_face", "index": 0,
                  "state": matches["state"]},
        )
        assert response.status_code == 200
        assert len(response.json()["state"]["cells"]) == 2
        undone = client.post(f"/sessions/{sid}/undo")
        assert undone.status_code == 200
        assert undone.json()["state"]["fingerprint"] == original

    def test_stale_apply_409(self, client):
        doc = _create(client)
        sid = doc["id"]
        matches = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        ).json()
        first = client.post(
            f"/sessions/{sid}/apply",
            json={"rule": "tetra_on_octa_face", "index": 0,
                  "state": matches["state"]},
        )
        assert first.status_code == 200
        second = client.post(
            f"/sessions/{sid}/apply",
            json={"rule": "tetra_on_octa_face", "index": 1,
                  "state": matches["state"]},
        )
        assert second.status_code == 409

    def test_undo_empty_400(self, client):
        sid = _create(client)["id"]
        assert client.post(f"/sessions/{sid}/undo").status_code == 400

    def test_index_out_of_range_400(self, client):
        doc = _create(client)
        sid = doc["id"]
        matches = client.get(
            f"/sessions/{sid}/matches", params={"rule": "tetra_on_octa_face"}
        ).json()
        response = client.post(
            f"/sessions/{sid}/apply",
            json={"rule": "tetra_on_octa_face", "index": 99,
                  "state": matches["state"]},
        )
        assert response.status_code == 400

    def test_script_replays_to_session_state(self, client):
        """Five applies, then offline replay of the recorded script."""
        from octetgrammar.assembly import fingerprint
        from octetgrammar.grammar import DerivationScript, DerivationStep
        from octetgrammar.pipeline import replay_script

        doc = _create(client)
        sid = doc["id"]
        for _ in range(5):
            matches = client.get(
                f"/sessions/{sid}/matches",
                params={"rule": "tetra_on_octa_face"},
            ).json()
            response = client.post(
                f"/sessions/{sid}/apply",
                json={"rule": "tetra_on_octa_face", "index": 0,
                      "state": matches["state"]},
            )
            assert response.status_code == 200
        state = response.json()["state"]
        script = DerivationScript(
            state["script"]["initial"],
            tuple(
                DerivationStep(s["rule"], s["host"], s["feature"], s["variant"])
                for s in state["script"]["steps"]
            ),
        )
        assert len(script.steps) == 5
        replayed = replay_script(script)
        assert fingerprint(replayed).decode() == state["fingerprint"]


class TestScene:
    def test_cell_count(self, client):
        sid = _create(client, "fundamental_unit")["id"]
        doc = client.get(f"/sessions/{sid}/scene").json()
        assert len(doc["cells"]) == 3

    def test_roundtrips_through_parse(self, client):
        import json

        from octetgrammar.scene import parse_scene

        sid = _create(client, "fundamental_unit")["id"]
        doc = client.get(f"/sessions/{sid}/scene").json()
        scene = parse_scene(json.dumps(doc))
        assert len(scene.cells) == 3

    def test_feet_units(self, client):
        sid = _create(client)["id"]
        doc = client.get(
            f"/sessions/{sid}/scene", params={"units": "feet"}
        ).json()
        assert doc["units"] == "feet"
        assert doc["transform"] is not None

    def test_bad_units_400(self, client):
        sid = _create(client)["id"]
        response = client.get(
            f"/sessions/{sid}/scene", params={"units": "cubits"}
        )
        assert response.status_code == 400

    def test_obj_download(self, client):
        sid = _create(client, "fundamental_unit")["id"]
        response = client.get(f"/sessions/{sid}/obj")
        assert response.status_code == 200
        lines = response.text.splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == 8
        assert sum(1 for l in lines if l.startswith("l ")) == 18

    def test_obj_bad_mode_400(self, client):
        sid = _create(client)["id"]
        response = client.get(
            f"/sessions/{sid}/obj", params={"mode": "wireframe"}
        )
        assert response.status_code == 400
