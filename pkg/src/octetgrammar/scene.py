"""Scene documents (JSON) and Wavefront OBJ export.

A scene is the full downstream artifact: cells with species and tags,
the extracted frame graph, the world transform used (if any), and the
derivation script that built the assembly.  Emission is canonical so
equal scenes are byte-equal files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .assembly import Assembly
from .errors import IoFailure, SchemaViolation
from .framegraph import extract
from .geometry import Species
from .grammar import DerivationScript, DerivationStep
from .lattice import WorldTransform, to_world

_UNITS = ("lattice", "feet")
_TOP_KEYS = ("units", "transform", "cells", "frame", "provenance")
_SPECIES_NAMES = {s.value for s in Species}


@dataclass(frozen=True)
class SceneDocument:
    units: str
    transform: dict | None
    cells: tuple
    frame: dict
    provenance: dict | None


def _num(value):
    """Ints stay ints; everything else becomes float."""
    if isinstance(value, bool):
        raise SchemaViolation("/", "boolean is not a number")
    if isinstance(value, int):
        return value
    return float(value)


def scene_from_assembly(
    assembly: Assembly,
    units: str = "lattice",
    transform: WorldTransform | None = None,
) -> SceneDocument:
    """Capture an assembly (and its frame) as a scene document."""
    if units not in _UNITS:
        raise SchemaViolation("/units", f"units must be one of {_UNITS}")
    tdoc = None
    cells_src = assembly.cells
    frame_assembly = assembly
    if units == "feet":
        transform = transform or WorldTransform.with_layer_height()
        tdoc = {
            "scale": transform.scale,
            "origin": [float(c) for c in transform.origin],
            "rotation": [
                [float(x) for x in row] for row in transform.rotation.linear
            ],
        }
        cells_src = to_world(assembly, transform)
        frame_assembly = Assembly.from_cells(cells_src, tags=assembly.tags)

    cells = []
    for i, cell in enumerate(cells_src):
        cells.append(
            {
                "species": cell.species.value,
                "vertices": [[_num(c) for c in v] for v in cell.vertices],
                "tags": sorted(assembly.tag_for(i)),
            }
        )
    graph = extract(frame_assembly)
    frame = {
        "nodes": [[_num(c) for c in n] for n in graph.nodes],
        "members": [list(m) for m in graph.members],
    }
    prov = None
    script = assembly.provenance
    if isinstance(script, DerivationScript):
        prov = json.loads(script.to_json())
    return SceneDocument(units, tdoc, tuple(cells), frame, prov)


# ---------------------------------------------------------------------------
# emission / parsing

def emit_scene(scene: SceneDocument) -> str:
    """Canonical JSON text; equal scenes emit byte-equal text."""
    doc = {
        "units": scene.units,
        "transform": scene.transform,
        "cells": [dict(c) for c in scene.cells],
        "frame": scene.frame,
        "provenance": scene.provenance,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise SchemaViolation(path, message)


def _check_point(value, path, dim=3):
    _expect(isinstance(value, list) and len(value) == dim, path,
            f"expected a {dim}-element coordinate list")
    for i, c in enumerate(value):
        _expect(
            isinstance(c, (int, float)) and not isinstance(c, bool),
            f"{path}/{i}",
            "expected a number",
        )


def parse_scene(text: str) -> SceneDocument:
    """Validate and load scene JSON; violations carry a JSON-pointer path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("/", f"not valid JSON: {exc}") from exc
    _expect(isinstance(doc, dict), "/", "scene must be a JSON object")
    for key in doc:
        _expect(key in _TOP_KEYS, f"/{key}", "unknown key")
    for key in _TOP_KEYS:
        _expect(key in doc, f"/{key}", "missing required key")

    _expect(doc["units"] in _UNITS, "/units", f"must be one of {_UNITS}")

    transform = doc["transform"]
    if transform is not None:
        _expect(isinstance(transform, dict), "/transform", "must be object or null")
        _expect(
            set(transform) == {"scale", "origin", "rotation"},
            "/transform",
            "must have exactly scale, origin, rotation",
        )
        _expect(
            isinstance(transform["scale"], (int, float)) and transform["scale"] > 0,
            "/transform/scale",
            "must be a positive number",
        )
        _check_point(transform["origin"], "/transform/origin")
        rot = transform["rotation"]
        _expect(isinstance(rot, list) and len(rot) == 3, "/transform/rotation",
                "must be a 3x3 matrix")
        for i, row in enumerate(rot):
            _check_point(row, f"/transform/rotation/{i}")

    cells = doc["cells"]
    _expect(isinstance(cells, list), "/cells", "must be a list")
    for i, cell in enumerate(cells):
        path = f"/cells/{i}"
        _expect(isinstance(cell, dict), path, "must be an object")
        _expect(
            set(cell) == {"species", "vertices", "tags"},
            path,
            "must have exactly species, vertices, tags",
        )
        _expect(
            cell["species"] in _SPECIES_NAMES,
            f"{path}/species",
            f"unknown species {cell['species']!r}",
        )
        verts = cell["vertices"]
        _expect(isinstance(verts, list) and len(verts) >= 4,
                f"{path}/vertices", "expected at least 4 vertices")
        for j, v in enumerate(verts):
            _check_point(v, f"{path}/vertices/{j}")
        tags = cell["tags"]
        _expect(isinstance(tags, list), f"{path}/tags", "must be a list")
        for j, t in enumerate(tags):
            _expect(isinstance(t, str), f"{path}/tags/{j}", "must be a string")

    frame = doc["frame"]
    _expect(isinstance(frame, dict), "/frame", "must be an object")
    _expect(set(frame) == {"nodes", "members"}, "/frame",
            "must have exactly nodes, members")
    nodes = frame["nodes"]
    _expect(isinstance(nodes, list), "/frame/nodes", "must be a list")
    for i, n in enumerate(nodes):
        _check_point(n, f"/frame/nodes/{i}")
    members = frame["members"]
    _expect(isinstance(members, list), "/frame/members", "must be a list")
    for i, m in enumerate(members):
        path = f"/frame/members/{i}"
        _expect(isinstance(m, list) and len(m) == 2, path,
                "must be an index pair")
        for idx in m:
            _expect(
                isinstance(idx, int) and 0 <= idx < len(nodes),
                path,
                f"node index {idx} out of range",
            )

    prov = doc["provenance"]
    if prov is not None:
        _expect(isinstance(prov, dict), "/provenance", "must be object or null")
        _expect(set(prov) == {"initial", "steps"}, "/provenance",
                "must have exactly initial, steps")
        _expect(isinstance(prov["initial"], str), "/provenance/initial",
                "must be a string")
        _expect(isinstance(prov["steps"], list), "/provenance/steps",
                "must be a list")
        for i, s in enumerate(prov["steps"]):
            path = f"/provenance/steps/{i}"
            _expect(isinstance(s, dict) and set(s) ==
                    {"rule", "host", "feature", "variant"},
                    path, "must have exactly rule, host, feature, variant")

    return SceneDocument(
        doc["units"],
        transform,
        tuple(cells),
        frame,
        prov,
    )


def scene_script(scene: SceneDocument) -> DerivationScript | None:
    if scene.provenance is None:
        return None
    return DerivationScript(
        scene.provenance["initial"],
        tuple(
            DerivationStep(s["rule"], s["host"], s["feature"], s["variant"])
            for s in scene.provenance["steps"]
        ),
    )


# ---------------------------------------------------------------------------
# OBJ export

def _fmt(x) -> str:
    return "%.9g" % float(x)


def emit_obj(scene: SceneDocument, path=None, mode: str = "frame"):
    """Render Wavefront OBJ: the frame as line elements or cells as
    faces.  Writes to ``path`` when given; always returns the text."""
    if mode not in ("frame", "cells"):
        raise ValueError("mode must be 'frame' or 'cells'")
    lines = []
    if mode == "frame":
        nodes = scene.frame["nodes"]
        for n in nodes:
            lines.append("v " + " ".join(_fmt(c) for c in n))
        for a, b in scene.frame["members"]:
            lines.append(f"l {a + 1} {b + 1}")
    else:
        index = {}
        order = []
        for cell in scene.cells:
            for v in cell["vertices"]:
                key = tuple(round(float(c), 9) for c in v)
                if key not in index:
                    index[key] = len(order)
                    order.append(v)
        for v in order:
            lines.append("v " + " ".join(_fmt(c) for c in v))
        from .geometry import canonical_cell

        for cell in scene.cells:
            faces = canonical_cell(Species(cell["species"])).faces
            for face in faces:
                ids = [
                    index[tuple(round(float(c), 9) for c in cell["vertices"][k])]
                    + 1
                    for k in face
                ]
                lines.append("f " + " ".join(str(i) for i in ids))
    text = "\n".join(lines) + "\n"
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc
    return text
