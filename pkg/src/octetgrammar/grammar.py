"""Shape-grammar production system over tetra/octa cells.

A rule names a host species class, an incoming species class, and a
spatial relation.  Matching enumerates a finite discrete catalog of
placements per relation:

* face-to-face: the 3 rotational gluings of two triangles;
* edge-to-edge and vertex-to-vertex: every placement realizable on the
  honeycomb lattice in which the two cells share exactly that feature.

One species pair has no lattice edge-to-edge realization at all (a
tetra and an octa sharing exactly one edge never co-occur in the
honeycomb; every lattice edge ring is an octa-tetra-octa-tetra fan in
which each tetra is face-adjacent to both octas).  For that pair the
catalog falls back to the hinge placement: the incoming cell is folded
about the shared edge until the two dihedral wedges open away from
each other symmetrically, which is the unique placement with
anti-aligned wedge bisectors.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .assembly import Assembly, LatticePlacement, fingerprint
from .errors import (
    CollisionDetected,
    EmptyAssembly,
    StaleMatch,
    StepFailed,
    UnknownFeature,
    UnknownRule,
    UnsupportedRelation,
)
from .geometry import (
    ConvexCell,
    Isometry,
    Species,
    canonical_cell,
    face_gluings,
    interiors_overlap,
    is_fcc,
    vadd,
)


class Relation(Enum):
    FACE = "face"
    EDGE = "edge"
    VERTEX = "vertex"


#: species class names usable in rules
_CLASS_SPECIES = {
    "tetra": (Species.TETRA_UP, Species.TETRA_DOWN),
    "octa": (Species.OCTA,),
    "half_octa": (Species.HALF_OCTA,),
}

#: canonical representative used as the incoming cell of each class
_CLASS_CANONICAL = {
    "tetra": Species.TETRA_UP,
    "octa": Species.OCTA,
    "half_octa": Species.HALF_OCTA,
}


def species_class(species: Species) -> str:
    for name, members in _CLASS_SPECIES.items():
        if species in members:
            return name
    raise ValueError(f"unclassified species {species}")


def relation_supported(left: str, right: str, relation: Relation) -> bool:
    """Edge/vertex catalogs exist only for the lattice species classes."""
    if relation is Relation.FACE:
        return True
    return {left, right} <= {"tetra", "octa"}


@dataclass(frozen=True)
class GrammarRule:
    """A spatial relation between a host class and an incoming class.

    ``variant`` narrows matching to one alignment of the relation's
    discrete catalog; None admits every alignment.
    """

    id: str
    left: str
    right: str
    relation: Relation
    variant: int | None = None

    def __post_init__(self):
        if self.left not in _CLASS_SPECIES or self.right not in _CLASS_SPECIES:
            raise ValueError(f"unknown species class in rule {self.id}")


def _build_registry():
    rules = {}
    for left, right, rel in itertools.product(
        ("tetra", "octa"), ("tetra", "octa"), Relation
    ):
        rid = f"{right}_on_{left}_{rel.value}"
        rules[rid] = GrammarRule(rid, left, right, rel)
    rid = "tetra_on_half_octa_face"
    rules[rid] = GrammarRule(rid, "half_octa", "tetra", Relation.FACE)
    return rules


RULES = _build_registry()


@dataclass(frozen=True)
class Match:
    """A concrete collision-free site where a rule applies.

    ``state`` is the fingerprint of the assembly the match was computed
    against; apply rejects the match once the assembly has changed.
    """

    rule_id: str
    host: int
    feature: int
    variant: int
    isometry: Isometry
    cell: ConvexCell
    state: bytes


def _resolve_rule(rule) -> GrammarRule:
    if isinstance(rule, GrammarRule):
        return rule
    if rule not in RULES:
        raise UnknownRule(f"no rule named {rule!r}")
    return RULES[rule]


def _collides(cell: ConvexCell, cells) -> bool:
    return any(interiors_overlap(cell, other) for other in cells)


# ---------------------------------------------------------------------------
# per-relation catalogs

def _face_candidates(host_cell: ConvexCell, feature: int, incoming_species):
    """(variant, isometry, placed cell) for each rotational gluing."""
    if len(host_cell.faces[feature]) != 3:
        return []
    incoming = canonical_cell(incoming_species)
    in_face = next(
        i for i, f in enumerate(incoming.faces) if len(f) == 3
    )
    out = []
    for variant, iso in enumerate(
        face_gluings(host_cell, feature, incoming, in_face)
    ):
        placed = incoming.transformed(iso)
        snapped = placed.snapped()
        out.append((variant, iso, snapped if snapped is not None else placed))
    return out


def _feature_lattice_candidates(host_cell, feature_vertices, right):
    """Lattice placements of the incoming class sharing exactly the feature.

    Enumerates anchors in a bounding box around the feature; the shared
    vertex set must equal the feature's vertices exactly.
    """
    host_verts = set(host_cell.vertices)
    want = set(feature_vertices)
    center = feature_vertices[0]
    found = []
    for species in _CLASS_SPECIES[right]:
        for dx in range(-3, 4):
            for dy in range(-3, 4):
                for dz in range(-3, 4):
                    anchor = vadd(center, (dx, dy, dz))
                    if not is_fcc(anchor):
                        continue
                    placement = LatticePlacement(species, anchor)
                    shared = host_verts & set(placement.vertices())
                    if shared == want:
                        found.append(placement)
    found.sort(key=lambda p: p.key())
    out = []
    for variant, placement in enumerate(found):
        cell = placement.cell()
        if not interiors_overlap(cell, host_cell):
            t = np.array([float(c) for c in placement.anchor])
            out.append((variant, Isometry(np.eye(3), t), cell))
    return out


def _wedge_frame(cell: ConvexCell, va, vb):
    """Orthonormal (edge, wedge-bisector, normal) frame of a cell edge."""
    a = np.array([float(c) for c in va])
    b = np.array([float(c) for c in vb])
    mid = (a + b) / 2.0
    u = b - a
    u /= np.linalg.norm(u)
    c = np.array([float(x) for x in cell.centroid()])
    w = c - mid
    w -= u * (w @ u)
    w /= np.linalg.norm(w)
    return mid, u, w, np.cross(u, w)


def _hinge_candidates(host_cell: ConvexCell, feature_vertices, right):
    """Anti-aligned hinge placements of the incoming cell on a host edge.

    The incoming cell's wedge bisector points exactly opposite the
    host's, so the pair shares only the hinge edge; both edge
    orientations are enumerated for every incoming edge.
    """
    va, vb = feature_vertices
    mid_h, u_h, w_h, _ = _wedge_frame(host_cell, va, vb)
    incoming = canonical_cell(_CLASS_CANONICAL[right])
    out = []
    variant = 0
    for i0, i1 in incoming.edges():
        mid_i, u_i, w_i, n_i = _wedge_frame(
            incoming, incoming.vertices[i0], incoming.vertices[i1]
        )
        src = np.vstack([u_i, w_i, n_i])
        for flip in (1.0, -1.0):
            u = u_h * flip
            w = -w_h
            dst = np.vstack([u, w, np.cross(u, w)])
            rot = dst.T @ src
            iso = Isometry(rot, mid_h - rot @ mid_i)
            placed = incoming.transformed(iso)
            snapped = placed.snapped()
            if snapped is not None:
                placed = snapped
            if not interiors_overlap(placed, host_cell):
                out.append((variant, iso, placed))
            variant += 1
    return out


_TETRA_OCTA_EDGE = frozenset(("tetra", "octa"))


def _relation_candidates(host_cell, rule, feature):
    if rule.relation is Relation.FACE:
        if feature >= len(host_cell.faces):
            raise UnknownFeature(f"face {feature} out of range")
        return _face_candidates(
            host_cell, feature, _CLASS_CANONICAL[rule.right]
        )
    if rule.relation is Relation.EDGE:
        edges = host_cell.edges()
        if feature >= len(edges):
            raise UnknownFeature(f"edge {feature} out of range")
        i0, i1 = edges[feature]
        verts = (host_cell.vertices[i0], host_cell.vertices[i1])
        if frozenset((rule.left, rule.right)) == _TETRA_OCTA_EDGE:
            return _hinge_candidates(host_cell, verts, rule.right)
        return _feature_lattice_candidates(host_cell, verts, rule.right)
    if feature >= len(host_cell.vertices):
        raise UnknownFeature(f"vertex {feature} out of range")
    return _feature_lattice_candidates(
        host_cell, (host_cell.vertices[feature],), rule.right
    )


def _feature_count(host_cell: ConvexCell, relation: Relation) -> int:
    if relation is Relation.FACE:
        return len(host_cell.faces)
    if relation is Relation.EDGE:
        return len(host_cell.edges())
    return len(host_cell.vertices)


def find_matches(assembly: Assembly, rule) -> list[Match]:
    """Every collision-free application site, ordered by (host, feature, variant)."""
    rule = _resolve_rule(rule)
    if len(assembly) == 0:
        raise EmptyAssembly("cannot match against an empty assembly")
    cells = assembly.cells
    state = fingerprint(assembly)
    matches = []
    for host, host_cell in enumerate(cells):
        if species_class(host_cell.species) != rule.left:
            continue
        if (
            rule.relation is not Relation.FACE
            and not host_cell.is_exact
        ):
            continue
        for feature in range(_feature_count(host_cell, rule.relation)):
            for variant, iso, placed in _relation_candidates(
                host_cell, rule, feature
            ):
                if rule.variant is not None and variant != rule.variant:
                    continue
                if _collides(placed, cells):
                    continue
                matches.append(
                    Match(rule.id, host, feature, variant, iso, placed, state)
                )
    return matches


def apply(assembly: Assembly, match: Match) -> Assembly:
    """Add the matched cell; the match must target this exact state."""
    if match.state != fingerprint(assembly):
        raise StaleMatch("match was computed against a different state")
    if _collides(match.cell, assembly.cells):
        raise CollisionDetected("matched cell overlaps the assembly")
    step = DerivationStep(
        match.rule_id, match.host, match.feature, match.variant
    )
    prov = assembly.provenance
    if isinstance(prov, DerivationScript):
        prov = DerivationScript(prov.initial, prov.steps + (step,))
    return assembly.with_cell(match.cell, provenance=prov)


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class DerivationStep:
    rule: str
    host: int
    feature: int
    variant: int


@dataclass(frozen=True)
class DerivationScript:
    """A replayable record: an initial shape plus ordered rule applications."""

    initial: str
    steps: tuple = ()

    def to_json(self) -> str:
        return json.dumps(
            {
                "initial": self.initial,
                "steps": [
                    {
                        "rule": s.rule,
                        "host": s.host,
                        "feature": s.feature,
                        "variant": s.variant,
                    }
                    for s in self.steps
                ],
            },
            indent=2,
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "DerivationScript":
        doc = json.loads(text)
        return DerivationScript(
            doc["initial"],
            tuple(
                DerivationStep(
                    s["rule"], s["host"], s["feature"], s["variant"]
                )
                for s in doc["steps"]
            ),
        )


_SEED_SPECIES = {
    "tetra": Species.TETRA_UP,
    "tetra_up": Species.TETRA_UP,
    "tetra_down": Species.TETRA_DOWN,
    "octa": Species.OCTA,
    "half_octa": Species.HALF_OCTA,
}


def seed(name: str) -> Assembly:
    """Single-cell assembly for an initial shape name, provenance attached."""
    if name not in _SEED_SPECIES:
        raise UnknownRule(f"unknown initial shape {name!r}")
    base = Assembly.single(_SEED_SPECIES[name])
    prov = DerivationScript(name)
    if base.is_lattice:
        return Assembly(placements=base.placements, provenance=prov)
    return Assembly(free_cells=base.cells, provenance=prov)


def replay(script: DerivationScript, initial: Assembly | None = None) -> Assembly:
    """Re-derive an assembly step by step; failures carry the step index."""
    assembly = initial if initial is not None else seed(script.initial)
    for index, step in enumerate(script.steps):
        try:
            rule = _resolve_rule(step.rule)
            chosen = None
            for m in find_matches(assembly, rule):
                if (m.host, m.feature, m.variant) == (
                    step.host,
                    step.feature,
                    step.variant,
                ):
                    chosen = m
                    break
            if chosen is None:
                raise UnknownFeature(
                    f"no match at host {step.host} feature {step.feature} "
                    f"variant {step.variant}"
                )
            assembly = apply(assembly, chosen)
        except StepFailed:
            raise
        except Exception as exc:
            raise StepFailed(index, exc) from exc
    return assembly


# ---------------------------------------------------------------------------
# enumeration

def enumerate_unique(left: str, right: str, relation=None, host: Assembly | None = None):
    """All two-cell designs of a species pair, deduplicated by congruence.

    ``relation`` is one Relation, its value string, or None for the
    union over all three relations.
    """
    if relation is None or relation == "all":
        relations = list(Relation)
    else:
        relations = [
            relation if isinstance(relation, Relation) else Relation(relation)
        ]
    base = host if host is not None else seed(left)
    results = {}
    for rel in relations:
        if not relation_supported(left, right, rel):
            raise UnsupportedRelation(
                f"{rel.value} unsupported for ({left}, {right})"
            )
        rule = GrammarRule(f"enum_{rel.value}", left, right, rel)
        for match in find_matches(base, rule):
            design = apply(base, match)
            results.setdefault(fingerprint(design), design)
    return [results[k] for k in sorted(results)]
