"""From the two seed solids to a parametric tower.

The chain: fundamental unit (2 tetra + 1 octa) -> half-module
(half-octa + tetra) -> hexagonal module (the content of six
half-modules with a regular hexagonal footprint) -> gapless layer
tilings -> hexagonal floor plates -> stacked, twisted tower bays.

Everything stays in exact lattice arithmetic except the half-module,
whose half-octa is not a honeycomb cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import json

from .assembly import Assembly, LatticePlacement
from .errors import EmptyRegion, InvalidParams, UnknownRule
from .geometry import Species, canonical_cell, vadd
from .grammar import DerivationScript
from .lattice import (
    DOWN_TETRA_BASE,
    FEET_PER_LAYER,
    HexagonRegion,
    PeriodRect,
    PLAN_A,
    cell_layer,
    slab_placements,
    twist_symmetry,
)

#: plan center of an octa axis; hexagon plates centered here have exact
#: 6-fold plan symmetry (the plan origin, a tetra axis, only gives 3-fold)
PLATE_CENTER = (Fraction(2, 3), Fraction(1, 3))


def _product(placements, name: str) -> Assembly:
    return Assembly.from_placements(
        sorted(placements, key=lambda p: p.key()),
        provenance=DerivationScript(name),
    )


def fundamental_unit() -> Assembly:
    """One octa with tetras face-glued on two antipodal faces.

    The up tetra sits on the octa's upper-left face and the down tetra
    on the point-opposite lower-right face; the trio tiles its layer
    under the two plan period translations.  Volume exactly 2.
    """
    return _product(
        [
            LatticePlacement(Species.OCTA, (0, 0, 0)),
            LatticePlacement(Species.TETRA_UP, (0, 0, 0)),
            LatticePlacement(Species.TETRA_DOWN, DOWN_TETRA_BASE),
        ],
        "fundamental_unit",
    )


def half_module() -> Assembly:
    """Half-octa plus one face-glued tetra: half a fundamental unit.

    The square base stays exposed; gluing two half-modules base to base
    reassembles an octa between the two tetras.  Volume exactly 1.
    """
    return Assembly.from_cells(
        [
            canonical_cell(Species.HALF_OCTA),
            canonical_cell(Species.TETRA_UP),
        ],
        provenance=DerivationScript("half_module"),
    )


#: the hexagonal module: 3 octas + 6 tetras (the cell content of six
#: half-modules) whose plan hull is a regular hexagon of edge sqrt(6)
#: and which tiles the layer exactly under _MODULE_TILING_VECTORS
_HEX_MODULE_ANCHORS = (
    (Species.OCTA, (-2, 1, 1)),
    (Species.OCTA, (0, 1, -1)),
    (Species.OCTA, (0, -1, 1)),
    (Species.TETRA_DOWN, (0, -1, -1)),
    (Species.TETRA_DOWN, (-2, 1, -1)),
    (Species.TETRA_DOWN, (-2, -1, 1)),
    (Species.TETRA_UP, (0, 0, 0)),
    (Species.TETRA_UP, (-1, 0, 1)),
    (Species.TETRA_UP, (-1, 1, 0)),
)

#: index-3 sublattice of the layer's period lattice: the module is an
#: exact transversal, so its translates under these vectors tile the
#: layer with zero deficit
MODULE_TILING_VECTORS = ((1, -2, 1), (1, 1, -2))


def hexagonal_module() -> Assembly:
    """Nine cells with a regular hexagonal footprint that tile the layer.

    No arrangement of this honeycomb's cells is simultaneously
    hexagonal, 3-fold symmetric about a vertical axis, and an exact
    tiling unit, so the module trades the rotational symmetry for the
    exact-tiling property: volume exactly 6 and zero-deficit coverage
    under MODULE_TILING_VECTORS, with the hexagonal plan hull intact.
    """
    return _product(
        [LatticePlacement(sp, a) for sp, a in _HEX_MODULE_ANCHORS],
        "hexagonal_module",
    )


def hexagonal_module_triplet() -> Assembly:
    """Three module translates arranged with 3-fold plan symmetry.

    The three offsets are one tiling vector and its two 120-degree
    rotations (which sum to zero), so the translates are disjoint and
    sit inside a common floor plate.
    """
    module = hexagonal_module()
    v = MODULE_TILING_VECTORS[0]
    offsets = [v]
    for _ in range(2):
        v = (v[2], v[0], v[1])
        offsets.append(v)
    out = []
    for off in offsets:
        out.extend(p.translated(off) for p in module.placements)
    return _product(out, "hexagonal_module_triplet")


def tile_plane(nx: int, ny: int) -> Assembly:
    """nx x ny period translates of the fundamental unit in one layer."""
    if nx < 1 or ny < 1:
        raise EmptyRegion("tile_plane needs nx, ny >= 1")
    return _product(
        slab_placements(0, PeriodRect(nx, ny)), f"tile_plane_{nx}x{ny}"
    )


def floor_plate(circumradius) -> Assembly:
    """Hexagonal plate of one layer, centered on an octa axis."""
    r = Fraction(circumradius)
    if r < 1:
        raise EmptyRegion("floor plate needs circumradius >= 1")
    return _product(
        slab_placements(0, HexagonRegion(r, PLATE_CENTER)),
        f"floor_plate_{circumradius}",
    )


# ---------------------------------------------------------------------------
# tower

#: per-cell tags
CAPITAL = "CAPITAL"
FLOOR = "FLOOR"

_OFFSET_POLICIES = ("alternate", "fixed")


@dataclass(frozen=True)
class TowerParams:
    """Parametric description of a tower build.

    ``floors_per_bay`` lists in-bay layer indices that carry floor
    plates.  ``twist_per_bay`` is degrees, a multiple of 60.
    """

    bay_height: float = 66.0
    capital_depth: float = FEET_PER_LAYER
    bays: int = 1
    floors_per_bay: tuple = (0, 2, 4)
    plan: Fraction = Fraction(3)
    twist_per_bay: int = 0
    floor_offset_policy: str = "alternate"

    def __post_init__(self):
        object.__setattr__(self, "plan", Fraction(self.plan))
        object.__setattr__(
            self, "floors_per_bay", tuple(self.floors_per_bay)
        )
        self.validate()

    @property
    def layers_per_bay(self) -> int:
        return round(self.bay_height / self.capital_depth)

    def validate(self):
        if self.capital_depth <= 0 or self.bay_height <= 0:
            raise InvalidParams("bay_height and capital_depth must be positive")
        ratio = self.bay_height / self.capital_depth
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise InvalidParams("capital_depth must divide bay_height")
        lpb = round(ratio)
        if self.bays < 1:
            raise InvalidParams("bays must be >= 1")
        floors = self.floors_per_bay
        if len(set(floors)) != len(floors):
            raise InvalidParams("floors_per_bay has duplicate layer indices")
        if len(floors) > lpb:
            raise InvalidParams(
                f"floors_per_bay exceeds {lpb} layers per bay"
            )
        if any(not (0 <= f < lpb) for f in floors):
            raise InvalidParams("floor layer index out of bay range")
        if self.twist_per_bay % 60 != 0:
            raise InvalidParams("twist_per_bay must be a multiple of 60")
        if self.plan < 1:
            raise InvalidParams("plan circumradius must be >= 1")
        if self.floor_offset_policy not in _OFFSET_POLICIES:
            raise InvalidParams(
                f"floor_offset_policy must be one of {_OFFSET_POLICIES}"
            )

    _FIELDS = (
        "bay_height",
        "capital_depth",
        "bays",
        "floors_per_bay",
        "plan",
        "twist_per_bay",
        "floor_offset_policy",
    )

    def to_json(self) -> str:
        doc = {
            "bay_height": self.bay_height,
            "capital_depth": self.capital_depth,
            "bays": self.bays,
            "floors_per_bay": list(self.floors_per_bay),
            "plan": str(self.plan),
            "twist_per_bay": self.twist_per_bay,
            "floor_offset_policy": self.floor_offset_policy,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "TowerParams":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise InvalidParams("config must be a JSON object")
        unknown = set(doc) - set(TowerParams._FIELDS)
        if unknown:
            raise InvalidParams(f"unknown config fields: {sorted(unknown)}")
        kwargs = {}
        for name in TowerParams._FIELDS:
            if name in doc:
                value = doc[name]
                if name == "plan":
                    value = Fraction(value)
                kwargs[name] = value
        return TowerParams(**kwargs)


def _axis_translation(target_sum: int):
    """Lattice translation with coordinate sum ``target_sum``, as close to
    the vertical axis as parity allows."""
    m, rem = divmod(target_sum, 3)
    return tuple(m + 1 if i < rem else m for i in range(3))


def _floor_offset(ordinal: int):
    """Distinct in-plane lattice offset per floor: 0, +a, -a, +2a, ..."""
    steps = (ordinal + 1) // 2 * (1 if ordinal % 2 else -1)
    return (steps * PLAN_A[0], steps * PLAN_A[1], steps * PLAN_A[2])


def build_tower(params: TowerParams) -> Assembly:
    """Stack twisted bays of floor-plate layers; tag capitals and floors.

    Bays are rigid copies of the base bay: even 60-degree twist
    multiples are proper vertical-axis rotations, odd multiples are
    realized by the improper plan-rotation symmetry (which flips the
    bay vertically, invisible in plan) re-raised into place.  Under the
    alternate offset policy every floor plate is shifted by a distinct
    in-plane lattice vector so no two floors share a plan footprint.
    """
    params.validate()
    lpb = params.layers_per_bay
    region = HexagonRegion(params.plan, PLATE_CENTER)
    bay0 = Assembly.from_placements(
        [p for l in range(lpb) for p in slab_placements(l, region)]
    )
    twist_steps = (params.twist_per_bay // 60) % 6

    floor_layers = sorted(
        bay * lpb + fl for bay in range(params.bays) for fl in params.floors_per_bay
    )
    offsets = {}
    for ordinal, layer in enumerate(floor_layers):
        if params.floor_offset_policy == "alternate":
            offsets[layer] = _floor_offset(ordinal)
        else:
            offsets[layer] = (0, 0, 0)
    capital_layers = {bay * lpb + lpb - 1 for bay in range(params.bays)}

    placements = []
    for bay in range(params.bays):
        k = (bay * twist_steps) % 6
        sym = twist_symmetry(k)
        shifted = bay0.transformed_exact(sym)
        # odd twists flip the bay below its slab; re-raise it so the bay
        # occupies layers [bay*lpb, (bay+1)*lpb)
        target_sum = 2 * lpb * bay + (2 * lpb if k % 2 else 0)
        shifted = shifted.translated(_axis_translation(target_sum))
        for p in shifted.placements:
            layer = cell_layer(p)
            off = offsets.get(layer)
            placements.append(p.translated(off) if off else p)

    placements.sort(key=lambda p: (cell_layer(p), p.key()))
    tags = {}
    for i, p in enumerate(placements):
        layer = cell_layer(p)
        t = set()
        if layer in capital_layers:
            t.add(CAPITAL)
        if layer in offsets:
            t.add(FLOOR)
        if t:
            tags[i] = frozenset(t)
    return Assembly.from_placements(
        placements, tags=tags, provenance=DerivationScript("tower")
    )


def layer_slice(assembly: Assembly, layer: int) -> Assembly:
    """The sub-assembly of cells occupying one slab."""
    return Assembly.from_placements(
        [p for p in assembly.placements if cell_layer(p) == layer]
    )


# ---------------------------------------------------------------------------
# named initial shapes for scripts, CLI, and sessions

_PRODUCTS = {
    "fundamental_unit": fundamental_unit,
    "half_module": half_module,
    "hexagonal_module": hexagonal_module,
}


def initial_assembly(name: str) -> Assembly:
    """Resolve a seed species or pipeline product name to an assembly."""
    from . import grammar

    if name in _PRODUCTS:
        return _PRODUCTS[name]()
    return grammar.seed(name)


def replay_script(script: DerivationScript) -> Assembly:
    """Replay with initial shapes drawn from species and pipeline products."""
    from . import grammar

    return grammar.replay(script, initial_assembly(script.initial))
