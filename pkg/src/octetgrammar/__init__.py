"""Octet-truss shape grammar: exact honeycomb geometry, rule-based
derivation, and parametric tower generation."""

__version__ = "0.1.0"

from .assembly import Assembly, LatticePlacement, fingerprint
from .geometry import ConvexCell, Isometry, Species
from .grammar import (
    DerivationScript,
    DerivationStep,
    GrammarRule,
    Match,
    Relation,
    RULES,
    apply,
    enumerate_unique,
    find_matches,
    replay,
    seed,
)
from .lattice import HexagonRegion, PeriodRect, WorldTransform, cells_in_slab
from .pipeline import (
    TowerParams,
    build_tower,
    floor_plate,
    fundamental_unit,
    half_module,
    hexagonal_module,
    tile_plane,
)
from .framegraph import FrameGraph, extract, validate

__all__ = [
    "Assembly",
    "ConvexCell",
    "DerivationScript",
    "DerivationStep",
    "FrameGraph",
    "GrammarRule",
    "HexagonRegion",
    "Isometry",
    "LatticePlacement",
    "Match",
    "PeriodRect",
    "RULES",
    "Relation",
    "Species",
    "TowerParams",
    "WorldTransform",
    "apply",
    "build_tower",
    "cells_in_slab",
    "enumerate_unique",
    "extract",
    "find_matches",
    "fingerprint",
    "floor_plate",
    "fundamental_unit",
    "half_module",
    "hexagonal_module",
    "replay",
    "seed",
    "tile_plane",
    "validate",
]
