"""The tetrahedral-octahedral honeycomb as an exact occupancy structure.

Layers are the (111) node planes: vertical axis = lattice direction
(1,1,1), the only orientation in which both cell species span exactly
one layer.  Plan geometry is exact in rhombic (alpha, beta) coordinates
over the in-plane basis a = (1,-1,0), b = (0,1,-1); one plan grid edge
has cartesian length sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .assembly import Assembly, LatticePlacement
from .errors import EmptyRegion, ParityViolation
from .geometry import ConvexCell, Isometry, Species, is_fcc, vadd

#: in-plane period translations of one honeycomb layer
PLAN_A = (1, -1, 0)
PLAN_B = (0, 1, -1)

#: down-tetra anchors in slab k sit at sum 2k-2, offset from the A2 plane
DOWN_TETRA_BASE = (0, -1, -1)

#: default physical scale: one layer = 11 ft, so 6 layers = one 66 ft bay
FEET_PER_LAYER = 11.0


def layer_index(p) -> int:
    """Index of the (111) node plane through p: (x+y+z)/2."""
    if not is_fcc(p):
        raise ParityViolation(f"{p} violates FCC parity")
    return (int(p[0]) + int(p[1]) + int(p[2])) // 2


def cell_layer(placement: LatticePlacement) -> int:
    """Layer of the slab a honeycomb cell occupies (its bottom node plane)."""
    return min(layer_index(v) for v in placement.vertices())


def plan_coords(p) -> tuple[Fraction, Fraction]:
    """Exact (alpha, beta) plan coordinates of the (111)-projection of p."""
    x, y, z = (Fraction(c) for c in p)
    g = (x + y + z) / 3
    return (x - g, g - z)


def plan_cart(ab) -> tuple[float, float]:
    """Cartesian plan position of rhombic coordinates (grid edge sqrt(2))."""
    al, be = float(ab[0]), float(ab[1])
    return (
        al * math.sqrt(2) - be * math.sqrt(2) / 2,
        be * math.sqrt(6) / 2,
    )


def rotate_plan_60(ab, k: int = 1):
    """Rotate plan coordinates by k * 60 degrees, exactly."""
    al, be = ab
    for _ in range(k % 6):
        al, be = al - be, al
    return (al, be)


# ---------------------------------------------------------------------------
# plan regions

@dataclass(frozen=True)
class HexagonRegion:
    """Regular hexagon aligned to the plan grid.

    ``circumradius`` is measured in plan grid edges; vertices sit on the
    six in-plane neighbor directions.  ``center`` is in (alpha, beta).
    """

    circumradius: Fraction
    center: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        if self.circumradius < 0:
            raise EmptyRegion("hexagon circumradius must be >= 0")

    def contains(self, ab) -> bool:
        al = Fraction(ab[0]) - Fraction(self.center[0])
        be = Fraction(ab[1]) - Fraction(self.center[1])
        return max(abs(al), abs(be), abs(al - be)) <= self.circumradius

    def bounds(self):
        r = self.circumradius
        return (
            self.center[0] - r,
            self.center[0] + r,
            self.center[1] - r,
            self.center[1] + r,
        )


@dataclass(frozen=True)
class PeriodRect:
    """Half-open nx x ny block of layer periods spanned by PLAN_A, PLAN_B."""

    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise EmptyRegion("period rectangle needs nx, ny >= 1")


# ---------------------------------------------------------------------------
# slab enumeration

def slab_placements(layer: int, region) -> list[LatticePlacement]:
    """All honeycomb cells of one slab whose plan centroid lies in region."""
    if isinstance(region, PeriodRect):
        out = []
        for j in range(region.ny):
            for i in range(region.nx):
                shift = vadd(
                    (i * PLAN_A[0], i * PLAN_A[1], i * PLAN_A[2]),
                    (j * PLAN_B[0], j * PLAN_B[1], j * PLAN_B[2]),
                )
                base = _lift_to_layer(shift, layer)
                out.append(LatticePlacement(Species.OCTA, base))
                out.append(LatticePlacement(Species.TETRA_UP, base))
                out.append(
                    LatticePlacement(
                        Species.TETRA_DOWN, vadd(base, DOWN_TETRA_BASE)
                    )
                )
        return sorted(out, key=lambda p: p.key())

    lo_a, hi_a, lo_b, hi_b = region.bounds()
    out = []
    margin = 2
    for al in range(math.floor(lo_a) - margin, math.ceil(hi_a) + margin + 1):
        for be in range(math.floor(lo_b) - margin, math.ceil(hi_b) + margin + 1):
            base = _lift_to_layer(
                vadd(
                    (al * PLAN_A[0], al * PLAN_A[1], al * PLAN_A[2]),
                    (be * PLAN_B[0], be * PLAN_B[1], be * PLAN_B[2]),
                ),
                layer,
            )
            for placement in (
                LatticePlacement(Species.OCTA, base),
                LatticePlacement(Species.TETRA_UP, base),
                LatticePlacement(
                    Species.TETRA_DOWN, vadd(base, DOWN_TETRA_BASE)
                ),
            ):
                centroid = placement.cell().centroid()
                if region.contains(plan_coords(centroid)):
                    out.append(placement)
    return sorted(out, key=lambda p: p.key())


def _lift_to_layer(sum0_point, layer: int):
    """Translate a sum-0 FCC point vertically so its slab base is ``layer``."""
    s = 2 * layer
    m, rem = divmod(s, 3)
    lift = tuple(m + 1 if i < rem else m for i in range(3))
    p = vadd(sum0_point, lift)
    if sum(p) != s or sum(p) % 2:
        raise ParityViolation(f"lift produced non-FCC point {p}")
    return p


def cells_in_slab(layer: int, region) -> Assembly:
    """Honeycomb cells of one slab clipped to a plan region.

    Membership is by plan-projected centroid, tested exactly.  The
    result may be empty; callers that need a nonempty plate enforce
    their own minimum region size.
    """
    return Assembly.from_placements(slab_placements(layer, region))


# ---------------------------------------------------------------------------
# world transform

def _default_rotation() -> Isometry:
    e1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
    e2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6)
    e3 = np.array([1.0, 1.0, 1.0]) / math.sqrt(3)
    return Isometry(np.vstack([e1, e2, e3]), np.zeros(3))


@dataclass(frozen=True)
class WorldTransform:
    """Maps lattice coordinates to world feet: (1,1,1) becomes +Z.

    ``scale`` is feet per lattice unit; the world height of one layer is
    scale * 2/sqrt(3).
    """

    scale: float = 1.0
    origin: tuple = (0.0, 0.0, 0.0)
    rotation: Isometry = field(default_factory=_default_rotation)

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if not self.rotation.proper:
            raise ValueError("world rotation must be proper")

    @staticmethod
    def with_layer_height(feet: float = FEET_PER_LAYER) -> "WorldTransform":
        # layer height = scale * 2/sqrt(3)
        return WorldTransform(scale=feet * math.sqrt(3) / 2.0)

    @property
    def layer_height(self) -> float:
        return self.scale * 2.0 / math.sqrt(3)

    def apply(self, p) -> tuple[float, float, float]:
        v = self.rotation.apply(p)
        return (
            v[0] * self.scale + self.origin[0],
            v[1] * self.scale + self.origin[1],
            v[2] * self.scale + self.origin[2],
        )


def to_world(assembly: Assembly, transform: WorldTransform) -> list[ConvexCell]:
    """Every cell mapped into world coordinates (feet)."""
    out = []
    for cell in assembly.cells:
        out.append(
            ConvexCell(
                cell.species,
                tuple(transform.apply(v) for v in cell.vertices),
                cell.faces,
            )
        )
    return out


# ---------------------------------------------------------------------------
# exact plan projections of assemblies

def plan_projection(assembly: Assembly):
    """Absolute plan footprint: per-cell sorted (alpha, beta) vertex tuples."""
    cells = []
    for cell in assembly.cells:
        cells.append(tuple(sorted(plan_coords(v) for v in cell.vertices)))
    return tuple(sorted(cells))


def plan_fingerprint(projection) -> bytes:
    """Translation-normalized canonical bytes of a plan projection."""
    lo = min(v for cell in projection for v in cell)
    moved = tuple(
        sorted(
            tuple(
                sorted((a - lo[0], b - lo[1]) for a, b in cell)
            )
            for cell in projection
        )
    )
    return repr(moved).encode()


def rotate_projection(projection, k: int):
    """Plan projection rotated by k * 60 degrees about the plan origin."""
    return tuple(
        sorted(
            tuple(sorted(rotate_plan_60(ab, k) for ab in cell))
            for cell in projection
        )
    )


# ---------------------------------------------------------------------------
# exact 60-degree twist machinery (signed-permutation symmetries)

def _sym_pow_cyc(j: int):
    perm = (0, 1, 2)
    for _ in range(j % 3):
        perm = (perm[2], perm[0], perm[1])
    return (perm, (1, 1, 1))


def twist_symmetry(k: int):
    """Signed permutation whose plan effect is rotation by k * 60 degrees.

    Odd multiples are improper (they flip layers vertically); callers
    re-translate the result back into the target slab.
    """
    k %= 6
    if k % 2 == 0:
        return _sym_pow_cyc(k // 2)
    perm, _ = _sym_pow_cyc(((k - 3) // 2) % 3)
    return (perm, (-1, -1, -1))
