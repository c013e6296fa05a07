"""Assemblies of cells, exact lattice occupancy, and congruence fingerprints.

A lattice assembly stores honeycomb placements (species + FCC anchor) and
stays fully exact; a free assembly stores explicit cells under arbitrary
isometries.  Fingerprints decide congruence: exact canonicalization over
the 48 cubic symmetries for lattice assemblies, a distance-multiset
invariant for free ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyAssembly, ParityViolation
from .geometry import (
    HONEYCOMB_SPECIES,
    LATTICE_SYMMETRIES,
    ConvexCell,
    IntVec,
    Species,
    apply_symmetry,
    canonical_cell,
    is_fcc,
    vadd,
    vsub,
)


@dataclass(frozen=True)
class LatticePlacement:
    """One honeycomb cell: a canonical cell translated by an FCC anchor."""

    species: Species
    anchor: IntVec

    def __post_init__(self):
        if self.species not in HONEYCOMB_SPECIES:
            raise ValueError(f"{self.species} is not a honeycomb species")
        if not is_fcc(self.anchor):
            raise ParityViolation(f"anchor {self.anchor} violates FCC parity")

    def cell(self) -> ConvexCell:
        return canonical_cell(self.species).translated(self.anchor)

    def vertices(self) -> tuple[IntVec, ...]:
        return self.cell().vertices

    def translated(self, t: IntVec) -> "LatticePlacement":
        return LatticePlacement(self.species, vadd(self.anchor, t))

    def key(self):
        return (self.species.value, self.anchor)


_UP_VERTEX_SUM = (2, 2, 2)   # sum of canonical up-tetra vertices
_DOWN_VERTEX_SUM = (6, 2, 2)


def placement_from_vertices(vertices) -> LatticePlacement | None:
    """Re-identify an exact vertex set as a honeycomb placement, if it is one."""
    vs = sorted(tuple(int(c) for c in v) for v in vertices)
    if len(vs) == 6:
        sx = sum(v[0] for v in vs)
        sy = sum(v[1] for v in vs)
        sz = sum(v[2] for v in vs)
        if sx % 6 or sy % 6 or sz % 6:
            return None
        center = (sx // 6, sy // 6, sz // 6)
        anchor = vsub(center, (1, 0, 0))
        cand = LatticePlacement(Species.OCTA, anchor)
        return cand if sorted(cand.vertices()) == vs else None
    if len(vs) == 4:
        total = (
            sum(v[0] for v in vs),
            sum(v[1] for v in vs),
            sum(v[2] for v in vs),
        )
        for species, offset in (
            (Species.TETRA_UP, _UP_VERTEX_SUM),
            (Species.TETRA_DOWN, _DOWN_VERTEX_SUM),
        ):
            d = vsub(total, offset)
            if all(c % 4 == 0 for c in d):
                anchor = (d[0] // 4, d[1] // 4, d[2] // 4)
                if sum(anchor) % 2 == 0:
                    cand = LatticePlacement(species, anchor)
                    if sorted(cand.vertices()) == vs:
                        return cand
    return None


def snap_cell_to_placement(cell: ConvexCell) -> LatticePlacement | None:
    exact = cell if cell.is_exact else cell.snapped()
    if exact is None or exact.species not in HONEYCOMB_SPECIES:
        return None
    return placement_from_vertices(exact.vertices)


class Assembly:
    """An immutable collection of cells with occupancy index and provenance."""

    def __init__(self, placements=None, free_cells=None, tags=None, provenance=None):
        if (placements is None) == (free_cells is None):
            raise ValueError("exactly one of placements / free_cells required")
        self._placements = tuple(placements) if placements is not None else None
        self._free_cells = tuple(free_cells) if free_cells is not None else None
        self.tags = dict(tags or {})  # cell index -> frozenset of tag strings
        self.provenance = provenance
        if self._placements is not None:
            keys = [p.key() for p in self._placements]
            if len(set(keys)) != len(keys):
                raise ValueError("duplicate lattice placements")
            self._occupancy = frozenset(keys)
        else:
            self._occupancy = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_placements(placements, tags=None, provenance=None) -> "Assembly":
        return Assembly(placements=placements, tags=tags, provenance=provenance)

    @staticmethod
    def from_cells(cells, tags=None, provenance=None) -> "Assembly":
        return Assembly(free_cells=cells, tags=tags, provenance=provenance)

    @staticmethod
    def single(species: Species) -> "Assembly":
        if species in HONEYCOMB_SPECIES:
            return Assembly.from_placements(
                [LatticePlacement(species, (0, 0, 0))]
            )
        return Assembly.from_cells([canonical_cell(species)])

    # -- basic views -------------------------------------------------------

    @property
    def is_lattice(self) -> bool:
        return self._placements is not None

    @property
    def placements(self) -> tuple[LatticePlacement, ...]:
        if self._placements is None:
            raise ValueError("not a lattice assembly")
        return self._placements

    @property
    def cells(self) -> tuple[ConvexCell, ...]:
        if self._placements is not None:
            return tuple(p.cell() for p in self._placements)
        return self._free_cells

    def __len__(self) -> int:
        return len(self._placements if self.is_lattice else self._free_cells)

    def occupied(self, placement: LatticePlacement) -> bool:
        return self.is_lattice and placement.key() in self._occupancy

    def volume(self):
        """Total cell volume; exact Fraction whenever every cell is exact."""
        vols = [c.volume() for c in self.cells]
        if all(isinstance(v, Fraction) for v in vols):
            return sum(vols, Fraction(0))
        return float(sum(float(v) for v in vols))

    def tag_for(self, index: int) -> frozenset:
        return self.tags.get(index, frozenset())

    # -- growth ------------------------------------------------------------

    def with_cell(self, cell: ConvexCell, provenance=None) -> "Assembly":
        """New assembly with one added cell.

        Stays in exact lattice representation when both the assembly and
        the new cell are honeycomb-conforming, otherwise degrades to a
        free assembly.
        """
        prov = provenance if provenance is not None else self.provenance
        if self.is_lattice:
            placement = snap_cell_to_placement(cell)
            if placement is not None:
                return Assembly.from_placements(
                    self._placements + (placement,),
                    tags=self.tags,
                    provenance=prov,
                )
            return Assembly.from_cells(
                self.cells + (cell,), tags=self.tags, provenance=prov
            )
        return Assembly.from_cells(
            self._free_cells + (cell,), tags=self.tags, provenance=prov
        )

    def translated(self, t: IntVec) -> "Assembly":
        if not self.is_lattice:
            raise ValueError("exact translation requires a lattice assembly")
        return Assembly.from_placements(
            [p.translated(t) for p in self._placements],
            tags=self.tags,
            provenance=self.provenance,
        )

    def transformed_exact(self, sym, t: IntVec = (0, 0, 0)) -> "Assembly":
        """Apply one of the 48 cubic symmetries plus a lattice translation."""
        if not self.is_lattice:
            raise ValueError("exact transform requires a lattice assembly")
        out = []
        for p in self._placements:
            verts = [vadd(apply_symmetry(sym, v), t) for v in p.vertices()]
            np_ = placement_from_vertices(verts)
            if np_ is None:
                raise ValueError("symmetry image is not a honeycomb placement")
            out.append(np_)
        return Assembly.from_placements(
            out, tags=self.tags, provenance=self.provenance
        )

    def merged(self, other: "Assembly") -> "Assembly":
        if not (self.is_lattice and other.is_lattice):
            raise ValueError("merge requires lattice assemblies")
        return Assembly.from_placements(
            self._placements + other._placements,
            provenance=self.provenance,
        )


# ---------------------------------------------------------------------------
# fingerprints

def _lattice_canonical(assembly: Assembly):
    cell_sets = [tuple(sorted(p.vertices())) for p in assembly.placements]
    best = None
    for sym in LATTICE_SYMMETRIES:
        mapped = [
            tuple(sorted(apply_symmetry(sym, v) for v in cs)) for cs in cell_sets
        ]
        origin = min(min(cs) for cs in mapped)
        normalized = sorted(
            tuple(vsub(v, origin) for v in cs) for cs in mapped
        )
        key = tuple(normalized)
        if best is None or key < best:
            best = key
    return best


def _free_invariant(assembly: Assembly, include_species: bool):
    species = sorted(c.species.value for c in assembly.cells)
    # union of cell vertices, coincident points merged
    seen = {}
    for c in assembly.cells:
        for v in c.vertices:
            key = tuple(round(float(x) * 1e6) for x in v)
            seen.setdefault(key, v)
    pts = list(seen.values())
    dists = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = sum((float(a) - float(b)) ** 2 for a, b in zip(pts[i], pts[j]))
            dists.append(round(d, 6))
    vol = round(float(assembly.volume()), 6)
    if include_species:
        return (tuple(species), tuple(sorted(dists)), vol)
    return (tuple(sorted(dists)), vol)


def fingerprint(assembly: Assembly, geometry_only: bool = False) -> bytes:
    """Canonical byte string; equal iff assemblies are congruent.

    Lattice assemblies canonicalize exactly over the 48 cubic
    orientations and translation.  Free assemblies use an invariant
    (species multiset, vertex distance multiset, volume) that is
    complete in practice for desk-scale designs but not a general
    congruence certificate.  ``geometry_only`` drops the species
    multiset so reassemblies of subdivided cells compare by shape.
    """
    if len(assembly) == 0:
        raise EmptyAssembly("cannot fingerprint an empty assembly")
    if assembly.is_lattice and not geometry_only:
        return b"L:" + repr(_lattice_canonical(assembly)).encode()
    if assembly.is_lattice:
        return b"G:" + repr(
            _free_invariant(assembly, include_species=False)
        ).encode()
    tag = b"F:" if not geometry_only else b"G:"
    return tag + repr(
        _free_invariant(assembly, include_species=not geometry_only)
    ).encode()
