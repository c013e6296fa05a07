"""Exact and floating-point 3D primitives.

Cells live on the FCC lattice: integer points with even coordinate sum,
one honeycomb edge = length sqrt(2) in lattice units.  Canonical cells
carry integer vertices so volumes and occupancy stay exact; isometries
are float-backed and only enter where a derivation leaves the lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import FaceMismatch, NotTriangle

TOL = 1e-9

IntVec = tuple[int, int, int]


class Species(str, Enum):
    TETRA_UP = "tetra_up"
    TETRA_DOWN = "tetra_down"
    OCTA = "octa"
    HALF_OCTA = "half_octa"

    @property
    def is_tetra(self) -> bool:
        return self in (Species.TETRA_UP, Species.TETRA_DOWN)


#: species that occur as cells of the tet-oct honeycomb
HONEYCOMB_SPECIES = (Species.TETRA_UP, Species.TETRA_DOWN, Species.OCTA)


def is_fcc(p) -> bool:
    """True iff p is an integer point with even coordinate sum."""
    return all(isinstance(c, int) or float(c).is_integer() for c in p) and (
        int(p[0]) + int(p[1]) + int(p[2])
    ) % 2 == 0


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vcross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def sqdist(a, b) -> float:
    d = vsub(a, b)
    return vdot(d, d)


@dataclass(frozen=True)
class Isometry:
    """Rigid motion x -> linear @ x + translation; proper == det(linear) > 0."""

    linear: np.ndarray
    translation: np.ndarray
    proper: bool = field(default=True)

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float).reshape(3, 3)
        tr = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)
        if not np.allclose(lin.T @ lin, np.eye(3), atol=TOL):
            raise ValueError("linear part is not orthogonal")
        det = float(np.linalg.det(lin))
        object.__setattr__(self, "proper", det > 0)

    @staticmethod
    def identity() -> "Isometry":
        return Isometry(np.eye(3), np.zeros(3))

    @staticmethod
    def translation_by(t) -> "Isometry":
        return Isometry(np.eye(3), np.asarray(t, dtype=float))

    @staticmethod
    def rotation(axis, angle, center=(0.0, 0.0, 0.0)) -> "Isometry":
        ax = np.asarray(axis, dtype=float)
        ax = ax / np.linalg.norm(ax)
        c, s = math.cos(angle), math.sin(angle)
        x, y, z = ax
        K = np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]])
        R = np.eye(3) * c + s * K + (1 - c) * np.outer(ax, ax)
        ctr = np.asarray(center, dtype=float)
        return Isometry(R, ctr - R @ ctr)

    @staticmethod
    def reflection(normal, point=(0.0, 0.0, 0.0)) -> "Isometry":
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        M = np.eye(3) - 2.0 * np.outer(n, n)
        p = np.asarray(point, dtype=float)
        return Isometry(M, p - M @ p)

    def apply(self, p) -> tuple[float, float, float]:
        v = self.linear @ np.asarray(p, dtype=float) + self.translation
        return (float(v[0]), float(v[1]), float(v[2]))

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self o other)(x) = self(other(x))."""
        return Isometry(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return self.compose(other)

    def inverse(self) -> "Isometry":
        inv = self.linear.T
        return Isometry(inv, -(inv @ self.translation))


def compose(a: Isometry, b: Isometry) -> Isometry:
    return a.compose(b)


def _orient_faces(vertices, faces):
    """Flip face index cycles so every face normal points away from the centroid."""
    n = len(vertices)
    cx = sum(float(v[0]) for v in vertices) / n
    cy = sum(float(v[1]) for v in vertices) / n
    cz = sum(float(v[2]) for v in vertices) / n
    out = []
    for f in faces:
        v0, v1, v2 = (vertices[i] for i in f[:3])
        nrm = vcross(vsub(v1, v0), vsub(v2, v0))
        to_face = (float(v0[0]) - cx, float(v0[1]) - cy, float(v0[2]) - cz)
        if vdot(nrm, to_face) < 0:
            f = tuple(reversed(f))
        out.append(tuple(f))
    return tuple(out)


@dataclass(frozen=True)
class ConvexCell:
    """A convex cell: tetra, octa or half-octa under some placement.

    Vertices may be exact (ints) or floats; faces are index cycles with
    outward orientation.
    """

    species: Species
    vertices: tuple
    faces: tuple

    @property
    def is_exact(self) -> bool:
        return all(
            all(isinstance(c, int) for c in v) for v in self.vertices
        )

    def edges(self):
        """Deduplicated undirected edges as sorted index pairs."""
        seen = set()
        for f in self.faces:
            for i in range(len(f)):
                e = tuple(sorted((f[i], f[(i + 1) % len(f)])))
                seen.add(e)
        return sorted(seen)

    def centroid(self):
        n = len(self.vertices)
        if self.is_exact:
            return tuple(
                Fraction(sum(v[i] for v in self.vertices), n) for i in range(3)
            )
        return tuple(sum(v[i] for v in self.vertices) / n for i in range(3))

    def volume(self):
        """Signed volume; Fraction when vertices are exact, float otherwise."""
        if self.is_exact:
            total = Fraction(0)
            for f in self.faces:
                v0 = self.vertices[f[0]]
                for i in range(1, len(f) - 1):
                    v1, v2 = self.vertices[f[i]], self.vertices[f[i + 1]]
                    total += Fraction(vdot(v0, vcross(v1, v2)), 6)
            return total
        total = 0.0
        for f in self.faces:
            v0 = self.vertices[f[0]]
            for i in range(1, len(f) - 1):
                v1, v2 = self.vertices[f[i]], self.vertices[f[i + 1]]
                total += vdot(v0, vcross(v1, v2)) / 6.0
        return total

    def face_normal(self, face_index: int):
        f = self.faces[face_index]
        v0, v1, v2 = (self.vertices[i] for i in f[:3])
        n = vcross(vsub(v1, v0), vsub(v2, v0))
        arr = np.asarray(n, dtype=float)
        return arr / np.linalg.norm(arr)

    def face_vertices(self, face_index: int):
        return tuple(self.vertices[i] for i in self.faces[face_index])

    def translated(self, t: IntVec) -> "ConvexCell":
        return ConvexCell(
            self.species,
            tuple(vadd(v, t) for v in self.vertices),
            self.faces,
        )

    def transformed(self, iso: Isometry) -> "ConvexCell":
        verts = tuple(iso.apply(v) for v in self.vertices)
        faces = self.faces
        if not iso.proper:
            # keep outward orientation under reflection
            faces = tuple(tuple(reversed(f)) for f in faces)
        return ConvexCell(self.species, verts, faces)

    def snapped(self) -> "ConvexCell | None":
        """Exact copy if every vertex is within TOL of an integer point."""
        verts = []
        for v in self.vertices:
            iv = tuple(int(round(c)) for c in v)
            if any(abs(c - i) > TOL for c, i in zip(v, iv)):
                return None
            verts.append(iv)
        return ConvexCell(self.species, tuple(verts), self.faces)


_TETRA_UP_VERTS = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))
# point reflection of the up tetra through (1, 1/2, 1/2): the second tetra
# orientation of the honeycomb
_TETRA_DOWN_VERTS = ((2, 1, 1), (1, 0, 1), (1, 1, 0), (2, 0, 0))
_OCTA_VERTS = ((0, 0, 0), (2, 0, 0), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1))
_HALF_OCTA_VERTS = ((0, 0, 0), (1, 1, 0), (2, 0, 0), (1, -1, 0), (1, 0, 1))


def _tetra_faces():
    return tuple(itertools.combinations(range(4), 3))


def _octa_faces():
    # one vertex from each antipodal pair: {0,1} x {2,3} x {4,5}
    return tuple((i, j, k) for i in (0, 1) for j in (2, 3) for k in (4, 5))


def canonical_tetra(orientation: str = "up") -> ConvexCell:
    """The canonical honeycomb tetrahedron (edge length sqrt(2))."""
    if orientation == "up":
        verts = _TETRA_UP_VERTS
        sp = Species.TETRA_UP
    elif orientation == "down":
        verts = _TETRA_DOWN_VERTS
        sp = Species.TETRA_DOWN
    else:
        raise ValueError(f"unknown tetra orientation: {orientation!r}")
    return ConvexCell(sp, verts, _orient_faces(verts, _tetra_faces()))


def canonical_octa() -> ConvexCell:
    verts = _OCTA_VERTS
    return ConvexCell(Species.OCTA, verts, _orient_faces(verts, _octa_faces()))


def canonical_half_octa() -> ConvexCell:
    """Square pyramid: the z >= 0 half of the canonical octahedron."""
    verts = _HALF_OCTA_VERTS
    faces = ((0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4))
    return ConvexCell(Species.HALF_OCTA, verts, _orient_faces(verts, faces))


def canonical_cell(species: Species) -> ConvexCell:
    if species == Species.TETRA_UP:
        return canonical_tetra("up")
    if species == Species.TETRA_DOWN:
        return canonical_tetra("down")
    if species == Species.OCTA:
        return canonical_octa()
    if species == Species.HALF_OCTA:
        return canonical_half_octa()
    raise ValueError(f"unknown species: {species}")


def _triangle_shape(verts):
    return sorted(
        sqdist(verts[i], verts[(i + 1) % 3]) for i in range(3)
    )


def face_gluings(
    cell_a: ConvexCell, face_a: int, cell_b: ConvexCell, face_b: int
) -> list[Isometry]:
    """The 3 proper isometries placing cell_b so face_b coincides with face_a.

    The glued faces end up coplanar-coincident with opposed outward
    normals, one isometry per rotational alignment of the triangle.
    Improper placements are excluded: reflection is an explicit grammar
    transform, never implicit in gluing.
    """
    fa = cell_a.faces[face_a]
    fb = cell_b.faces[face_b]
    if len(fa) != 3 or len(fb) != 3:
        raise NotTriangle("face gluing requires triangular faces")
    pa = [cell_a.vertices[i] for i in fa]
    pb = [cell_b.vertices[i] for i in fb]
    sa, sb = _triangle_shape(pa), _triangle_shape(pb)
    if any(abs(float(x) - float(y)) > 1e-6 for x, y in zip(sa, sb)):
        raise FaceMismatch(f"face shapes differ: {sa} vs {sb}")
    na = cell_a.face_normal(face_a)
    nb = cell_b.face_normal(face_b)
    out = []
    # orientation-reversing vertex correspondences (opposed normals flip
    # the in-plane orientation back, so the composite is proper)
    for perm in ((0, 2, 1), (2, 1, 0), (1, 0, 2)):
        target = [pa[i] for i in perm]
        src = np.array(
            [vsub(pb[1], pb[0]), vsub(pb[2], pb[0]), nb], dtype=float
        ).T
        dst = np.array(
            [vsub(target[1], target[0]), vsub(target[2], target[0]), -na],
            dtype=float,
        ).T
        lin = dst @ np.linalg.inv(src)
        # orthogonalize against rounding drift
        u, _, vt = np.linalg.svd(lin)
        lin = u @ vt
        tr = np.asarray(target[0], dtype=float) - lin @ np.asarray(
            pb[0], dtype=float
        )
        out.append(Isometry(lin, tr))
    return out


def _sat_axes(a: ConvexCell, b: ConvexCell):
    axes = []
    for cell in (a, b):
        for i in range(len(cell.faces)):
            axes.append(cell.face_normal(i))
    dirs_a = [
        np.asarray(vsub(a.vertices[j], a.vertices[i]), dtype=float)
        for i, j in a.edges()
    ]
    dirs_b = [
        np.asarray(vsub(b.vertices[j], b.vertices[i]), dtype=float)
        for i, j in b.edges()
    ]
    for da in dirs_a:
        for db in dirs_b:
            c = np.cross(da, db)
            n = np.linalg.norm(c)
            if n > 1e-12:
                axes.append(c / n)
    return axes


def interiors_overlap(a: ConvexCell, b: ConvexCell) -> bool:
    """True iff the open interiors intersect.

    Separating-axis test over face normals and edge cross products of
    both cells; contact within TOL (shared faces/edges/vertices) does
    not count as overlap.
    """
    pa = np.array([[float(c) for c in v] for v in a.vertices])
    pb = np.array([[float(c) for c in v] for v in b.vertices])
    for axis in _sat_axes(a, b):
        proj_a = pa @ axis
        proj_b = pb @ axis
        lo = max(proj_a.min(), proj_b.min())
        hi = min(proj_a.max(), proj_b.max())
        if hi - lo <= TOL:
            return False
    return True


def point_in_cell(p, cell: ConvexCell, margin: float = 0.0) -> bool:
    """True if p lies inside the cell shrunk inward by ``margin``."""
    q = np.asarray(p, dtype=float)
    for i in range(len(cell.faces)):
        n = cell.face_normal(i)
        v0 = np.asarray(
            [float(c) for c in cell.vertices[cell.faces[i][0]]]
        )
        if float((q - v0) @ n) > -margin:
            return False
    return True


# ---------------------------------------------------------------------------
# exact lattice symmetries: the 48 signed permutations of the cubic group

def _signed_permutations():
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            out.append((perm, signs))
    return tuple(out)


LATTICE_SYMMETRIES = _signed_permutations()


def apply_symmetry(sym, p: IntVec) -> IntVec:
    perm, signs = sym
    return (
        signs[0] * p[perm[0]],
        signs[1] * p[perm[1]],
        signs[2] * p[perm[2]],
    )


def symmetry_is_proper(sym) -> bool:
    perm, signs = sym
    # permutation parity times product of signs
    parity = 1
    perm_l = list(perm)
    for i in range(3):
        if perm_l[i] != i:
            j = perm_l.index(i)
            perm_l[i], perm_l[j] = perm_l[j], perm_l[i]
            parity = -parity
    return parity * signs[0] * signs[1] * signs[2] > 0


def symmetry_isometry(sym) -> Isometry:
    perm, signs = sym
    m = np.zeros((3, 3))
    for i in range(3):
        m[i, perm[i]] = signs[i]
    return Isometry(m, np.zeros(3))
