"""Structural node/member graphs extracted from assemblies.

Nodes are deduplicated cell vertices, members deduplicated cell edges.
A node is interior when its valence reaches 12, the kissing number of
the lattice; every member of a sound octet truss lies in at least one
triangle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .assembly import Assembly
from .errors import EmptyAssembly
from .geometry import TOL

#: valence of a node fully surrounded by honeycomb cells
INTERIOR_VALENCE = 12


@dataclass(frozen=True)
class FrameGraph:
    """Deduplicated truss geometry.

    ``member_cells`` records, per member, the indices of every cell
    that contributed the edge.  Exact when the source assembly is.
    """

    nodes: tuple
    members: tuple
    member_cells: tuple
    exact: bool

    def valence(self, node: int) -> int:
        return sum(1 for a, b in self.members if node in (a, b))

    def node_tags(self) -> tuple:
        counts = [0] * len(self.nodes)
        for a, b in self.members:
            counts[a] += 1
            counts[b] += 1
        return tuple(
            "interior" if c >= INTERIOR_VALENCE else "boundary" for c in counts
        )


def _node_key(v, exact: bool):
    if exact:
        return tuple(int(c) for c in v)
    return tuple(round(float(c) / TOL) for c in v)


def extract(assembly: Assembly) -> FrameGraph:
    """Graph of an assembly; node order is canonical by coordinates."""
    if len(assembly) == 0:
        raise EmptyAssembly("cannot extract a frame from an empty assembly")
    cells = assembly.cells
    exact = all(c.is_exact for c in cells)
    node_map = {}
    for cell in cells:
        for v in cell.vertices:
            key = _node_key(v, exact)
            if key not in node_map:
                node_map[key] = tuple(
                    int(c) if exact else float(c) for c in v
                )
    ordered = sorted(node_map)
    index = {key: i for i, key in enumerate(ordered)}
    nodes = tuple(node_map[key] for key in ordered)

    member_cells: dict = {}
    for ci, cell in enumerate(cells):
        for a, b in cell.edges():
            ka = index[_node_key(cell.vertices[a], exact)]
            kb = index[_node_key(cell.vertices[b], exact)]
            if ka == kb:
                continue
            m = (ka, kb) if ka < kb else (kb, ka)
            member_cells.setdefault(m, []).append(ci)
    members = tuple(sorted(member_cells))
    return FrameGraph(
        nodes,
        members,
        tuple(tuple(member_cells[m]) for m in members),
        exact,
    )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the truss checks; ``failures`` explains every False."""

    uniform_lengths: bool
    interior_valence_ok: bool
    connected: bool
    fully_triangulated: bool
    member_count: int
    node_count: int
    interior_node_count: int
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def _sq_length(graph: FrameGraph, member) -> float:
    a = graph.nodes[member[0]]
    b = graph.nodes[member[1]]
    return sum((float(x) - float(y)) ** 2 for x, y in zip(a, b))


def validate(graph: FrameGraph) -> ValidationReport:
    """Check uniform member lengths, interior valence, connectivity, and
    full triangulation; failures are reported, never raised."""
    failures = []

    lengths = [_sq_length(graph, m) for m in graph.members]
    uniform = True
    if lengths:
        ref = lengths[0]
        worst = max(abs(l - ref) for l in lengths)
        uniform = worst <= 1e-9 * max(1.0, ref)
        if not uniform:
            failures.append(
                f"member squared lengths deviate by {worst:.3e}"
            )
        if graph.exact and abs(ref - 2.0) > 1e-9:
            uniform = False
            failures.append(
                f"lattice member squared length {ref} != 2"
            )

    tags = graph.node_tags()
    interior = [i for i, t in enumerate(tags) if t == "interior"]
    valence_ok = True
    for i in interior:
        if graph.valence(i) != INTERIOR_VALENCE:
            valence_ok = False
            failures.append(f"interior node {i} valence != {INTERIOR_VALENCE}")

    adjacency = [set() for _ in graph.nodes]
    for a, b in graph.members:
        adjacency[a].add(b)
        adjacency[b].add(a)
    connected = True
    if graph.nodes:
        seen = {0}
        queue = deque([0])
        while queue:
            n = queue.popleft()
            for m in adjacency[n]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        connected = len(seen) == len(graph.nodes)
        if not connected:
            failures.append(
                f"graph splits into components ({len(seen)} of "
                f"{len(graph.nodes)} nodes reachable)"
            )

    triangulated = True
    for a, b in graph.members:
        if not (adjacency[a] & adjacency[b]):
            triangulated = False
            failures.append(f"member ({a}, {b}) belongs to no triangle")

    return ValidationReport(
        uniform_lengths=uniform,
        interior_valence_ok=valence_ok,
        connected=connected,
        fully_triangulated=triangulated,
        member_count=len(graph.members),
        node_count=len(graph.nodes),
        interior_node_count=len(interior),
        failures=tuple(failures),
    )
