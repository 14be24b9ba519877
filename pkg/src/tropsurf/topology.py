"""Topological invariants of delta-complexes: Euler characteristic, Betti
numbers over the rationals, vertex links, connectivity notions, and
orientability of closed-surface facet subsets.

Betti numbers use exact fraction arithmetic; torsion is deliberately not
computed (only real/rational cohomology is ever needed here).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complex_core import DeltaComplex2, edge_sign_in_facet
from .errors import NotASurfaceError
from .linalg import rational_rank


@dataclass(frozen=True)
class CohomologySummary:
    b0: int
    b1: int
    b2: int
    r1: int  # rank of the boundary map edges -> vertices
    r2: int  # rank of the boundary map facets -> edges


@dataclass(frozen=True)
class LinkGraph:
    """Link of a vertex: one node per edge-end at the vertex, one arc per
    facet corner connecting the corner's two edge-ends."""

    vertex: int
    nodes: tuple[int, ...]  # incident edge ids, ascending
    arcs: tuple[tuple[int, int, int], ...]  # (facet id, edge id, edge id)

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        adj = {n: set() for n in self.nodes}
        for _, a, b in self.arcs:
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(self.nodes)

    def is_single_cycle(self) -> bool:
        if not self.nodes:
            return False
        degree = {n: 0 for n in self.nodes}
        for _, a, b in self.arcs:
            degree[a] += 1
            degree[b] += 1
        return all(d == 2 for d in degree.values()) and self.is_connected()


def euler_characteristic(c: DeltaComplex2) -> int:
    return c.vertex_count - c.edge_count + c.facet_count


def boundary_matrices(c: DeltaComplex2):
    """Integer matrices of the simplicial boundary maps.

    d1 has one row per edge (columns: vertices), d2 one row per facet
    (columns: edges), both with the usual alternating signs; edge orientation
    is the stored endpoint order.
    """
    d1 = [[0] * c.vertex_count for _ in range(c.edge_count)]
    for e in c.edges:
        d1[e.id][e.w] += 1
        d1[e.id][e.v] -= 1
    d2 = [[0] * c.edge_count for _ in range(c.facet_count)]
    for f in c.facets:
        v0, v1, v2 = f.vertices
        for (x, y), coeff in (((v1, v2), 1), ((v0, v2), -1), ((v0, v1), 1)):
            eid, sign = edge_sign_in_facet(c, f, x, y)
            d2[f.id][eid] += coeff * sign
    return d1, d2


def betti_numbers(c: DeltaComplex2) -> CohomologySummary:
    """Betti numbers over the rationals by exact rank computation."""
    d1, d2 = boundary_matrices(c)
    r1 = rational_rank([[Fraction(x) for x in r] for r in d1], c.vertex_count)
    r2 = rational_rank([[Fraction(x) for x in r] for r in d2], c.edge_count)
    b0 = c.vertex_count - r1
    b1 = c.edge_count - r1 - r2
    b2 = c.facet_count - r2
    return CohomologySummary(b0, b1, b2, r1, r2)


def vertex_link(c: DeltaComplex2, v: int) -> LinkGraph:
    c.check_vertex(v)
    nodes = c.edges_at_vertex[v]
    arcs = []
    for f in c.facets:
        if v not in f.vertices:
            continue
        others = [x for x in f.vertices if x != v]
        e1 = f.edge_between(v, others[0])
        e2 = f.edge_between(v, others[1])
        arcs.append((f.id, e1, e2))
    return LinkGraph(v, nodes, tuple(arcs))


def is_locally_connected_codim1(c: DeltaComplex2) -> bool:
    """True iff the link of every vertex is connected."""
    return all(vertex_link(c, v).is_connected() for v in range(c.vertex_count))


def is_connected_codim1(c: DeltaComplex2) -> bool:
    """True iff every edge lies in a facet and the facet-adjacency graph
    (facets adjacent when they share an edge) is connected."""
    if c.facet_count == 0:
        return False
    if any(len(fs) == 0 for fs in c.facets_at_edge):
        return False
    seen = {0}
    stack = [0]
    while stack:
        f = stack.pop()
        for eid in c.facets[f].edges:
            for g in c.facets_at_edge[eid]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
    return len(seen) == c.facet_count


# ---------------------------------------------------------------------------
# closed surfaces and orientations
# ---------------------------------------------------------------------------


def _subcomplex_cells(c: DeltaComplex2, facet_subset):
    facets = sorted(set(facet_subset))
    edges = sorted({eid for fid in facets for eid in c.facets[fid].edges})
    vertices = sorted({v for fid in facets for v in c.facets[fid].vertices})
    return vertices, edges, facets


def is_closed_surface(c: DeltaComplex2, facet_subset) -> bool:
    """True iff the subcomplex generated by the facet subset is a connected
    closed surface: every edge degree exactly 2 inside it and every vertex
    link inside it a single cycle."""
    facets = set(facet_subset)
    if not facets:
        return False
    for fid in facets:
        c.facet(fid)
    vertices, edges, _ = _subcomplex_cells(c, facets)
    deg = {eid: 0 for eid in edges}
    for fid in facets:
        for eid in c.facets[fid].edges:
            deg[eid] += 1
    if any(d != 2 for d in deg.values()):
        return False
    for v in vertices:
        nodes = tuple(sorted(
            eid for eid in c.edges_at_vertex[v] if eid in deg
        ))
        arcs = []
        for fid in facets:
            f = c.facets[fid]
            if v in f.vertices:
                others = [x for x in f.vertices if x != v]
                arcs.append((fid, f.edge_between(v, others[0]),
                             f.edge_between(v, others[1])))
        if not LinkGraph(v, nodes, tuple(arcs)).is_single_cycle():
            return False
    # connectivity through shared edges
    facets_sorted = sorted(facets)
    seen = {facets_sorted[0]}
    stack = [facets_sorted[0]]
    while stack:
        f = stack.pop()
        for eid in c.facets[f].edges:
            for g in c.facets_at_edge[eid]:
                if g in facets and g not in seen:
                    seen.add(g)
                    stack.append(g)
    return len(seen) == len(facets)


def _edge_direction(c: DeltaComplex2, f, x: int, y: int) -> int:
    """+1 if the stored orientation of the facet edge x->y is (x, y)."""
    _, sign = edge_sign_in_facet(c, f, x, y)
    return sign


def _boundary_directions(c: DeltaComplex2, fid: int) -> dict[int, int]:
    """Directions induced on the three edges by the facet's reference
    orientation v0 -> v1 -> v2 -> v0, as stored-orientation signs."""
    f = c.facets[fid]
    v0, v1, v2 = f.vertices
    out = {}
    for x, y in ((v0, v1), (v1, v2), (v2, v0)):
        eid = f.edge_between(x, y)
        out[eid] = _edge_direction(c, f, x, y)
    return out


@dataclass(frozen=True)
class OrientationResult:
    orientable: bool
    # facet id -> +1/-1 relative to stored vertex order (when orientable)
    orientation: dict | None
    # a facet cycle witnessing non-orientability (when not orientable)
    witness_cycle: tuple[int, ...] | None


def orientability(c: DeltaComplex2, facet_subset) -> OrientationResult:
    """Decide orientability of a closed-surface facet subset by propagating
    facet orientations across its degree-2 edges; a propagation conflict
    yields a witness cycle of facets."""
    facets = sorted(set(facet_subset))
    if not is_closed_surface(c, facets):
        raise NotASurfaceError("facet subset is not a closed surface")
    fset = set(facets)
    dirs = {fid: _boundary_directions(c, fid) for fid in facets}
    orient: dict[int, int] = {facets[0]: 1}
    parent: dict[int, int | None] = {facets[0]: None}
    stack = [facets[0]]
    while stack:
        f = stack.pop()
        for eid in c.facets[f].edges:
            for g in c.facets_at_edge[eid]:
                if g not in fset or g == f:
                    continue
                # coherent orientations induce opposite directions on e
                rel = -dirs[f][eid] * dirs[g][eid]
                want = orient[f] * rel
                if g not in orient:
                    orient[g] = want
                    parent[g] = f
                    stack.append(g)
                elif orient[g] != want:
                    return OrientationResult(
                        False, None, _conflict_cycle(parent, f, g)
                    )
    return OrientationResult(True, orient, None)


def _conflict_cycle(parent, f: int, g: int) -> tuple[int, ...]:
    def chain(x):
        out = [x]
        while parent[x] is not None:
            x = parent[x]
            out.append(x)
        return out
    cf, cg = chain(f), chain(g)
    common = set(cf) & set(cg)
    fi = next(i for i, x in enumerate(cf) if x in common)
    gi = next(i for i, x in enumerate(cg) if x in common)
    return tuple(cf[: fi + 1] + cg[:gi][::-1])
