"""Orientation double cover of a manifold-with-fins complex.

Sheets of a facet are its two orientations; two facet sheets are glued across
a shared manifold edge exactly when their orientations induce opposite
directions on it, which is the index-2 cover classified by the first
Stiefel-Whitney class without ever touching fundamental groups.  Vertex lifts
come out of a union-find over facet corners (the holonomy around a manifold
vertex link is always trivial, so every vertex gets exactly two lifts).  Fins
are simply connected, so each lifts componentwise to two disjoint copies,
attached along the two lifts of its gluing path.

Cover cells are numbered 2*base + sheet, which makes the covering map and the
Euler characteristic doubling visible by construction; the doubling, the
orientability of the lifted manifold, and the validity of the lifted
decomposition are re-verified before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex_core import DeltaComplex2, Edge, Facet, validate_complex
from .errors import (
    AlreadyOrientableError,
    NotVerifiedDecompositionError,
)
from .recognizer import Decomposition, Subcomplex, verify_decomposition
from .topology import (
    _boundary_directions,
    euler_characteristic,
    is_closed_surface,
    orientability,
)
from .tropical import StructureConstants


@dataclass(frozen=True)
class CoverResult:
    complex: DeltaComplex2
    # cover id -> (base id, sheet); cover ids are always 2*base + sheet
    vertex_map: tuple[tuple[int, int], ...]
    edge_map: tuple[tuple[int, int], ...]
    facet_map: tuple[tuple[int, int], ...]
    decomposition: Decomposition
    alpha: StructureConstants | None

    def cover_lines(self):
        """(new id, base id, sheet) triples: vertices, then edges, then
        facets, each block in id order (the serialization convention)."""
        out = []
        for block in (self.vertex_map, self.edge_map, self.facet_map):
            out.extend((i, b, s) for i, (b, s) in enumerate(block))
        return out


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = self.parent.setdefault(p, p)
            x = self.parent[x]
            p = self.parent.setdefault(x, x)
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def orientation_double_cover(
    c: DeltaComplex2,
    d: Decomposition,
    alpha: StructureConstants | None = None,
) -> CoverResult:
    """2-to-1 orientable cover of a verified manifold-with-fins complex.

    Requires the decomposition to verify with empty ornaments and a
    non-orientable manifold part.  Structure constants, when given, pull back
    along the covering map (edge degrees are preserved, so the edge
    constraint survives automatically).
    """
    report = verify_decomposition(c, d)
    if not report.valid:
        raise NotVerifiedDecompositionError(
            "decomposition does not verify: " + "; ".join(report.violations)
        )
    if not d.ornaments.is_empty():
        raise NotVerifiedDecompositionError(
            "double cover needs an ornament-free decomposition"
        )
    sigma_facets = sorted(d.sigma.facets)
    if orientability(c, sigma_facets).orientable:
        raise AlreadyOrientableError("manifold part is already orientable")

    sigma_fset = set(sigma_facets)
    dirs = {fid: _boundary_directions(c, fid) for fid in sigma_facets}

    # twist per manifold edge: 0 when the two stored facet orientations are
    # coherent across it, 1 when not
    twist: dict[int, tuple[int, int, int]] = {}  # eid -> (f, g, w)
    for eid in sorted(d.sigma.edges):
        owners = sorted(x for x in c.facets_at_edge[eid] if x in sigma_fset)
        f, g = owners
        w = 0 if dirs[f][eid] * dirs[g][eid] == -1 else 1
        twist[eid] = (f, g, w)

    # vertex lifts via corners (v, f, s)
    uf = _UnionFind()
    for eid, (f, g, w) in twist.items():
        e = c.edges[eid]
        for s in (0, 1):
            for x in (e.v, e.w):
                uf.union((x, f, s), (x, g, s ^ w))

    sigma_vertices = sorted(d.sigma.vertices)
    min_facet_at = {
        v: min(f for f in sigma_facets if v in c.facets[f].vertices)
        for v in sigma_vertices
    }
    vertex_sheet: dict[tuple[int, int, int], int] = {}
    for v in sigma_vertices:
        reps = {}
        for f in sigma_facets:
            if v not in c.facets[f].vertices:
                continue
            for s in (0, 1):
                reps.setdefault(uf.find((v, f, s)), []).append((v, f, s))
        if len(reps) != 2:
            raise RuntimeError(
                f"vertex {v} has {len(reps)} lifts, expected 2 (bug)"
            )
        zero_rep = uf.find((v, min_facet_at[v], 0))
        for root, members in reps.items():
            sheet = 0 if root == zero_rep else 1
            for corner in members:
                vertex_sheet[corner] = sheet

    # edge lifts: sheet of the lift of (eid) containing facet instance (f, s)
    edge_inst_sheet: dict[tuple[int, int, int], int] = {}
    for eid, (f, g, w) in twist.items():
        # the lift containing (f, 0) is sheet 0
        edge_inst_sheet[(eid, f, 0)] = 0
        edge_inst_sheet[(eid, g, w)] = 0
        edge_inst_sheet[(eid, f, 1)] = 1
        edge_inst_sheet[(eid, g, 1 ^ w)] = 1

    def sigma_vertex_lift(v: int, f: int, s: int) -> int:
        return 2 * v + vertex_sheet[(v, f, s)]

    # ------------------------------------------------------------------
    # fins: path lifts, then componentwise copies of fin-only cells
    # ------------------------------------------------------------------
    sigma_cells = d.sigma.cells()
    # per fin: (path vertices, path edges, fin-only vertices/edges/facets)
    fin_data = []
    for fin in d.fins:
        inter = fin.cells() & sigma_cells
        pvs = {x for k, x in inter if k == "v"}
        pes = {x for k, x in inter if k == "e"}
        fin_data.append(
            (
                pvs,
                pes,
                fin.vertices - pvs,
                fin.edges - pes,
                set(fin.facets),
            )
        )

    # sheet of the lift of a path cell inside path lift s, per fin
    # path lift 0 is the component containing sheet 0 of the lowest vertex
    fin_path_sheets = []  # list of dict[("v"/"e", id, lift sheet)] -> path lift
    for pvs, pes, _, _, _ in fin_data:
        comp_uf = _UnionFind()
        for eid in pes:
            f, g, w = twist[eid]
            e = c.edges[eid]
            for s_edge in (0, 1):
                # endpoints of this edge lift, via any member instance
                inst_s = 0 if edge_inst_sheet[(eid, f, 0)] == s_edge else 1
                for x in (e.v, e.w):
                    comp_uf.union(
                        ("e", eid, s_edge),
                        ("v", x, vertex_sheet[(x, f, inst_s)]),
                    )
        for v in pvs:
            for s in (0, 1):
                comp_uf.find(("v", v, s))
        anchor = min(pvs)
        roots: dict[tuple, int] = {}
        roots[comp_uf.find(("v", anchor, 0))] = 0
        other = comp_uf.find(("v", anchor, 1))
        if other in roots:
            raise RuntimeError("path lifts are not disjoint (bug)")
        roots[other] = 1
        sheet_of = {}
        for key in list(comp_uf.parent):
            root = comp_uf.find(key)
            if root not in roots:
                raise RuntimeError("path lift has extra components (bug)")
            sheet_of[key] = roots[root]
        fin_path_sheets.append(sheet_of)

    # ------------------------------------------------------------------
    # assemble cover cells
    # ------------------------------------------------------------------
    V2 = 2 * c.vertex_count
    cover_edges: list[Edge | None] = [None] * (2 * c.edge_count)
    cover_facets: list[Facet | None] = [None] * (2 * c.facet_count)

    def fin_vertex_lift(i: int, v: int, s: int) -> int:
        pvs = fin_data[i][0]
        if v in pvs:
            # the lift of v lying in path lift s
            sheet0 = fin_path_sheets[i][("v", v, 0)]
            return 2 * v + (0 if sheet0 == s else 1)
        return 2 * v + s

    def fin_edge_lift(i: int, eid: int, s: int) -> int:
        pes = fin_data[i][1]
        if eid in pes:
            sheet0 = fin_path_sheets[i][("e", eid, 0)]
            return 2 * eid + (0 if sheet0 == s else 1)
        return 2 * eid + s

    # manifold edges
    for eid, (f, g, w) in twist.items():
        e = c.edges[eid]
        for s_edge in (0, 1):
            inst_s = 0 if edge_inst_sheet[(eid, f, 0)] == s_edge else 1
            cover_edges[2 * eid + s_edge] = Edge(
                2 * eid + s_edge,
                sigma_vertex_lift(e.v, f, inst_s),
                sigma_vertex_lift(e.w, f, inst_s),
            )
    # manifold facets
    for fid in sigma_facets:
        f = c.facets[fid]
        for s in (0, 1):
            verts = tuple(sigma_vertex_lift(v, fid, s) for v in f.vertices)
            eids = tuple(
                2 * eid + edge_inst_sheet[(eid, fid, s)] for eid in f.edges
            )
            cover_facets[2 * fid + s] = Facet(2 * fid + s, verts, eids)
    # fins
    for i, (pvs, pes, fvs, fes, ffs) in enumerate(fin_data):
        for eid in sorted(fes):
            e = c.edges[eid]
            for s in (0, 1):
                cover_edges[2 * eid + s] = Edge(
                    2 * eid + s,
                    fin_vertex_lift(i, e.v, s),
                    fin_vertex_lift(i, e.w, s),
                )
        for fid in sorted(ffs):
            f = c.facets[fid]
            for s in (0, 1):
                verts = tuple(fin_vertex_lift(i, v, s) for v in f.vertices)
                eids = tuple(fin_edge_lift(i, eid, s) for eid in f.edges)
                cover_facets[2 * fid + s] = Facet(2 * fid + s, verts, eids)

    if any(x is None for x in cover_edges) or any(
        x is None for x in cover_facets
    ):
        raise RuntimeError("cover construction left cells unassigned (bug)")

    cover = validate_complex(
        DeltaComplex2(V2, tuple(cover_edges), tuple(cover_facets))
    )
    if euler_characteristic(cover) != 2 * euler_characteristic(c):
        raise RuntimeError("cover does not double the Euler characteristic (bug)")

    # lifted decomposition: manifold lifts as one closed surface, each fin as
    # the ordered pair (copy attached to path lift 0 first)
    sigma2 = Subcomplex(
        frozenset(
            2 * v + s for v in sigma_vertices for s in (0, 1)
        ),
        frozenset(2 * e + s for e in d.sigma.edges for s in (0, 1)),
        frozenset(2 * f + s for f in sigma_fset for s in (0, 1)),
    )
    fins2 = []
    for i, (pvs, pes, fvs, fes, ffs) in enumerate(fin_data):
        for s in (0, 1):
            fins2.append(
                Subcomplex(
                    frozenset(fin_vertex_lift(i, v, s) for v in pvs | fvs),
                    frozenset(fin_edge_lift(i, e, s) for e in pes | fes),
                    frozenset(2 * f + s for f in ffs),
                )
            )
    decomposition2 = Decomposition(sigma2, tuple(fins2), Subcomplex.empty())

    if not is_closed_surface(cover, sorted(sigma2.facets)):
        raise RuntimeError("lifted manifold is not a closed surface (bug)")
    if not orientability(cover, sorted(sigma2.facets)).orientable:
        raise RuntimeError("lifted manifold is not orientable (bug)")
    report2 = verify_decomposition(cover, decomposition2)
    if not report2.valid:
        raise RuntimeError(
            "lifted decomposition does not verify (bug): "
            + "; ".join(report2.violations)
        )

    alpha2 = None
    if alpha is not None:
        entries = {}
        for ce in cover.edges:
            base_e = ce.id // 2
            be = c.edges[base_e]
            entries[(ce.id, ce.v)] = alpha[(base_e, be.v)]
            entries[(ce.id, ce.w)] = alpha[(base_e, be.w)]
        alpha2 = StructureConstants(entries)

    return CoverResult(
        complex=cover,
        vertex_map=tuple((v // 2, v % 2) for v in range(V2)),
        edge_map=tuple((e // 2, e % 2) for e in range(2 * c.edge_count)),
        facet_map=tuple((f // 2, f % 2) for f in range(2 * c.facet_count)),
        decomposition=decomposition2,
        alpha=alpha2,
    )
