"""Verification and best-effort discovery of manifold-with-fins-and-ornaments
decompositions.

A decomposition splits the complex into a closed-surface part, an ordered
list of fins (contractible pieces glued along simple paths, later fins
meeting earlier ones only at path endpoints), and ornaments meeting the rest
in finitely many vertices.  Contractibility of a fin is certified by greedy
free-face collapse to a point; when the greedy collapse gets stuck the fin is
reported as "unverified" rather than rejected, because collapsibility is only
a sufficient certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex_core import DeltaComplex2
from .errors import NotSubcomplexError, UnknownIdError
from .topology import euler_characteristic, is_closed_surface

_PATH_POINT_NOTE = (
    "meets the manifold in a single vertex (ornament-style contact, "
    "not a path with an edge)"
)


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset[int]
    edges: frozenset[int]
    facets: frozenset[int]

    @classmethod
    def empty(cls) -> "Subcomplex":
        return cls(frozenset(), frozenset(), frozenset())

    @classmethod
    def closure(cls, c: DeltaComplex2, vertices=(), edges=(), facets=()) -> "Subcomplex":
        vs = set(vertices)
        es = set(edges)
        fs = set(facets)
        for fid in fs:
            f = c.facet(fid)
            es.update(f.edges)
            vs.update(f.vertices)
        for eid in set(es):
            e = c.edge(eid)
            vs.update((e.v, e.w))
        for v in vs:
            c.check_vertex(v)
        return cls(frozenset(vs), frozenset(es), frozenset(fs))

    def is_empty(self) -> bool:
        return not (self.vertices or self.edges or self.facets)

    def cells(self):
        return (
            {("v", x) for x in self.vertices}
            | {("e", x) for x in self.edges}
            | {("f", x) for x in self.facets}
        )

    def check_closed(self, c: DeltaComplex2, name: str) -> None:
        for fid in self.facets:
            f = c.facets[fid]
            if not set(f.edges) <= self.edges or not set(f.vertices) <= self.vertices:
                raise NotSubcomplexError(
                    f"{name}: facet {fid} has faces outside the subcomplex"
                )
        for eid in self.edges:
            e = c.edges[eid]
            if not {e.v, e.w} <= self.vertices:
                raise NotSubcomplexError(
                    f"{name}: edge {eid} has endpoints outside the subcomplex"
                )


@dataclass(frozen=True)
class Decomposition:
    sigma: Subcomplex
    fins: tuple[Subcomplex, ...]
    ornaments: Subcomplex = field(default_factory=Subcomplex.empty)


@dataclass(frozen=True)
class DecompositionReport:
    valid: bool
    violations: tuple[str, ...]
    fin_status: tuple[str, ...]  # "certified" | "unverified" per fin
    hyperbolic: bool
    sigma_euler: int


def _path_shape(c: DeltaComplex2, vertices: set[int], edges: set[int]):
    """Classify a (vertices, edges) cell set: returns ("path", endpoints),
    ("point", vertex) or ("bad", reason)."""
    if not edges:
        if len(vertices) == 1:
            return ("point", next(iter(vertices)))
        return ("bad", "no edges and not a single vertex")
    used = set()
    degree: dict[int, int] = {}
    for eid in edges:
        e = c.edges[eid]
        used.update((e.v, e.w))
        degree[e.v] = degree.get(e.v, 0) + 1
        degree[e.w] = degree.get(e.w, 0) + 1
    if used != vertices:
        return ("bad", "intersection has vertices off its own edges")
    ends = [v for v, d in degree.items() if d == 1]
    if len(ends) != 2 or any(d > 2 for d in degree.values()):
        return ("bad", "intersection is not a simple open path")
    # connectivity: walk from one end
    adj: dict[int, list[int]] = {v: [] for v in used}
    for eid in edges:
        e = c.edges[eid]
        adj[e.v].append(e.w)
        adj[e.w].append(e.v)
    seen = {ends[0]}
    stack = [ends[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(used):
        return ("bad", "intersection is disconnected")
    return ("path", tuple(sorted(ends)))


def greedy_collapse(c: DeltaComplex2, sub: Subcomplex) -> bool:
    """Greedy free-face collapse; True when the piece collapses to a point."""
    facets = set(sub.facets)
    edges = set(sub.edges)
    vertices = set(sub.vertices)
    changed = True
    while changed:
        changed = False
        for eid in sorted(edges):
            owners = [f for f in c.facets_at_edge[eid] if f in facets]
            if len(owners) == 1:
                facets.discard(owners[0])
                edges.discard(eid)
                changed = True
                break
        if changed:
            continue
        for v in sorted(vertices):
            in_edges = [e for e in c.edges_at_vertex[v] if e in edges]
            in_facets = [
                f for f in facets if v in c.facets[f].vertices
            ]
            if len(in_edges) == 1 and not in_facets:
                edges.discard(in_edges[0])
                vertices.discard(v)
                changed = True
                break
    return not facets and not edges and len(vertices) == 1


def verify_decomposition(
    c: DeltaComplex2, d: Decomposition
) -> DecompositionReport:
    """Check the five decomposition conditions and certify fins.

    A fin whose greedy collapse gets stuck is reported "unverified" (an
    honest third state), not a violation; everything else that fails is.
    """
    d.sigma.check_closed(c, "sigma")
    d.ornaments.check_closed(c, "ornaments")
    for i, fin in enumerate(d.fins):
        fin.check_closed(c, f"fin {i + 1}")

    violations: list[str] = []

    # (1) the parts cover the whole complex
    covered = d.sigma.cells() | d.ornaments.cells()
    for fin in d.fins:
        covered |= fin.cells()
    whole = Subcomplex.closure(
        c,
        vertices=range(c.vertex_count),
        edges=range(c.edge_count),
        facets=range(c.facet_count),
    ).cells()
    for kind, cid in sorted(whole - covered):
        violations.append(f"cell {kind}{cid} not covered by any part")

    # (2) the manifold part is a connected closed surface
    if not d.sigma.facets or not is_closed_surface(c, d.sigma.facets):
        violations.append("sigma is not a connected closed surface")
    sigma_chi = (
        len(d.sigma.vertices) - len(d.sigma.edges) + len(d.sigma.facets)
    )

    # (3) each fin meets sigma in a simple path (and is contractible)
    fin_status: list[str] = []
    path_ends: list[tuple[int, ...]] = []
    sigma_cells = d.sigma.cells()
    for i, fin in enumerate(d.fins, start=1):
        inter = fin.cells() & sigma_cells
        fvs = {x for k, x in inter if k == "v"}
        fes = {x for k, x in inter if k == "e"}
        ffs = {x for k, x in inter if k == "f"}
        if ffs:
            violations.append(f"fin {i} shares facets {sorted(ffs)} with sigma")
            path_ends.append(())
        else:
            shape = _path_shape(c, fvs, fes)
            if shape[0] == "path":
                path_ends.append(shape[1])
            elif shape[0] == "point":
                violations.append(f"fin {i} {_PATH_POINT_NOTE}")
                path_ends.append((shape[1],))
            else:
                violations.append(f"fin {i}: {shape[1]}")
                path_ends.append(())
        chi = len(fin.vertices) - len(fin.edges) + len(fin.facets)
        if chi == 1 and greedy_collapse(c, fin):
            fin_status.append("certified")
        else:
            fin_status.append("unverified")

    # (4) later fins meet earlier fins only at their own path endpoints
    for i in range(len(d.fins)):
        for j in range(i):
            inter = d.fins[i].cells() & d.fins[j].cells()
            allowed = {("v", v) for v in path_ends[i]}
            extra = inter - allowed
            if extra:
                violations.append(
                    f"fins {j + 1} and {i + 1} share cells "
                    f"{sorted(extra)} beyond the endpoints of fin {i + 1}'s path"
                )

    # (5) ornaments meet the rest in a finite set of points
    rest = sigma_cells.copy()
    for fin in d.fins:
        rest |= fin.cells()
    inter = d.ornaments.cells() & rest
    bad = {(k, x) for k, x in inter if k != "v"}
    if bad:
        violations.append(
            f"ornaments share non-vertex cells {sorted(bad)} with the rest"
        )

    return DecompositionReport(
        valid=not violations,
        violations=tuple(violations),
        fin_status=tuple(fin_status),
        hyperbolic=sigma_chi < 0,
        sigma_euler=sigma_chi,
    )


# ---------------------------------------------------------------------------
# decomposition files
# ---------------------------------------------------------------------------
#
#   sigma <facet ids...>
#   fin <k> <facet ids...>            (k = 1-based fin position)
#   ornament <cells...>               (typed tokens: v<id> e<id> f<id>)
#
# sigma and fin lines list facets and are closed under faces; ornament lines
# may name cells of any dimension (closure is taken).


def parse_decomposition(c: DeltaComplex2, text: str) -> Decomposition:
    sigma_facets: list[int] = []
    fin_lines: dict[int, list[int]] = {}
    orn_v: list[int] = []
    orn_e: list[int] = []
    orn_f: list[int] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = body.split()
        if not tokens:
            continue
        kind, args = tokens[0], tokens[1:]
        if kind == "sigma":
            sigma_facets.extend(int(a) for a in args)
        elif kind == "fin":
            if not args:
                raise UnknownIdError(f"line {line_no}: fin needs an index")
            k = int(args[0])
            fin_lines.setdefault(k, []).extend(int(a) for a in args[1:])
        elif kind == "ornament":
            for tok in args:
                if tok[0] == "v":
                    orn_v.append(int(tok[1:]))
                elif tok[0] == "e":
                    orn_e.append(int(tok[1:]))
                elif tok[0] == "f":
                    orn_f.append(int(tok[1:]))
                else:
                    raise UnknownIdError(
                        f"line {line_no}: ornament token {tok!r} "
                        "must be v<id>, e<id> or f<id>"
                    )
        else:
            raise UnknownIdError(f"line {line_no}: unknown record {kind!r}")
    fins = tuple(
        Subcomplex.closure(c, facets=fin_lines[k]) for k in sorted(fin_lines)
    )
    ornaments = (
        Subcomplex.closure(c, vertices=orn_v, edges=orn_e, facets=orn_f)
        if (orn_v or orn_e or orn_f)
        else Subcomplex.empty()
    )
    return Decomposition(
        Subcomplex.closure(c, facets=sigma_facets), fins, ornaments
    )


def serialize_decomposition(d: Decomposition) -> str:
    out = ["sigma " + " ".join(str(f) for f in sorted(d.sigma.facets))]
    for i, fin in enumerate(d.fins, start=1):
        out.append(f"fin {i} " + " ".join(str(f) for f in sorted(fin.facets)))
    if not d.ornaments.is_empty():
        tokens = (
            [f"v{x}" for x in sorted(d.ornaments.vertices)]
            + [f"e{x}" for x in sorted(d.ornaments.edges)]
            + [f"f{x}" for x in sorted(d.ornaments.facets)]
        )
        out.append("ornament " + " ".join(tokens))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# discovery heuristic
# ---------------------------------------------------------------------------


def find_decomposition(c: DeltaComplex2) -> Decomposition | None:
    """Heuristic decomposition: seed the manifold part with the largest
    closed-surface component of the facet graph restricted to degree-2 edges,
    peel the remaining facet components into fins in an order satisfying the
    endpoint condition, and park everything that meets the rest only in
    vertices as ornaments.  Returns None when no assembly verifies."""
    if c.facet_count == 0:
        return None
    # facet components linked through edges of degree exactly 2
    comp = _facet_components(
        c, lambda eid: len(c.facets_at_edge[eid]) == 2
    )
    candidates = [
        fs for fs in comp if is_closed_surface(c, fs)
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda fs: (-len(fs), min(fs)))
    sigma_facets = candidates[0]
    sigma = Subcomplex.closure(c, facets=sigma_facets)

    rest = [f.id for f in c.facets if f.id not in set(sigma_facets)]
    pieces = _facet_components(c, lambda eid: True, subset=rest)

    fins: list[tuple[Subcomplex, tuple[int, ...]]] = []
    orn_vertices: set[int] = set()
    orn_edges: set[int] = set()
    orn_facets: set[int] = set()
    for piece in sorted(pieces, key=min):
        sub = Subcomplex.closure(c, facets=piece)
        inter = sub.cells() & sigma.cells()
        if all(k == "v" for k, _ in inter):
            orn_facets.update(sub.facets)
            orn_edges.update(sub.edges)
            orn_vertices.update(sub.vertices)
            continue
        fes = {x for k, x in inter if k == "e"}
        fvs = {x for k, x in inter if k == "v"}
        shape = _path_shape(c, fvs, fes)
        if shape[0] != "path":
            return None
        fins.append((sub, shape[1]))

    # cells in no facet: dangling edges and their vertices become ornaments
    used_edges = set(sigma.edges) | orn_edges
    used_vertices = set(sigma.vertices) | orn_vertices
    for sub, _ in fins:
        used_edges |= sub.edges
        used_vertices |= sub.vertices
    for e in c.edges:
        if e.id not in used_edges:
            orn_edges.add(e.id)
            orn_vertices.update((e.v, e.w))
    for v in range(c.vertex_count):
        if v not in used_vertices and v not in orn_vertices:
            orn_vertices.add(v)

    ordered = _order_fins(fins)
    if ordered is None:
        return None
    ornaments = (
        Subcomplex.closure(
            c, vertices=orn_vertices, edges=orn_edges, facets=orn_facets
        )
        if (orn_vertices or orn_edges or orn_facets)
        else Subcomplex.empty()
    )
    decomposition = Decomposition(sigma, tuple(ordered), ornaments)
    report = verify_decomposition(c, decomposition)
    return decomposition if report.valid else None


def _facet_components(c: DeltaComplex2, edge_ok, subset=None):
    facet_ids = list(range(c.facet_count)) if subset is None else list(subset)
    remaining = set(facet_ids)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        stack = [seed]
        remaining.discard(seed)
        while stack:
            f = stack.pop()
            for eid in c.facets[f].edges:
                if not edge_ok(eid):
                    continue
                for g in c.facets_at_edge[eid]:
                    if g in remaining:
                        remaining.discard(g)
                        comp.add(g)
                        stack.append(g)
        comps.append(sorted(comp))
    return comps


def _order_fins(fins):
    """Order fin candidates so later fins meet earlier ones only at the later
    fin's path endpoints; deterministic greedy topological order."""
    n = len(fins)
    allowed_after = [[True] * n for _ in range(n)]  # [i][j]: j may come after i
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            inter = fins[i][0].cells() & fins[j][0].cells()
            ok = inter <= {("v", v) for v in fins[j][1]}
            allowed_after[i][j] = ok
    order: list[int] = []
    remaining = list(range(n))
    while remaining:
        pick = None
        for cand in remaining:
            if all(
                allowed_after[cand][other]
                for other in remaining
                if other != cand
            ):
                pick = cand
                break
        if pick is None:
            return None
        order.append(pick)
        remaining.remove(pick)
    return [fins[i][0] for i in order]
