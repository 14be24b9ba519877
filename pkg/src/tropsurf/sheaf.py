"""Global linear functions, sections of the quotient sheaf as balanced
integer cocycles, restriction to a facet, and cohomology-class bookkeeping.

A vertex potential models a global linear function through its values at
vertices; the law at an edge e = (v, w) with opposite vertices o_1..o_d is

    sum_i h(o_i) = alpha(v,e) h(v) + alpha(w,e) h(w).

A section of the quotient sheaf (linear functions modulo local constants) is
an antisymmetric integer edge assignment g that is a cocycle on every facet
and satisfies the difference form of the same law,

    sum_i g(v -> o_i) = alpha(w,e) g(v -> w),

where g(v -> o_i) is read on the edge of the i-th facet joining v and o_i.
The law stated from the other endpoint is implied by the edge constraint plus
the cocycle law, which the test suite asserts.  Integer bases come from the
exact integer kernel, so they are saturated: rank over the integers equals
rank over the rationals, and the section group is free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .complex_core import DeltaComplex2, edge_sign_in_facet, edge_star
from .errors import NotACocycleError, UnknownIdError
from .linalg import coordinates_in_rows, integer_kernel, nullspace, rational_rank, rref
from .topology import boundary_matrices, is_connected_codim1
from .tropical import Verdict, WeakTropicalSurface, classify


@dataclass(frozen=True)
class VertexPotential:
    """Exact rational values at vertices, satisfying the balancing law."""

    values: tuple[Fraction, ...]

    def __getitem__(self, v: int) -> Fraction:
        return self.values[v]


@dataclass(frozen=True)
class SectionOfD:
    """Antisymmetric integer edge assignment; ``values[e]`` is the value on
    edge e read along its stored orientation v -> w."""

    values: tuple[int, ...]

    def oriented(self, c: DeltaComplex2, eid: int, from_vertex: int) -> int:
        e = c.edge(eid)
        if from_vertex == e.v:
            return self.values[eid]
        if from_vertex == e.w:
            return -self.values[eid]
        raise UnknownIdError(f"vertex {from_vertex} not on edge {eid}")


@dataclass(frozen=True)
class SheafSummary:
    rank_linear: int        # global linear functions modulo constants
    rank_sections: int      # rank of the section lattice
    rank_image_h1: int      # rank of the image in H^1(complex, Q)
    exactness_identity: bool  # rank_sections == rank_linear + rank_image_h1


def _balancing_row_potentials(c: DeltaComplex2, alpha, eid: int):
    e = c.edge(eid)
    star = edge_star(c, eid)
    row = [Fraction(0)] * c.vertex_count
    for o in star.opposite_vertices:
        row[o] += 1
    row[e.v] -= alpha[(eid, e.v)]
    row[e.w] -= alpha[(eid, e.w)]
    return row


def global_linear_functions(w: WeakTropicalSurface) -> list[VertexPotential]:
    """Deterministic echelon basis of balanced potentials modulo constants.

    The constant potential is always balanced (that is the edge constraint),
    so the quotient is realized by the slice h(vertex 0) = 0.
    """
    c = w.complex
    rows = [_balancing_row_potentials(c, w.alpha, e.id) for e in c.edges]
    anchor = [Fraction(0)] * c.vertex_count
    anchor[0] = Fraction(1)
    rows.append(anchor)
    basis = nullspace(rows, c.vertex_count)
    return [VertexPotential(tuple(vec)) for vec in basis]


def _section_constraint_rows(c: DeltaComplex2, alpha) -> list[list[int]]:
    rows: list[list[int]] = []
    for f in c.facets:
        v0, v1, v2 = f.vertices
        row = [0] * c.edge_count
        for (x, y), coeff in (((v0, v1), 1), ((v1, v2), 1), ((v0, v2), -1)):
            eid, sign = edge_sign_in_facet(c, f, x, y)
            row[eid] += coeff * sign
        rows.append(row)
    for e in c.edges:
        star = edge_star(c, e.id)
        row = [0] * c.edge_count
        for fid, o in zip(star.incident_facets, star.opposite_vertices):
            eid, sign = edge_sign_in_facet(c, c.facets[fid], e.v, o)
            row[eid] += sign
        row[e.id] -= alpha[(e.id, e.w)]
        rows.append(row)
    return rows


def sections_of_D(
    w: WeakTropicalSurface,
) -> tuple[list[SectionOfD], SheafSummary]:
    """Saturated integer basis of the section lattice plus rank bookkeeping.

    The bookkeeping identity (sections rank equals linear rank plus the rank
    of the image in H^1) is the exactness of the underlying long exact
    sequence; it is asserted here rather than assumed.
    """
    c = w.complex
    rows = _section_constraint_rows(c, w.alpha)
    basis_vectors = integer_kernel(rows, c.edge_count)
    basis = [SectionOfD(tuple(int(x) for x in vec)) for vec in basis_vectors]
    rank_linear = len(global_linear_functions(w))
    classes = [class_in_H1(w, g) for g in basis]
    rank_image = 0
    if classes and len(classes[0]) > 0:
        rank_image = rational_rank([list(cl) for cl in classes], len(classes[0]))
    identity = len(basis) == rank_linear + rank_image
    if not identity:
        raise RuntimeError(
            "exactness bookkeeping failed (implementation bug): "
            f"{len(basis)} != {rank_linear} + {rank_image}"
        )
    return basis, SheafSummary(rank_linear, len(basis), rank_image, identity)


def restrict_to_facet(
    w: WeakTropicalSurface, fid: int, g: SectionOfD
) -> tuple[int, int]:
    """Restriction of a section to a facet: the pair
    (g(v0 -> v1), g(v0 -> v2)); the third difference is the cocycle sum."""
    c = w.complex
    f = c.facet(fid)
    v0, v1, v2 = f.vertices
    e01, s01 = edge_sign_in_facet(c, f, v0, v1)
    e02, s02 = edge_sign_in_facet(c, f, v0, v2)
    return (s01 * g.values[e01], s02 * g.values[e02])


# ---------------------------------------------------------------------------
# cohomology classes
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _h1_data(c: DeltaComplex2):
    """Fixed deterministic H^1 setup: coboundary row space and a complement
    basis inside the cocycle space.  Cached per complex; treat the returned
    rows as read-only."""
    d1, d2 = boundary_matrices(c)
    # coboundary image = column space of d1 = row space of its transpose
    d1t = [[Fraction(d1[e][v]) for e in range(c.edge_count)]
           for v in range(c.vertex_count)]
    cob_rows, _ = rref(d1t, c.edge_count)
    cocycles = nullspace(
        [[Fraction(x) for x in row] for row in d2], c.edge_count
    )
    span = [list(r) for r in cob_rows]
    rank = len(span)
    h1_basis = []
    for vec in cocycles:
        trial = span + [list(vec)]
        new_rank = rational_rank(trial, c.edge_count)
        if new_rank > rank:
            span = trial
            rank = new_rank
            h1_basis.append(list(vec))
    return [list(r) for r in cob_rows], h1_basis


def h1_dimension(c: DeltaComplex2) -> int:
    return len(_h1_data(c)[1])


def class_in_H1(w: WeakTropicalSurface, g: SectionOfD) -> tuple[Fraction, ...]:
    """Coordinates of the class of g in a fixed deterministic basis of
    H^1(complex, Q).  Raises NotACocycleError when g violates the triangle
    cocycle law."""
    c = w.complex
    _, d2 = boundary_matrices(c)
    vec = [Fraction(x) for x in g.values]
    for f in c.facets:
        total = sum(
            (Fraction(d2[f.id][e]) * vec[e] for e in range(c.edge_count)),
            Fraction(0),
        )
        if total != 0:
            raise NotACocycleError(
                f"assignment is not a cocycle on facet {f.id}"
            )
    cob_rows, h1_basis = _h1_data(c)
    coeffs = coordinates_in_rows(cob_rows + h1_basis, vec)
    if coeffs is None:
        raise RuntimeError("cocycle not in span of cocycle space (bug)")
    return tuple(coeffs[len(cob_rows):])


# ---------------------------------------------------------------------------
# the all-but-one lemma and the maximum principle, as checkable reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AllButOneReport:
    edge: int
    degree: int
    # solution-space dimension when the potential is held constant on all
    # facets except the indexed one, for each facet choice in star order
    dims_per_free_facet: tuple[int, ...]
    forced_per_free_facet: tuple[bool, ...]
    forced: bool
    # coefficients expressing the free facet position in terms of the rest:
    # (-1, ..., -1, alpha(v,e), alpha(w,e)) over the remaining d-1 opposite
    # positions and the two endpoints
    dependency: tuple[int, ...]


def check_all_but_one(w: WeakTropicalSurface, eid: int) -> AllButOneReport:
    """Rank-check the lemma that a linear function on the star of an edge,
    constant on all but one incident facet, is constant.

    Unknowns are the potential values at the d opposite vertices and the two
    endpoints of the edge (as positions of the star, so repeated opposite
    vertices stay distinct positions); forced means the solution space is
    exactly the constants."""
    c = w.complex
    e = c.edge(eid)
    star = edge_star(c, eid)
    d = star.degree
    av = w.alpha_at(eid, e.v)
    aw = w.alpha_at(eid, e.w)
    n = d + 2  # positions: o_1..o_d, v, w
    balancing = [Fraction(1)] * d + [Fraction(-av), Fraction(-aw)]
    dims = []
    forced = []
    for free in range(d):
        rows = [list(balancing)]
        # h(w) = h(v) and h(o_j) = h(v) for every non-free facet position
        row = [Fraction(0)] * n
        row[d + 1] = Fraction(1)
        row[d] = Fraction(-1)
        rows.append(row)
        for j in range(d):
            if j == free:
                continue
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            row[d] = Fraction(-1)
            rows.append(row)
        dim = n - rational_rank(rows, n)
        dims.append(dim)
        forced.append(dim == 1)
    dependency = tuple([-1] * (d - 1) + [av, aw]) if d >= 1 else (av, aw)
    return AllButOneReport(
        edge=eid,
        degree=d,
        dims_per_free_facet=tuple(dims),
        forced_per_free_facet=tuple(forced),
        forced=bool(forced) and all(forced),
        dependency=dependency,
    )


@dataclass(frozen=True)
class MaxPrincipleReport:
    status: str  # "constant" | "no-interior-max" | "hypothesis-not-met" | "violation"
    detail: str
    interior_max_vertex: int | None = None


def max_principle_probe(
    w: WeakTropicalSurface, region_vertices, values
) -> MaxPrincipleReport:
    """Probe the discrete maximum principle on a union of open vertex stars.

    ``region_vertices`` are the star centers; ``values`` maps every vertex of
    the closed star union to an exact rational.  If the maximum over the
    closure is attained at a center (an interior point) the potential must be
    constant; a nonconstant example would witness an implementation bug, so
    it is reported as a violation rather than silently accepted.
    """
    c = w.complex
    centers = sorted(set(region_vertices))
    for v in centers:
        c.check_vertex(v)
    if not centers:
        return MaxPrincipleReport("hypothesis-not-met", "empty region")
    closure = set(centers)
    for e in c.edges:
        if e.v in centers or e.w in centers:
            closure.update((e.v, e.w))
    for f in c.facets:
        if any(v in centers for v in f.vertices):
            closure.update(f.vertices)
    missing = [v for v in sorted(closure) if v not in values]
    if missing:
        raise UnknownIdError(f"potential missing values at vertices {missing}")
    h = {v: Fraction(values[v]) for v in closure}

    cls = classify(w)
    if cls.verdict is not Verdict.TROPICAL:
        return MaxPrincipleReport(
            "hypothesis-not-met", f"surface classifies {cls.verdict}, not Tropical"
        )
    if not is_connected_codim1(c):
        return MaxPrincipleReport(
            "hypothesis-not-met", "complex is not connected through codimension 1"
        )
    # region connectivity: centers joined when some simplex contains both
    adj = {v: set() for v in centers}
    for e in c.edges:
        if e.v in adj and e.w in adj:
            adj[e.v].add(e.w)
            adj[e.w].add(e.v)
    for f in c.facets:
        inside = [v for v in f.vertices if v in adj]
        for a in inside:
            for b in inside:
                if a != b:
                    adj[a].add(b)
    seen = {centers[0]}
    stack = [centers[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(centers):
        return MaxPrincipleReport("hypothesis-not-met", "region is not connected")
    # balancing on interior edges (an endpoint among the centers)
    for e in c.edges:
        if e.v not in adj and e.w not in adj:
            continue
        star = edge_star(c, e.id)
        lhs = sum((h[o] for o in star.opposite_vertices), Fraction(0))
        rhs = (
            w.alpha_at(e.id, e.v) * h[e.v] + w.alpha_at(e.id, e.w) * h[e.w]
        )
        if lhs != rhs:
            return MaxPrincipleReport(
                "hypothesis-not-met", f"potential is not balanced at edge {e.id}"
            )
    top = max(h.values())
    inner = [v for v in centers if h[v] == top]
    if not inner:
        return MaxPrincipleReport(
            "no-interior-max", "maximum only attained on the boundary"
        )
    if all(val == top for val in h.values()):
        return MaxPrincipleReport(
            "constant", "maximum attained at an interior vertex; potential constant",
            interior_max_vertex=inner[0],
        )
    return MaxPrincipleReport(
        "violation",
        "interior maximum on a nonconstant balanced potential "
        "(would contradict the maximum principle; implementation bug)",
        interior_max_vertex=inner[0],
    )
