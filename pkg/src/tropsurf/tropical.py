"""Structure constants, the edge constraint, local intersection matrices, and
classification of weak tropical surfaces by exact spectral criteria.

A weak tropical surface is a complex plus integers alpha(v,e) for every
edge-endpoint incidence with alpha(v,e) + alpha(w,e) = deg(e) on each edge.
The local intersection matrix at a vertex v is indexed by the edges at v
(ascending edge id): off-diagonal entries count facets containing both edges,
the diagonal entry for e is -alpha(w,e) with w the far endpoint.  A tropical
surface is a weak one where every local matrix has exactly one positive
eigenvalue; degenerations produce matrices with at most one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .complex_core import DeltaComplex2, edge_degree
from .errors import (
    ConstraintViolatedError,
    DuplicateAlphaError,
    MissingAlphaError,
    NotDegreeTwoError,
    UnknownIdError,
)
from .inertia import Inertia, SymmetricRationalMatrix, inertia


class StructureConstants:
    """Immutable association (edge id, endpoint vertex id) -> integer."""

    __slots__ = ("_map",)

    def __init__(self, entries):
        self._map = dict(entries)

    def __getitem__(self, key) -> int:
        return self._map[key]

    def __contains__(self, key) -> bool:
        return key in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other):
        return isinstance(other, StructureConstants) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def items(self):
        return sorted(self._map.items())

    def get(self, key, default=None):
        return self._map.get(key, default)

    def __repr__(self):
        return f"StructureConstants({self.items()!r})"


@dataclass(frozen=True)
class WeakTropicalSurface:
    """A validated complex-plus-constants pair; build via attach_constants or
    all_ones rather than directly."""

    complex: DeltaComplex2
    alpha: StructureConstants

    def alpha_at(self, eid: int, vid: int) -> int:
        return self.alpha[(eid, vid)]


class Verdict(str, Enum):
    NOT_WEAK = "NotWeak"
    WEAK_ONLY = "WeakOnly"
    DEGENERATION_COMPATIBLE = "DegenerationCompatible"
    TROPICAL = "Tropical"

    def __str__(self) -> str:  # plain name in reports
        return self.value


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    # inertia of the local intersection matrix, indexed by vertex id
    vertex_inertia: tuple[Inertia, ...]
    # every violated edge as (edge id, alpha_v, alpha_w, degree); empty unless NotWeak
    violations: tuple[tuple[int, int, int, int], ...] = ()


def validate_constraint(c: DeltaComplex2, alpha: StructureConstants):
    """All edges violating alpha(v,e)+alpha(w,e) = deg(e), as
    (edge id, alpha_v, alpha_w, degree) tuples."""
    out = []
    for e in c.edges:
        av = alpha[(e.id, e.v)]
        aw = alpha[(e.id, e.w)]
        d = edge_degree(c, e.id)
        if av + aw != d:
            out.append((e.id, av, aw, d))
    return tuple(out)


def attach_constants(c: DeltaComplex2, raw_alphas) -> WeakTropicalSurface:
    """Validate raw (edge id, vertex id, value) triples into a weak tropical
    surface.  Every incidence must be assigned exactly once and every edge
    must satisfy the degree constraint."""
    seen: dict[tuple[int, int], int] = {}
    for eid, vid, val in raw_alphas:
        e = c.edge(eid)
        if vid not in (e.v, e.w):
            raise UnknownIdError(
                f"vertex {vid} is not an endpoint of edge {eid}"
            )
        if (eid, vid) in seen:
            raise DuplicateAlphaError(
                f"alpha({vid}, edge {eid}) assigned more than once"
            )
        seen[(eid, vid)] = int(val)
    missing = [
        (e.id, v)
        for e in c.edges
        for v in (e.v, e.w)
        if (e.id, v) not in seen
    ]
    if missing:
        raise MissingAlphaError(f"missing alpha for incidences {missing}")
    alpha = StructureConstants(seen)
    violations = validate_constraint(c, alpha)
    if violations:
        raise ConstraintViolatedError(violations)
    return WeakTropicalSurface(c, alpha)


def all_ones(c: DeltaComplex2) -> WeakTropicalSurface:
    """The symmetric all-ones constants on a triangulated closed surface
    (every edge degree exactly 2)."""
    bad = [e.id for e in c.edges if edge_degree(c, e.id) != 2]
    if bad:
        raise NotDegreeTwoError(f"edges {bad} do not have degree 2")
    alpha = StructureConstants(
        {(e.id, v): 1 for e in c.edges for v in (e.v, e.w)}
    )
    return WeakTropicalSurface(c, alpha)


def local_matrix(w: WeakTropicalSurface, v: int) -> SymmetricRationalMatrix:
    """Local intersection matrix at v, rows/columns in ascending edge id."""
    return local_matrix_for(w.complex, w.alpha, v)


def local_matrix_for(
    c: DeltaComplex2, alpha: StructureConstants, v: int
) -> SymmetricRationalMatrix:
    c.check_vertex(v)
    eids = c.edges_at_vertex[v]
    index = {eid: i for i, eid in enumerate(eids)}
    n = len(eids)
    rows = [[0] * n for _ in range(n)]
    for i, eid in enumerate(eids):
        far = c.edges[eid].other(v)
        rows[i][i] = -alpha[(eid, far)]
    for f in c.facets:
        if v not in f.vertices:
            continue
        others = [x for x in f.vertices if x != v]
        e1 = index[f.edge_between(v, others[0])]
        e2 = index[f.edge_between(v, others[1])]
        rows[e1][e2] += 1
        rows[e2][e1] += 1
    return SymmetricRationalMatrix.from_rows(rows)


def classify(w: WeakTropicalSurface) -> Classification:
    """Spectral classification of a valid weak tropical surface."""
    return classify_constants(w.complex, w.alpha)


def classify_constants(
    c: DeltaComplex2, alpha: StructureConstants
) -> Classification:
    """Classification that also covers constants violating the edge
    constraint (verdict NotWeak, with every violated edge reported)."""
    table = tuple(
        inertia(local_matrix_for(c, alpha, v)) for v in range(c.vertex_count)
    )
    violations = validate_constraint(c, alpha)
    if violations:
        return Classification(Verdict.NOT_WEAK, table, violations)
    n_plus = [i.n_plus for i in table]
    if any(p >= 2 for p in n_plus):
        return Classification(Verdict.WEAK_ONLY, table)
    if all(p == 1 for p in n_plus):
        return Classification(Verdict.TROPICAL, table)
    return Classification(Verdict.DEGENERATION_COMPATIBLE, table)
