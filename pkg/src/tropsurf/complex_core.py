"""Data model and validation for finite regular delta-complexes of dimension <= 2.

Fixture format (UTF-8 text, line oriented, ``#`` starts a comment, tokens
whitespace separated)::

    tropsurf 1
    vertices <n>
    edge <eid> <v> <w>
    facet <fid> <v0> <v1> <v2> <e01> <e02> <e12>
    alpha <eid> <vid> <int>        # optional, consumed by the tropical module

Vertices are the dense ids ``0 .. n-1``.  Edge and facet ids in a fixture may
be sparse; they are normalized to dense ids (sorted by original id) at build
time and the original ids are kept so error messages can refer to them.
Serialization always emits dense ids, blocks in the order above, each block
sorted by id, single spaces, trailing newline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DisconnectedError,
    FixtureSyntaxError,
    IncoherentIncidenceError,
    NonRegularError,
    UnknownIdError,
)

FORMAT_VERSION = "tropsurf 1"


@dataclass(frozen=True)
class Edge:
    id: int
    v: int
    w: int

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.v, self.w)

    def other(self, x: int) -> int:
        """The endpoint of this edge that is not ``x``."""
        if x == self.v:
            return self.w
        if x == self.w:
            return self.v
        raise UnknownIdError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class Facet:
    id: int
    vertices: tuple[int, int, int]
    edges: tuple[int, int, int]  # (e01, e02, e12)

    def edge_between(self, x: int, y: int) -> int:
        """The edge id of this facet joining vertices x and y."""
        v0, v1, v2 = self.vertices
        pairs = {
            frozenset((v0, v1)): self.edges[0],
            frozenset((v0, v2)): self.edges[1],
            frozenset((v1, v2)): self.edges[2],
        }
        key = frozenset((x, y))
        if key not in pairs:
            raise UnknownIdError(f"facet {self.id} has no edge between {x} and {y}")
        return pairs[key]


@dataclass(frozen=True)
class DeltaComplex2:
    """A finite regular delta-complex of dimension <= 2 with dense ids.

    Values are immutable after construction and safe to share across threads.
    ``edges_at_vertex`` and ``facets_at_edge`` are incidence tables derived in
    ``__post_init__``; they never enter equality comparisons.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    facets: tuple[Facet, ...]
    # original fixture ids (dense id -> original id); identity after round-trips
    orig_edge_ids: tuple[int, ...] = field(default=(), compare=False, repr=False)
    orig_facet_ids: tuple[int, ...] = field(default=(), compare=False, repr=False)
    edges_at_vertex: tuple[tuple[int, ...], ...] = field(
        init=False, compare=False, repr=False
    )
    facets_at_edge: tuple[tuple[int, ...], ...] = field(
        init=False, compare=False, repr=False
    )

    def __post_init__(self):
        by_vertex: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            by_vertex[e.v].append(e.id)
            by_vertex[e.w].append(e.id)
        by_edge: list[list[int]] = [[] for _ in range(len(self.edges))]
        for f in self.facets:
            for eid in f.edges:
                by_edge[eid].append(f.id)
        object.__setattr__(
            self, "edges_at_vertex", tuple(tuple(sorted(x)) for x in by_vertex)
        )
        object.__setattr__(
            self, "facets_at_edge", tuple(tuple(sorted(x)) for x in by_edge)
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def facet_count(self) -> int:
        return len(self.facets)

    def edge(self, eid: int) -> Edge:
        if not 0 <= eid < len(self.edges):
            raise UnknownIdError(f"unknown edge id {eid}")
        return self.edges[eid]

    def facet(self, fid: int) -> Facet:
        if not 0 <= fid < len(self.facets):
            raise UnknownIdError(f"unknown facet id {fid}")
        return self.facets[fid]

    def check_vertex(self, vid: int) -> int:
        if not 0 <= vid < self.vertex_count:
            raise UnknownIdError(f"unknown vertex id {vid}")
        return vid


@dataclass(frozen=True)
class EdgeStar:
    """The star of an edge: its facets and their opposite vertices.

    ``quotient_vector`` is ``(1, ..., 1, -alpha(v,e), -alpha(w,e))`` and is
    populated only when structure constants are attached; its coordinates sum
    to ``deg(e) - alpha(v,e) - alpha(w,e)``, which is zero exactly when the
    edge constraint holds.
    """

    edge: int
    endpoints: tuple[int, int]
    incident_facets: tuple[int, ...]
    opposite_vertices: tuple[int, ...]
    quotient_vector: tuple[int, ...] | None = None

    @property
    def degree(self) -> int:
        return len(self.incident_facets)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParsedFixture:
    complex: DeltaComplex2
    # (edge id, vertex id, value) triples with edge ids already dense
    alphas: tuple[tuple[int, int, int], ...]
    cover_lines: tuple[tuple[int, int, int], ...] = ()


def _tokenize(raw: str):
    for line_no, line in enumerate(raw.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = body.split()
        if tokens:
            yield line_no, tokens


def _int_token(line_no: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FixtureSyntaxError(line_no, f"expected integer {what}, got {token!r}")


def parse_fixture(raw: str) -> ParsedFixture:
    """Parse fixture text into a validated complex plus raw alpha lines."""
    lines = list(_tokenize(raw))
    if not lines:
        raise FixtureSyntaxError(0, "empty fixture")
    line_no, header = lines[0]
    if header != FORMAT_VERSION.split():
        raise FixtureSyntaxError(line_no, f"expected header {FORMAT_VERSION!r}")

    vertex_count = None
    edge_rows: list[tuple[int, int, int, int]] = []  # (orig id, v, w, line)
    facet_rows: list[tuple[int, tuple[int, ...], int]] = []
    alpha_rows: list[tuple[int, int, int, int]] = []
    cover_rows: list[tuple[int, int, int]] = []

    for line_no, tokens in lines[1:]:
        kind = tokens[0]
        args = tokens[1:]
        if kind == "vertices":
            if vertex_count is not None:
                raise FixtureSyntaxError(line_no, "duplicate vertices line")
            if len(args) != 1:
                raise FixtureSyntaxError(line_no, "vertices takes one count")
            vertex_count = _int_token(line_no, args[0], "vertex count")
            if vertex_count < 0:
                raise FixtureSyntaxError(line_no, "vertex count must be nonnegative")
        elif kind == "edge":
            if len(args) != 3:
                raise FixtureSyntaxError(line_no, "edge takes <eid> <v> <w>")
            eid, v, w = (_int_token(line_no, a, "edge field") for a in args)
            edge_rows.append((eid, v, w, line_no))
        elif kind == "facet":
            if len(args) != 7:
                raise FixtureSyntaxError(
                    line_no, "facet takes <fid> <v0> <v1> <v2> <e01> <e02> <e12>"
                )
            vals = tuple(_int_token(line_no, a, "facet field") for a in args)
            facet_rows.append((vals[0], vals[1:], line_no))
        elif kind == "alpha":
            if len(args) != 3:
                raise FixtureSyntaxError(line_no, "alpha takes <eid> <vid> <int>")
            eid, vid, val = (_int_token(line_no, a, "alpha field") for a in args)
            alpha_rows.append((eid, vid, val, line_no))
        elif kind == "cover":
            if len(args) != 3:
                raise FixtureSyntaxError(line_no, "cover takes <new-id> <base-id> <sheet>")
            cover_rows.append(tuple(_int_token(line_no, a, "cover field") for a in args))
        else:
            raise FixtureSyntaxError(line_no, f"unknown record kind {kind!r}")

    if vertex_count is None:
        raise FixtureSyntaxError(0, "missing vertices line")

    # normalize edge ids to dense, sorted by original id
    edge_rows.sort(key=lambda r: r[0])
    edge_id_map: dict[int, int] = {}
    edges: list[Edge] = []
    for dense, (orig, v, w, line_no) in enumerate(edge_rows):
        if orig in edge_id_map:
            raise FixtureSyntaxError(line_no, f"duplicate edge id {orig}")
        if not (0 <= v < vertex_count and 0 <= w < vertex_count):
            raise IncoherentIncidenceError(
                f"line {line_no}: edge {orig} references unknown vertex"
            )
        if v == w:
            raise NonRegularError(f"line {line_no}: edge {orig} has equal endpoints")
        edge_id_map[orig] = dense
        edges.append(Edge(dense, v, w))

    facet_rows.sort(key=lambda r: r[0])
    facet_id_map: dict[int, int] = {}
    facets: list[Facet] = []
    for dense, (orig, vals, line_no) in enumerate(facet_rows):
        if orig in facet_id_map:
            raise FixtureSyntaxError(line_no, f"duplicate facet id {orig}")
        v0, v1, v2, a01, a02, a12 = vals
        for v in (v0, v1, v2):
            if not 0 <= v < vertex_count:
                raise IncoherentIncidenceError(
                    f"line {line_no}: facet {orig} references unknown vertex {v}"
                )
        if len({v0, v1, v2}) != 3:
            raise NonRegularError(
                f"line {line_no}: facet {orig} has repeated vertices ({v0},{v1},{v2})"
            )
        eids = []
        for orig_eid in (a01, a02, a12):
            if orig_eid not in edge_id_map:
                raise IncoherentIncidenceError(
                    f"line {line_no}: facet {orig} references unknown edge {orig_eid}"
                )
            eids.append(edge_id_map[orig_eid])
        if len(set(eids)) != 3:
            raise NonRegularError(f"line {line_no}: facet {orig} has repeated edges")
        for eid, (x, y) in zip(eids, ((v0, v1), (v0, v2), (v1, v2))):
            if {edges[eid].v, edges[eid].w} != {x, y}:
                raise IncoherentIncidenceError(
                    f"line {line_no}: facet {orig} edge {edge_rows[eid][0]} "
                    f"does not join vertices {x} and {y}"
                )
        facet_id_map[orig] = dense
        facets.append(Facet(dense, (v0, v1, v2), tuple(eids)))

    complex_ = DeltaComplex2(
        vertex_count=vertex_count,
        edges=tuple(edges),
        facets=tuple(facets),
        orig_edge_ids=tuple(r[0] for r in edge_rows),
        orig_facet_ids=tuple(r[0] for r in facet_rows),
    )
    _check_connected(complex_)

    alphas = []
    for eid, vid, val, line_no in alpha_rows:
        if eid not in edge_id_map:
            raise IncoherentIncidenceError(
                f"line {line_no}: alpha references unknown edge {eid}"
            )
        alphas.append((edge_id_map[eid], vid, val))

    return ParsedFixture(complex_, tuple(alphas), tuple(cover_rows))


def build_complex(raw: str) -> DeltaComplex2:
    """Parse and validate a fixture, discarding any alpha lines."""
    return parse_fixture(raw).complex


def validate_complex(c: DeltaComplex2) -> DeltaComplex2:
    """Re-run the structural checks on a directly constructed complex.

    Used by operations that build new complexes in memory (blow-ups, covers)
    so they meet the same invariants as parsed fixtures.
    """
    for i, e in enumerate(c.edges):
        if e.id != i:
            raise IncoherentIncidenceError(f"edge ids are not dense at {e.id}")
        if not (0 <= e.v < c.vertex_count and 0 <= e.w < c.vertex_count):
            raise IncoherentIncidenceError(f"edge {e.id} references unknown vertex")
        if e.v == e.w:
            raise NonRegularError(f"edge {e.id} has equal endpoints")
    for i, f in enumerate(c.facets):
        if f.id != i:
            raise IncoherentIncidenceError(f"facet ids are not dense at {f.id}")
        if len(set(f.vertices)) != 3:
            raise NonRegularError(f"facet {f.id} has repeated vertices")
        if len(set(f.edges)) != 3:
            raise NonRegularError(f"facet {f.id} has repeated edges")
        v0, v1, v2 = f.vertices
        for eid, (x, y) in zip(f.edges, ((v0, v1), (v0, v2), (v1, v2))):
            if not 0 <= eid < len(c.edges):
                raise IncoherentIncidenceError(
                    f"facet {f.id} references unknown edge {eid}"
                )
            if {c.edges[eid].v, c.edges[eid].w} != {x, y}:
                raise IncoherentIncidenceError(
                    f"facet {f.id} edge {eid} does not join vertices {x} and {y}"
                )
    _check_connected(c)
    return c


def _check_connected(c: DeltaComplex2) -> None:
    if c.vertex_count == 0:
        raise DisconnectedError("empty complex")
    for v in range(c.vertex_count):
        if not c.edges_at_vertex[v]:
            raise DisconnectedError(f"vertex {v} lies on no edge")
    # union-find over the 1-skeleton; every vertex lies on an edge, so
    # 1-skeleton connectivity is connectivity of the whole space
    parent = list(range(c.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in c.edges:
        a, b = find(e.v), find(e.w)
        if a != b:
            parent[a] = b
    roots = {find(v) for v in range(c.vertex_count)}
    if len(roots) > 1:
        raise DisconnectedError(f"complex has {len(roots)} connected components")


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def edge_degree(c: DeltaComplex2, eid: int) -> int:
    """Number of facets containing edge ``eid``."""
    c.edge(eid)
    return len(c.facets_at_edge[eid])


def edge_star(c: DeltaComplex2, eid: int, alpha=None) -> EdgeStar:
    """Star of an edge, facets enumerated in facet-id order.

    ``alpha`` may be a mapping ``(edge id, vertex id) -> int``; when given,
    the quotient vector is populated.
    """
    e = c.edge(eid)
    fids = c.facets_at_edge[eid]
    opposite = []
    for fid in fids:
        f = c.facets[fid]
        (o,) = [x for x in f.vertices if x not in (e.v, e.w)]
        opposite.append(o)
    qv = None
    if alpha is not None:
        qv = tuple([1] * len(fids) + [-alpha[(eid, e.v)], -alpha[(eid, e.w)]])
    return EdgeStar(eid, (e.v, e.w), tuple(fids), tuple(opposite), qv)


def edge_sign_in_facet(c: DeltaComplex2, f: Facet, x: int, y: int) -> tuple[int, int]:
    """(edge id, sign) for the facet edge from x to y.

    Sign is +1 when the stored edge orientation is (x, y), else -1.
    """
    eid = f.edge_between(x, y)
    e = c.edges[eid]
    return eid, (1 if (e.v, e.w) == (x, y) else -1)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def serialize(c: DeltaComplex2, alpha=None, cover_lines=None) -> str:
    """Emit the bit-exact fixture text for a complex.

    ``alpha`` may be a mapping ``(edge id, vertex id) -> int``; entries are
    emitted sorted by (edge id, vertex id).  ``cover_lines`` is an iterable of
    (new id, base id, sheet) triples appended verbatim in the given order.
    """
    out = [FORMAT_VERSION]
    out.append(f"vertices {c.vertex_count}")
    for e in c.edges:
        out.append(f"edge {e.id} {e.v} {e.w}")
    for f in c.facets:
        v0, v1, v2 = f.vertices
        e01, e02, e12 = f.edges
        out.append(f"facet {f.id} {v0} {v1} {v2} {e01} {e02} {e12}")
    if alpha is not None:
        for (eid, vid), val in sorted(alpha.items()):
            out.append(f"alpha {eid} {vid} {val}")
    if cover_lines is not None:
        for new_id, base_id, sheet in cover_lines:
            out.append(f"cover {new_id} {base_id} {sheet}")
    return "\n".join(out) + "\n"
