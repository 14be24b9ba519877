"""Combinatorial blow-up: attach a triangle along an edge at a negative
semidefinite vertex, with a fixed coefficient table that makes the new and
modified local matrices land on exactly one positive eigenvalue while
preserving the count at the far endpoint.

Repeating the construction at every semidefinite vertex turns any surface
whose local matrices all have at most one positive eigenvalue into a tropical
one; the attached triangles collapse onto their gluing edges, so the
homotopy type never changes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex_core import DeltaComplex2, Edge, Facet, validate_complex
from .errors import (
    NotIncidentError,
    NotSemidefiniteAtVertexError,
    PreconditionViolatedError,
)
from .inertia import Inertia, inertia
from .tropical import (
    StructureConstants,
    Verdict,
    WeakTropicalSurface,
    attach_constants,
    classify,
    local_matrix,
)


@dataclass(frozen=True)
class BlowupRecord:
    vertex: int          # v, the semidefinite vertex blown up
    edge: int            # e, the chosen edge at v
    far_vertex: int      # w, the other endpoint of e
    new_vertex: int      # u'
    new_edge_v: int      # e_v' joining v and u'
    new_edge_w: int      # e_w' joining w and u'
    new_facet: int
    # the six assigned constants as ((edge id, vertex id), value) pairs
    constants: tuple[tuple[tuple[int, int], int], ...]
    inertia_new_vertex: Inertia
    inertia_vertex_after: Inertia
    inertia_far_before: Inertia
    inertia_far_after: Inertia


def blow_up_at(
    w: WeakTropicalSurface, v: int, eid: int
) -> tuple[WeakTropicalSurface, BlowupRecord]:
    """Attach one triangle along edge ``eid`` at vertex ``v``.

    Requires the local matrix at v to be negative semidefinite (no positive
    eigenvalue).  The inertia claims of the construction are re-verified
    exactly before returning; a failure would be an implementation bug.
    """
    c = w.complex
    c.check_vertex(v)
    e = c.edge(eid)
    if v not in (e.v, e.w):
        raise NotIncidentError(f"edge {eid} is not incident to vertex {v}")
    before_v = inertia(local_matrix(w, v))
    if before_v.n_plus != 0:
        raise NotSemidefiniteAtVertexError(
            f"local matrix at vertex {v} has {before_v.n_plus} positive "
            "eigenvalues; blow-up needs zero"
        )
    far = e.other(v)
    before_far = inertia(local_matrix(w, far))

    u_new = c.vertex_count
    ev_id = c.edge_count          # v -- u'
    ew_id = c.edge_count + 1      # w -- u'
    f_id = c.facet_count
    lo, hi = (e.v, e.w) if e.v < e.w else (e.w, e.v)
    lo_new = ev_id if lo == v else ew_id
    hi_new = ev_id if hi == v else ew_id
    new_edges = c.edges + (Edge(ev_id, v, u_new), Edge(ew_id, far, u_new))
    new_facets = c.facets + (
        Facet(f_id, (lo, hi, u_new), (eid, lo_new, hi_new)),
    )
    c2 = validate_complex(DeltaComplex2(c.vertex_count + 1, new_edges, new_facets))

    assigned = {
        (eid, far): w.alpha_at(eid, far),       # alpha(w',e') = alpha(w,e)
        (eid, v): w.alpha_at(eid, v) + 1,       # alpha(v',e') = alpha(v,e)+1
        (ew_id, far): 0,
        (ew_id, u_new): 1,
        (ev_id, v): 2,
        (ev_id, u_new): -1,
    }
    raw = [
        (ei, vi, val)
        for (ei, vi), val in w.alpha.items()
        if (ei, vi) not in ((eid, v),)
    ]
    raw += [(ei, vi, val) for (ei, vi), val in assigned.items() if (ei, vi) != (eid, far)]
    w2 = attach_constants(c2, raw)

    after_u = inertia(local_matrix(w2, u_new))
    after_v = inertia(local_matrix(w2, v))
    after_far = inertia(local_matrix(w2, far))
    if after_u.n_plus != 1 or after_v.n_plus != 1 or after_far.n_plus != before_far.n_plus:
        raise RuntimeError(
            "blow-up postcondition failed (implementation bug): "
            f"u'={after_u}, v'={after_v}, w'={after_far} vs w={before_far}"
        )
    record = BlowupRecord(
        vertex=v,
        edge=eid,
        far_vertex=far,
        new_vertex=u_new,
        new_edge_v=ev_id,
        new_edge_w=ew_id,
        new_facet=f_id,
        constants=tuple(sorted(assigned.items())),
        inertia_new_vertex=after_u,
        inertia_vertex_after=after_v,
        inertia_far_before=before_far,
        inertia_far_after=after_far,
    )
    return w2, record


def robustify(
    w: WeakTropicalSurface,
) -> tuple[WeakTropicalSurface, tuple[BlowupRecord, ...]]:
    """Blow up every negative semidefinite vertex (ascending vertex id,
    lowest incident edge id) until every local matrix has exactly one
    positive eigenvalue.

    The set of semidefinite vertices is computed once up front; the
    construction guarantees counts elsewhere are preserved or raised to
    exactly one, and this is re-asserted at run time.  New vertices never
    need blowing up themselves.
    """
    cls = classify(w)
    if cls.verdict not in (Verdict.DEGENERATION_COMPATIBLE, Verdict.TROPICAL):
        raise PreconditionViolatedError(
            f"robustify needs every n_plus <= 1, got verdict {cls.verdict}"
        )
    todo = [
        v for v, ine in enumerate(cls.vertex_inertia) if ine.n_plus == 0
    ]
    records = []
    current = w
    for v in todo:
        now = inertia(local_matrix(current, v))
        if now.n_plus != 0:
            raise RuntimeError(
                f"vertex {v} stopped being semidefinite mid-run "
                "(implementation bug)"
            )
        eid = min(current.complex.edges_at_vertex[v])
        current, rec = blow_up_at(current, v, eid)
        records.append(rec)
    final = classify(current)
    if final.verdict is not Verdict.TROPICAL:
        raise RuntimeError(
            "robustify failed to reach a tropical surface (implementation bug)"
        )
    return current, tuple(records)
