"""Exhaustive branch-and-prune search for structure constants.

The edge constraint leaves one free integer per edge (anchored at the
lower-id endpoint); bounding it to the window [-B, deg(e)+B] makes
nonexistence certifiable: an exhausted search is a certificate that no
assignment *within the window* meets the spectral target, never a claim
about unbounded constants.

Edges are assigned depth-first in a vertex-completing order (vertices by
descending degree, each vertex's remaining star edges grouped), pruning by
Cauchy interlacing: once the principal submatrix on the assigned edges at
any vertex shows two positive eigenvalues, no completion can recover.  Hot
work runs in the integer kernels (numba by default, pure Python as the
reference backend); if the kernels' overflow guard ever trips the whole
search reruns on exact rational arithmetic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .complex_core import DeltaComplex2, edge_degree
from .inertia import SymmetricRationalMatrix, inertia
from .recognizer import find_decomposition, verify_decomposition
from .tropical import (
    Classification,
    StructureConstants,
    Verdict,
    attach_constants,
    classify,
    classify_constants,
)

_WITNESS_CAP_START = 4096


class Mode(str, Enum):
    TROPICAL = "tropical"          # every vertex: exactly one positive eigenvalue
    AT_MOST_ONE = "at-most-one"    # every vertex: at most one

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SearchSpec:
    complex: DeltaComplex2
    bound: int
    mode: Mode = Mode.TROPICAL
    enumerate_all: bool = False
    deterministic: bool = True
    threads: int = 1
    backend: str | None = None  # kernels backend; None = environment default
    node_budget: int = 2**62  # experimentation escape hatch

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass(frozen=True)
class SearchOutcome:
    witnesses: tuple[StructureConstants, ...]
    exhausted: bool
    nodes_explored: int
    prunes: int
    elapsed: float


@dataclass(frozen=True)
class _Problem:
    order: np.ndarray
    tmin: np.ndarray
    wsize: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    deg: np.ndarray
    star_off: np.ndarray
    star_edge: np.ndarray
    row_lo: np.ndarray
    row_hi: np.ndarray
    amat: np.ndarray
    amat_off: np.ndarray
    max_star: int


def _build_problem(c: DeltaComplex2, bound: int) -> _Problem:
    ne, nv = c.edge_count, c.vertex_count
    lo = np.empty(ne, np.int64)
    hi = np.empty(ne, np.int64)
    deg = np.empty(ne, np.int64)
    for e in c.edges:
        lo[e.id] = min(e.v, e.w)
        hi[e.id] = max(e.v, e.w)
        deg[e.id] = edge_degree(c, e.id)
    tmin = np.full(ne, -bound, np.int64)
    wsize = deg + 2 * bound + 1

    star_off = np.zeros(nv + 1, np.int64)
    for v in range(nv):
        star_off[v + 1] = star_off[v] + len(c.edges_at_vertex[v])
    star_edge = np.empty(star_off[nv], np.int64)
    row_lo = np.empty(ne, np.int64)
    row_hi = np.empty(ne, np.int64)
    for v in range(nv):
        for i, eid in enumerate(c.edges_at_vertex[v]):  # ascending edge id
            star_edge[star_off[v] + i] = eid
            if lo[eid] == v:
                row_lo[eid] = i
            else:
                row_hi[eid] = i

    sizes = [len(c.edges_at_vertex[v]) for v in range(nv)]
    amat_off = np.zeros(nv, np.int64)
    total = 0
    for v in range(nv):
        amat_off[v] = total
        total += sizes[v] * sizes[v]
    amat = np.zeros(total, np.int64)
    for f in c.facets:
        for v in f.vertices:
            others = [x for x in f.vertices if x != v]
            star = c.edges_at_vertex[v]
            idx = {eid: i for i, eid in enumerate(star)}
            a = idx[f.edge_between(v, others[0])]
            b = idx[f.edge_between(v, others[1])]
            s = sizes[v]
            amat[amat_off[v] + a * s + b] += 1
            amat[amat_off[v] + b * s + a] += 1

    # vertex-completing edge order: start at the highest-degree vertex, then
    # repeatedly complete the vertex with the fewest unassigned star edges
    # (ties: higher degree, lower id).  Completions are the strong filters,
    # so the cheapest next completion maximizes the prune rate; a static
    # descending-degree order leaves long unfiltered runs on the hyperbolic
    # fixtures and blows the search up by orders of magnitude.
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(nv))
    while remaining:
        if not order:
            v = max(remaining, key=lambda x: (sizes[x], -x))
        else:
            v = min(
                remaining,
                key=lambda x: (
                    sum(1 for eid in c.edges_at_vertex[x] if eid not in placed),
                    -sizes[x],
                    x,
                ),
            )
        for eid in c.edges_at_vertex[v]:
            if eid not in placed:
                placed.add(eid)
                order.append(eid)
        remaining.discard(v)
    return _Problem(
        order=np.array(order, np.int64),
        tmin=tmin,
        wsize=wsize,
        lo=lo,
        hi=hi,
        deg=deg,
        star_off=star_off,
        star_edge=star_edge,
        row_lo=row_lo,
        row_hi=row_hi,
        amat=amat,
        amat_off=amat_off,
        max_star=max(sizes) if sizes else 0,
    )


def _run_branch(kern, prob: _Problem, spec: SearchSpec, first_ti: int, cap: int):
    ne = prob.order.shape[0]
    nv = prob.star_off.shape[0] - 1
    tvals = np.zeros(ne, np.int64)
    assigned = np.zeros(ne, np.int64)
    ti_stack = np.zeros(ne, np.int64)
    cnt_assigned = np.zeros(nv, np.int64)
    vmask = np.zeros(nv, np.uint64)
    depth_bit = np.zeros(ne, np.uint64)
    conflict = np.zeros(ne, np.uint64)
    sol_below = np.zeros(ne, np.int64)
    scratch = np.zeros(max(prob.max_star * prob.max_star, 1), np.int64)
    pr_state = np.zeros((ne, 2, 5), np.int64)
    witnesses = np.zeros((cap, ne), np.int64)
    counters = np.zeros(3, np.int64)
    status = kern.run_dfs(
        prob.order, prob.tmin, prob.wsize, prob.lo, prob.hi, prob.deg,
        spec.bound,
        prob.star_off, prob.star_edge,
        prob.amat, prob.amat_off,
        spec.mode is Mode.TROPICAL, not spec.enumerate_all, first_ti,
        spec.node_budget,
        tvals, assigned, ti_stack, cnt_assigned, vmask, depth_bit,
        conflict, sol_below, scratch,
        pr_state, witnesses, counters,
    )
    return status, witnesses[: counters[2]].copy(), counters


def _witness_constants(c: DeltaComplex2, prob: _Problem, tvec) -> StructureConstants:
    entries = {}
    for e in c.edges:
        t = int(tvec[e.id])
        entries[(e.id, int(prob.lo[e.id]))] = t
        entries[(e.id, int(prob.hi[e.id]))] = int(prob.deg[e.id]) - t
    return StructureConstants(entries)


def _verify_witness(c: DeltaComplex2, spec: SearchSpec, alpha: StructureConstants) -> Classification:
    cls = classify_constants(c, alpha)
    allowed = (
        (Verdict.TROPICAL,)
        if spec.mode is Mode.TROPICAL
        else (Verdict.TROPICAL, Verdict.DEGENERATION_COMPATIBLE)
    )
    if cls.verdict not in allowed:
        raise RuntimeError(
            f"search emitted a non-witness (implementation bug): {cls.verdict}"
        )
    return cls


def search(spec: SearchSpec) -> SearchOutcome:
    """Run the windowed search; see the module docstring for semantics.

    Every emitted witness is re-verified through the exact classifier before
    being returned.  ``exhausted`` is True exactly when the branch tree
    covered the whole window (always the case unless the search stopped at
    its first witness).
    """
    start = time.perf_counter()
    c = spec.complex
    if c.edge_count == 0:
        return SearchOutcome((), True, 0, 0, time.perf_counter() - start)
    prob = _build_problem(c, spec.bound)
    kern = kernels.get_kernels(spec.backend)

    cap = _WITNESS_CAP_START
    while True:
        result = _search_with_cap(kern, prob, spec, cap)
        if result is not None:
            statuses, tvecs, nodes, prunes = result
            break
        cap *= 8  # witness buffer overflow: rerun with more room

    if any(s == kernels.DFS_NEEDS_EXACT for s in statuses):
        # overflow guard tripped: redo everything on exact rationals
        tvecs, nodes, prunes, exhausted = _search_exact(prob, spec)
    else:
        exhausted = not any(
            s in (kernels.DFS_STOPPED_AT_WITNESS, kernels.DFS_BUDGET_EXCEEDED)
            for s in statuses
        )

    witnesses = [_witness_constants(c, prob, tv) for tv in tvecs]
    for alpha in witnesses:
        _verify_witness(c, spec, alpha)
    if spec.enumerate_all or spec.deterministic:
        keyed = sorted(
            witnesses,
            key=lambda a: tuple(
                a[(e.id, int(prob.lo[e.id]))] for e in c.edges
            ),
        )
        witnesses = keyed
    return SearchOutcome(
        tuple(witnesses), exhausted, nodes, prunes,
        time.perf_counter() - start,
    )


def _search_with_cap(kern, prob, spec, cap):
    first = prob.order[0]
    branch_tis = list(range(int(prob.wsize[first])))
    statuses: list[int] = []
    tvecs: list[np.ndarray] = []
    nodes = 0
    prunes = 0
    if spec.threads > 1 and spec.enumerate_all:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            results = list(
                pool.map(
                    lambda ti: _run_branch(kern, prob, spec, ti, cap),
                    branch_tis,
                )
            )
    else:
        results = []
        for ti in branch_tis:
            res = _run_branch(kern, prob, spec, ti, cap)
            results.append(res)
            if res[0] == kernels.DFS_STOPPED_AT_WITNESS:
                break
    for status, wit, counters in results:
        if status == kernels.DFS_WITNESS_OVERFLOW:
            return None
        statuses.append(status)
        tvecs.extend(wit)
        nodes += int(counters[0])
        prunes += int(counters[1])
    return statuses, tvecs, nodes, prunes


def _search_exact(prob: _Problem, spec: SearchSpec):
    """Reference search on exact rationals; used when the integer kernels
    report possible overflow.  Same traversal, same pruning rules."""
    ne = prob.order.shape[0]
    nv = prob.star_off.shape[0] - 1
    tvals = [0] * ne
    asg: list[list[int]] = [[] for _ in range(nv)]
    nodes = prunes = 0
    found: list[list[int]] = []
    stop_at_first = not spec.enumerate_all
    exact_one = spec.mode is Mode.TROPICAL

    def vertex_nplus(v: int) -> int:
        rows_idx = asg[v]
        size = int(prob.star_off[v + 1] - prob.star_off[v])
        sub = []
        for a, ra in enumerate(rows_idx):
            ea = int(prob.star_edge[prob.star_off[v] + ra])
            d = (
                tvals[ea] - int(prob.deg[ea])
                if int(prob.lo[ea]) == v
                else -tvals[ea]
            )
            row = []
            for rb in rows_idx:
                eb = int(prob.star_edge[prob.star_off[v] + rb])
                if eb == ea:
                    row.append(d)
                else:
                    row.append(int(prob.amat[prob.amat_off[v] + ra * size + rb]))
            sub.append(row)
        return inertia(SymmetricRationalMatrix.from_rows(sub)).n_plus

    def rec(k: int) -> bool:
        nonlocal nodes, prunes
        e = int(prob.order[k])
        lo_v, hi_v = int(prob.lo[e]), int(prob.hi[e])
        asg[lo_v].append(int(prob.row_lo[e]))
        asg[hi_v].append(int(prob.row_hi[e]))
        try:
            for ti in range(int(prob.wsize[e])):
                tvals[e] = int(prob.tmin[e]) + ti
                nodes += 1
                ok = True
                for v in (lo_v, hi_v):
                    npv = vertex_nplus(v)
                    complete = len(asg[v]) == int(
                        prob.star_off[v + 1] - prob.star_off[v]
                    )
                    if npv >= 2 or (complete and exact_one and npv != 1):
                        ok = False
                        break
                if not ok:
                    prunes += 1
                    continue
                if k == ne - 1:
                    found.append(list(tvals))
                    if stop_at_first:
                        return True
                    continue
                if rec(k + 1):
                    return True
        finally:
            asg[lo_v].pop()
            asg[hi_v].pop()
        return False

    stopped = rec(0)
    return found, nodes, prunes, not stopped


# ---------------------------------------------------------------------------
# the obstruction report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    decomposition_found: bool
    hyperbolic_certified: bool
    theorems_apply: bool
    fin_status: tuple[str, ...]
    sigma_euler: int | None
    tropical: SearchOutcome
    at_most_one: SearchOutcome
    robustified_tropical: int  # at-most-one witnesses that robustified to Tropical
    fatal_inconsistency: bool
    bound: int


def obstruction_report(
    c: DeltaComplex2, bound: int, threads: int = 1, backend: str | None = None
) -> ObstructionReport:
    """Combine decomposition recognition with both searches at the given
    bound.  On a certified hyperbolic manifold with fins and ornaments any
    witness in either mode contradicts the nonexistence theorems, so that
    combination is flagged fatal (it would mean an implementation bug)."""
    decomposition = find_decomposition(c)
    hyperbolic = False
    fin_status: tuple[str, ...] = ()
    sigma_euler = None
    if decomposition is not None:
        report = verify_decomposition(c, decomposition)
        hyperbolic = report.valid and report.hyperbolic
        fin_status = report.fin_status
        sigma_euler = report.sigma_euler

    trop = search(SearchSpec(c, bound, Mode.TROPICAL, enumerate_all=True,
                             threads=threads, backend=backend))
    amo = search(SearchSpec(c, bound, Mode.AT_MOST_ONE, enumerate_all=True,
                            threads=threads, backend=backend))

    from .blowup import robustify  # deferred: keeps import graph acyclic

    robustified = 0
    for alpha in amo.witnesses:
        w = attach_constants(c, [(e, v, val) for (e, v), val in alpha.items()])
        w2, _ = robustify(w)
        if classify(w2).verdict is Verdict.TROPICAL:
            robustified += 1
        else:  # pragma: no cover - robustify already asserts this
            raise RuntimeError("robustify returned a non-tropical surface")

    fatal = hyperbolic and (bool(trop.witnesses) or bool(amo.witnesses))
    return ObstructionReport(
        decomposition_found=decomposition is not None,
        hyperbolic_certified=hyperbolic,
        theorems_apply=hyperbolic,
        fin_status=fin_status,
        sigma_euler=sigma_euler,
        tropical=trop,
        at_most_one=amo,
        robustified_tropical=robustified,
        fatal_inconsistency=fatal,
        bound=bound,
    )
