"""Hot integer kernels: capped positive-eigenvalue counts and the
branch-and-prune walker used by the search module.

The same source is built twice: once through ``numba.njit`` (default) and once
as plain Python over NumPy arrays.  Select with the ``TROPSURF_BACKEND``
environment variable (``numba`` or ``python``); the Python build is the
reference the compiled build is tested against, and the fallback when numba
is unavailable.  ``benchmarks/bench_search.py`` times one against the other.

All arithmetic is int64 and exact: entries are kept small by gcd
normalization after every congruence step, and the kernels return a sentinel
(-1 / status 3) before any intermediate product could overflow, at which
point callers fall back to the Fraction-based exact path.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

BACKEND_ENV = "TROPSURF_BACKEND"

# entries above this make the next update risk int64 overflow:
# |p*t - t*t'| <= 2*LIMIT^2 = 2^61 < 2^63
_OVERFLOW_LIMIT = 1 << 30

# run_dfs status codes
DFS_EXHAUSTED = 0
DFS_STOPPED_AT_WITNESS = 1
DFS_WITNESS_OVERFLOW = 2
DFS_NEEDS_EXACT = 3
DFS_BUDGET_EXCEEDED = 4


def _make_kernels(jit):
    """Build the kernel namespace, optionally compiling with ``jit``."""

    @jit
    def _sym_swap(t, m, a, b):
        if a == b:
            return
        for j in range(m):
            tmp = t[a * m + j]
            t[a * m + j] = t[b * m + j]
            t[b * m + j] = tmp
        for i in range(m):
            tmp = t[i * m + a]
            t[i * m + a] = t[i * m + b]
            t[i * m + b] = tmp

    @jit
    def nplus_capped(t, m, cap):
        """Positive index of the symmetric integer matrix in t (row-major,
        m x m scratch, destroyed), early-exiting once the count reaches
        ``cap``.  Returns -1 if entries outgrow the overflow guard.

        Bookkeeping: the stored trailing block always equals sigma times a
        positive multiple of the true Schur complement, so a stored pivot p
        contributes a positive eigenvalue exactly when sign(p) == sigma.
        A hyperbolic 2x2 block contributes (1 plus, 1 minus) regardless of
        sigma.
        """
        npos = 0
        sigma = 1
        k = 0
        while k < m:
            # largest |diagonal| pivot in the trailing block
            piv = -1
            best = np.int64(0)
            for i in range(k, m):
                a = t[i * m + i]
                if a < 0:
                    a = -a
                if a > best:
                    best = a
                    piv = i
            if piv >= 0:
                _sym_swap(t, m, piv, k)
                p = t[k * m + k]
                if (p > 0) == (sigma > 0):
                    npos += 1
                    if npos >= cap:
                        return npos
                # overflow guard before forming p*t - v*v products
                lim = np.int64(_OVERFLOW_LIMIT)
                for i in range(k, m):
                    for j in range(i, m):
                        a = t[i * m + j]
                        if a < 0:
                            a = -a
                        if a > lim:
                            return -1
                for i in range(k + 1, m):
                    for j in range(i, m):
                        val = p * t[i * m + j] - t[i * m + k] * t[j * m + k]
                        t[i * m + j] = val
                        t[j * m + i] = val
                if p < 0:
                    sigma = -sigma
                k += 1
            else:
                # zero diagonal everywhere: hunt an off-diagonal pivot
                bi = -1
                bj = -1
                best = np.int64(0)
                for i in range(k, m):
                    for j in range(i + 1, m):
                        a = t[i * m + j]
                        if a < 0:
                            a = -a
                        if a > best:
                            best = a
                            bi = i
                            bj = j
                if bi < 0:
                    break  # all-zero remainder: only zero eigenvalues left
                npos += 1  # hyperbolic block: one positive, one negative
                if npos >= cap:
                    return npos
                # bi < bj and bj >= k+1, so the first swap leaves bj in place
                _sym_swap(t, m, bi, k)
                _sym_swap(t, m, bj, k + 1)
                q = t[k * m + k + 1]
                lim = np.int64(_OVERFLOW_LIMIT)
                for i in range(k, m):
                    for j in range(i, m):
                        a = t[i * m + j]
                        if a < 0:
                            a = -a
                        if a > lim:
                            return -1
                for i in range(k + 2, m):
                    for j in range(i, m):
                        val = (
                            q * t[i * m + j]
                            - t[i * m + k] * t[j * m + (k + 1)]
                            - t[i * m + (k + 1)] * t[j * m + k]
                        )
                        t[i * m + j] = val
                        t[j * m + i] = val
                if q < 0:
                    sigma = -sigma
                k += 2
            # gcd-normalize the trailing block to keep entries small
            g = np.int64(0)
            for i in range(k, m):
                for j in range(i, m):
                    a = t[i * m + j]
                    if a < 0:
                        a = -a
                    while a != 0:
                        g, a = a, g % a
            if g > 1:
                for i in range(k, m):
                    for j in range(i, m):
                        val = t[i * m + j] // g
                        t[i * m + j] = val
                        t[j * m + i] = val
        return npos

    @jit
    def _gcd_pass(t, m, start, alpha, beta):
        """Divide the trailing block (and the symbolic pair) by their gcd."""
        last = m - 1
        g = alpha if alpha >= 0 else -alpha
        b = beta if beta >= 0 else -beta
        while b != 0:
            g, b = b, g % b
        for i in range(start, m):
            for j in range(i, m):
                if i == last and j == last:
                    continue
                a = t[i * m + j]
                if a < 0:
                    a = -a
                while a != 0:
                    g, a = a, g % a
        if g > 1:
            for i in range(start, m):
                for j in range(i, m):
                    if i == last and j == last:
                        continue
                    val = t[i * m + j] // g
                    t[i * m + j] = val
                    t[j * m + i] = val
            alpha //= g
            beta //= g
        return alpha, beta

    @jit
    def prefix_reduce(t, m, cap):
        """Eliminate the first m-1 rows of the symmetric m x m matrix in t
        (row-major int64 scratch, destroyed), treating the last diagonal
        entry as a symbol d; the last row's off-diagonal couplings are
        ordinary integers.

        Returns (base, kind, alpha, beta, sigma):
          kind 0: n_plus = base + 1 if (alpha*d + beta) is nonzero with
                  sign equal to sigma, else base
          kind 1: n_plus = base regardless of d (capped at ``cap``)
          kind 2: overflow guard tripped; caller must fall back to exact
                  arithmetic

        Fast path is fraction-free Bareiss (divide by the previous pivot,
        entries stay bordered minors); after a hyperbolic step the minor
        structure is gone, so it switches to gcd normalization.  sigma is
        the sign of the scale between the stored trailing block and the true
        Schur complement, so a stored pivot counts positive exactly when its
        sign matches sigma.
        """
        base = 0
        sigma = 1
        alpha = np.int64(1)
        beta = np.int64(0)
        prev = np.int64(1)
        bareiss = True
        lim = np.int64(_OVERFLOW_LIMIT)
        last = m - 1
        k = 0
        while k < last:
            # overflow guard over the live trailing block plus the symbol
            big = np.int64(0)
            for i in range(k, m):
                for j in range(i, m):
                    if i == last and j == last:
                        continue
                    a = t[i * m + j]
                    if a < 0:
                        a = -a
                    if a > big:
                        big = a
            a = alpha if alpha >= 0 else -alpha
            if a > big:
                big = a
            a = beta if beta >= 0 else -beta
            if a > big:
                big = a
            if big > lim:
                return 0, 2, np.int64(0), np.int64(0), 1
            # largest |diagonal| pivot among the prefix rows
            piv = -1
            best = np.int64(0)
            for i in range(k, last):
                a = t[i * m + i]
                if a < 0:
                    a = -a
                if a > best:
                    best = a
                    piv = i
            if piv >= 0:
                _sym_swap(t, m, piv, k)
                p = t[k * m + k]
                if (p > 0) == (sigma > 0):
                    base += 1
                    if base >= cap:
                        return base, 1, np.int64(0), np.int64(0), sigma
                for i in range(k + 1, m):
                    for j in range(i, m):
                        if i == last and j == last:
                            continue
                        num = p * t[i * m + j] - t[i * m + k] * t[j * m + k]
                        if bareiss:
                            num //= prev
                        t[i * m + j] = num
                        t[j * m + i] = num
                c = t[last * m + k]
                na = p * alpha
                nb = p * beta - c * c
                if bareiss:
                    na //= prev
                    nb //= prev
                alpha = na
                beta = nb
                if bareiss:
                    prev = p
                    sigma = 1 if p > 0 else -1
                else:
                    sigma = sigma if p > 0 else -sigma
                    alpha, beta = _gcd_pass(t, m, k + 1, alpha, beta)
                k += 1
                continue
            # zero prefix diagonal: hyperbolic pair inside the prefix?
            bi = -1
            bj = -1
            best = np.int64(0)
            for i in range(k, last):
                for j in range(i + 1, last):
                    a = t[i * m + j]
                    if a < 0:
                        a = -a
                    if a > best:
                        best = a
                        bi = i
                        bj = j
            if bi >= 0:
                base += 1  # hyperbolic block: one positive, one negative
                if base >= cap:
                    return base, 1, np.int64(0), np.int64(0), sigma
                _sym_swap(t, m, bi, k)
                _sym_swap(t, m, bj, k + 1)
                q = t[k * m + k + 1]
                for a in range(k + 2, m):
                    for b in range(a, m):
                        if a == last and b == last:
                            continue
                        num = (
                            q * t[a * m + b]
                            - t[a * m + k] * t[b * m + (k + 1)]
                            - t[a * m + (k + 1)] * t[b * m + k]
                        )
                        t[a * m + b] = num
                        t[b * m + a] = num
                ca = t[last * m + k]
                cb = t[last * m + k + 1]
                alpha = q * alpha
                beta = q * beta - 2 * ca * cb
                sigma = sigma if q > 0 else -sigma
                bareiss = False
                alpha, beta = _gcd_pass(t, m, k + 2, alpha, beta)
                k += 2
                continue
            # stall: prefix block is all zero; any coupling to the last row
            # gives a rank-2 indefinite block independent of d
            coupled = False
            for i in range(k, last):
                if t[i * m + last] != 0:
                    coupled = True
                    break
            if coupled:
                base += 1
                return min(base, cap), 1, np.int64(0), np.int64(0), sigma
            return base, 0, alpha, beta, sigma
        return base, 0, alpha, beta, sigma

    @jit
    def vertex_nplus(
        v, tvals, star_off, star_edge, asg_rows, asg_cnt, amat, amat_off,
        lo, deg, scratch, cap,
    ):
        """n_plus (capped) of the principal submatrix of M_v on the edges
        currently assigned at v.  Diagonals come from the live t values:
        t anchors alpha at the lower-id endpoint, so the far constant seen
        from v is deg - t when v is the low end and t otherwise.
        """
        base = star_off[v]
        size = star_off[v + 1] - base
        cnt = asg_cnt[v]
        moff = amat_off[v]
        for a in range(cnt):
            ra = asg_rows[base + a]
            ea = star_edge[base + ra]
            if lo[ea] == v:
                d = tvals[ea] - deg[ea]
            else:
                d = -tvals[ea]
            scratch[a * cnt + a] = d
            for b in range(a + 1, cnt):
                rb = asg_rows[base + b]
                val = amat[moff + ra * size + rb]
                scratch[a * cnt + b] = val
                scratch[b * cnt + a] = val
        return nplus_capped(scratch, cnt, cap)

    @jit
    def build_star_min(
        x, cur_edge, bound, tvals, assigned, star_off, star_edge,
        amat, amat_off, lo, deg, scratch,
    ):
        """Full local matrix at x with the current edge's row last and its
        diagonal symbolic; assigned edges carry their live diagonal, every
        unassigned edge its window minimum -(deg(e) + bound).

        Any completion of the search dominates this matrix in the Loewner
        order (the completion only raises diagonals), so its positive count
        is a lower bound for every completion: two positives here kill the
        whole subtree.  At a completed vertex it reduces to the exact local
        matrix.  Returns the matrix size.
        """
        base = star_off[x]
        size = star_off[x + 1] - base
        row = 0
        for i in range(size):
            ea = star_edge[base + i]
            if ea == cur_edge:
                continue
            if assigned[ea] != 0:
                if lo[ea] == x:
                    d = tvals[ea] - deg[ea]
                else:
                    d = -tvals[ea]
            else:
                d = -(deg[ea] + bound)
            scratch[row * size + row] = d
            col = 0
            for j in range(size):
                eb = star_edge[base + j]
                if eb == cur_edge:
                    continue
                if j != i:
                    scratch[row * size + col] = amat[amat_off[x] + i * size + j]
                col += 1
            row += 1
        # current edge last: off-diagonal couplings, diagonal symbolic
        ci = 0
        for i in range(size):
            if star_edge[base + i] == cur_edge:
                ci = i
                break
        col = 0
        for j in range(size):
            if star_edge[base + j] == cur_edge:
                continue
            val = amat[amat_off[x] + ci * size + j]
            scratch[(size - 1) * size + col] = val
            scratch[col * size + (size - 1)] = val
            col += 1
        return size

    @jit
    def run_dfs(
        order, tmin, wsize, lo, hi, deg, bound,
        star_off, star_edge,
        amat, amat_off,
        exact_one, stop_at_first, first_ti, node_budget,
        tvals, assigned, ti_stack, cnt_assigned, vmask, depth_bit,
        conflict, sol_below, scratch,
        pr_state, witnesses, counters,
    ):
        """Depth-first assignment of the window parameters in ``order``.

        Per depth, the full star matrices of both endpoints are reduced once
        with the fresh edge's diagonal symbolic and all unassigned diagonals
        at their window minimum, so each window value costs O(1):
        two positives prune (sound by eigenvalue monotonicity, and at least
        as strong as assigned-submatrix interlacing), and a completed vertex
        must hit the mode target (exactly one positive when exact_one).

        Backtracking is conflict-directed: each failed test blames the
        depths of the assigned edges at the tested vertex (bitmask), and an
        exhausted window jumps to the deepest blamed depth, skipping sibling
        values that provably cannot cure any recorded failure.  Below a
        recorded witness the jump degrades to chronological, which keeps the
        enumeration complete.  With first_ti >= 0 only that value of the
        first edge is explored (top-level branch parcelling for threads).

        counters: [nodes_explored, prunes, witness_count].
        Returns one of the DFS_* status codes.
        """
        n_edges = order.shape[0]
        wit_cap = witnesses.shape[0]
        use_cbj = n_edges <= 64
        for v in range(cnt_assigned.shape[0]):
            cnt_assigned[v] = 0
            vmask[v] = np.uint64(0)
        for e in range(assigned.shape[0]):
            assigned[e] = 0

        def push(k):
            e = order[k]
            bit = np.uint64(1) << np.uint64(k) if use_cbj else np.uint64(0)
            depth_bit[k] = bit
            assigned[e] = 1
            for side in range(2):
                x = lo[e] if side == 0 else hi[e]
                cnt_assigned[x] += 1
                vmask[x] |= bit
                m = build_star_min(
                    x, e, bound, tvals, assigned, star_off, star_edge,
                    amat, amat_off, lo, deg, scratch,
                )
                base, kind, al, be, sg = prefix_reduce(scratch, m, 2)
                pr_state[k, side, 0] = base
                pr_state[k, side, 1] = kind
                pr_state[k, side, 2] = al
                pr_state[k, side, 3] = be
                pr_state[k, side, 4] = sg
            return 0

        def pop(k):
            e = order[k]
            assigned[e] = 0
            nbit = ~depth_bit[k]
            for side in range(2):
                x = lo[e] if side == 0 else hi[e]
                cnt_assigned[x] -= 1
                vmask[x] &= nbit
            return 0

        k = 0
        push(0)
        ti_stack[0] = first_ti if first_ti >= 0 else 0
        conflict[0] = np.uint64(0)
        sol_below[0] = 0

        while k >= 0:
            e = order[k]
            if k == 0 and first_ti >= 0:
                limit = first_ti + 1
            else:
                limit = wsize[e]
            ti = ti_stack[k]
            descended = False
            while ti < limit:
                t = tmin[e] + ti
                ti += 1
                counters[0] += 1
                if counters[0] > node_budget:
                    return DFS_BUDGET_EXCEEDED
                ok = True
                for side in range(2):
                    kind = pr_state[k, side, 1]
                    if kind == 2:
                        return DFS_NEEDS_EXACT
                    npv = pr_state[k, side, 0]
                    if kind == 0:
                        d = t - deg[e] if side == 0 else -t
                        val = pr_state[k, side, 2] * d + pr_state[k, side, 3]
                        if val != 0 and (val > 0) == (pr_state[k, side, 4] > 0):
                            npv += 1
                    x = lo[e] if side == 0 else hi[e]
                    if npv >= 2:
                        ok = False
                    elif exact_one and npv != 1 and cnt_assigned[x] == (
                        star_off[x + 1] - star_off[x]
                    ):
                        ok = False
                    if not ok:
                        conflict[k] |= vmask[x] & ~depth_bit[k]
                        break
                if not ok:
                    counters[1] += 1
                    continue
                tvals[e] = t
                if k == n_edges - 1:
                    if counters[2] >= wit_cap:
                        return DFS_WITNESS_OVERFLOW
                    for j in range(n_edges):
                        witnesses[counters[2], j] = tvals[j]
                    counters[2] += 1
                    for lvl in range(k + 1):
                        sol_below[lvl] = 1
                    if stop_at_first:
                        return DFS_STOPPED_AT_WITNESS
                    continue
                ti_stack[k] = ti
                k += 1
                push(k)
                ti_stack[k] = 0
                conflict[k] = np.uint64(0)
                sol_below[k] = 0
                descended = True
                break
            if descended:
                continue
            # window exhausted: conflict-directed jump
            if sol_below[k] or not use_cbj:
                target = k - 1
                if target >= 0:
                    conflict[target] |= conflict[k] & ~depth_bit[target]
            elif conflict[k] == np.uint64(0):
                target = -1
            else:
                c = conflict[k]
                target = -1
                for b in range(k - 1, -1, -1):
                    if c & (np.uint64(1) << np.uint64(b)):
                        target = b
                        break
                if target >= 0:
                    conflict[target] |= conflict[k] & ~depth_bit[target]
            while k > target:
                pop(k)
                k -= 1
        return DFS_EXHAUSTED

    return SimpleNamespace(
        nplus_capped=nplus_capped,
        prefix_reduce=prefix_reduce,
        vertex_nplus=vertex_nplus,
        build_star_min=build_star_min,
        run_dfs=run_dfs,
        name="uncompiled",
    )


_CACHE: dict[str, SimpleNamespace] = {}


def default_backend() -> str:
    """Backend chosen by TROPSURF_BACKEND, defaulting to numba if importable."""
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice in ("python", "numpy"):
        return "python"
    if choice == "numba":
        return "numba"
    if choice:
        raise ValueError(f"unknown {BACKEND_ENV} value {choice!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "python"
    return "numba"


def get_kernels(backend: str | None = None) -> SimpleNamespace:
    """Kernel namespace for the requested backend (cached)."""
    name = backend or default_backend()
    if name in ("numpy",):
        name = "python"
    if name not in ("python", "numba"):
        raise ValueError(f"unknown kernel backend {name!r}")
    if name not in _CACHE:
        if name == "numba":
            from numba import njit

            ns = _make_kernels(njit(cache=True, nogil=True))
        else:
            ns = _make_kernels(lambda f: f)
        ns.name = name
        _CACHE[name] = ns
    return _CACHE[name]
