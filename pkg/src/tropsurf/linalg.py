"""Exact linear algebra over the rationals and the integers.

Everything here is small and dense (fixtures have a few dozen cells), so the
implementations favour exactness and deterministic output over asymptotics.
Rational computations use ``fractions.Fraction``; integer lattice work uses
arbitrary-precision Python ints, so there is no overflow anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Row = list[Fraction]


def rref(rows: list[Row], ncols: int) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rational_rank(rows: list[Row], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def nullspace(rows: list[Row], ncols: int) -> list[Row]:
    """Canonical basis of {x : rows @ x = 0}, one vector per free column.

    The basis is the standard RREF one: vector k has a 1 in the k-th free
    column and zeros in all other free columns, which makes the output
    deterministic for a fixed row set.
    """
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def coordinates_in_rows(basis: list[Row], target: Row) -> list[Fraction] | None:
    """Coefficients c with sum(c_i * basis_i) == target, or None."""
    if not basis:
        return [] if all(x == 0 for x in target) else None
    ncols = len(target)
    # solve basis^T c = target by eliminating an augmented system
    aug = [[Fraction(basis[i][j]) for i in range(len(basis))] + [Fraction(target[j])]
           for j in range(ncols)]
    red, pivots = rref(aug, len(basis) + 1)
    coeffs = [Fraction(0)] * len(basis)
    for r, pc in enumerate(pivots):
        if pc == len(basis):  # inconsistent: pivot in the augmented column
            return None
        coeffs[pc] = red[r][len(basis)]
    return coeffs


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------


def _row_reduce_integer(rows: list[list[int]], ncols: int):
    """Integer row echelon via Euclidean row operations, tracking U.

    Returns (H, U) with U unimodular and U @ rows == H, H in echelon form
    with positive pivots.
    """
    h = [list(map(int, r)) for r in rows]
    n = len(h)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, n) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][c]), i))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, n):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < n and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            r += 1
            if r == n:
                break
    return h, u


def integer_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Canonical basis of {x in Z^ncols : rows @ x = 0}.

    The result is automatically saturated (it is the full integer kernel, not
    a finite-index sublattice) and is normalized to the Hermite form of the
    kernel lattice, so it is unique for a given constraint set.
    """
    if ncols == 0:
        return []
    # row-reduce the transpose with a unimodular transform; rows of U matching
    # zero rows of H are an integer kernel basis of the original matrix
    At = [[int(rows[i][j]) for i in range(len(rows))] for j in range(ncols)]
    h, u = _row_reduce_integer(At, len(rows))
    basis = [u[i] for i in range(ncols) if all(x == 0 for x in h[i])]
    return hermite_normalize(basis, ncols)


def hermite_normalize(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Unique Hermite-style basis of the lattice spanned by ``rows``.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), rows ordered by pivot column.
    """
    h, _ = _row_reduce_integer(rows, ncols)
    h = [r for r in h if any(x != 0 for x in r)]
    # reduce entries above pivots
    pivots = []
    for r in h:
        pivots.append(next(c for c in range(ncols) if r[c] != 0))
    for i in range(len(h) - 1, -1, -1):
        pc = pivots[i]
        p = h[i][pc]
        for j in range(i):
            q = h[j][pc] // p
            if q:
                h[j] = [a - q * b for a, b in zip(h[j], h[i])]
    return h
