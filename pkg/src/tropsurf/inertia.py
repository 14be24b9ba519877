"""Exact signature (inertia) of symmetric rational matrices.

Inertia is computed by symmetric congruence elimination with exact rational
arithmetic: a nonzero diagonal pivot contributes its sign, and when the whole
remaining diagonal vanishes but some off-diagonal entry does not, a 2x2
hyperbolic block contributes one positive and one negative eigenvalue.  By
Sylvester's law the result is independent of pivot order; we still fix the
order (largest |diagonal| first) so intermediate fractions stay tame.

Floating point is deliberately absent: classification boundaries
(semidefinite versus one-positive) are exactly the cases the blow-up
arguments pivot on, and rounding would misclassify them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, NotSymmetricError, SingularError


@dataclass(frozen=True)
class Inertia:
    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def n(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_zero, self.n_minus)


class SymmetricRationalMatrix:
    """Symmetric matrix with exact rational entries, packed upper triangle.

    Storage makes asymmetry unrepresentable; ``from_rows`` checks its input.
    """

    __slots__ = ("n", "_upper")

    def __init__(self, n: int, upper: tuple[Fraction, ...]):
        if len(upper) != n * (n + 1) // 2:
            raise DimensionMismatchError(
                f"upper triangle of size {len(upper)} does not fit dimension {n}"
            )
        self.n = n
        self._upper = tuple(Fraction(x) for x in upper)

    @classmethod
    def from_rows(cls, rows) -> "SymmetricRationalMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatchError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if Fraction(rows[i][j]) != Fraction(rows[j][i]):
                    raise NotSymmetricError(
                        f"entries ({i},{j}) and ({j},{i}) differ"
                    )
        upper = tuple(
            Fraction(rows[i][j]) for i in range(n) for j in range(i, n)
        )
        return cls(n, upper)

    def _idx(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        # offset of row i in the packed upper triangle
        return i * self.n - i * (i - 1) // 2 + (j - i)

    def entry(self, i: int, j: int) -> Fraction:
        return self._upper[self._idx(i, j)]

    def __getitem__(self, ij) -> Fraction:
        return self.entry(*ij)

    def rows(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def apply(self, vector) -> list[Fraction]:
        if len(vector) != self.n:
            raise DimensionMismatchError("vector length mismatch")
        return [
            sum((self.entry(i, j) * Fraction(vector[j]) for j in range(self.n)),
                Fraction(0))
            for i in range(self.n)
        ]

    def principal_submatrix(self, indices) -> "SymmetricRationalMatrix":
        """Principal submatrix on the given index subset (order preserved).

        Cauchy interlacing makes n_plus monotone under principal submatrices,
        which is what the search module prunes with.
        """
        idx = list(indices)
        for i in idx:
            if not 0 <= i < self.n:
                raise DimensionMismatchError(f"index {i} out of range")
        return SymmetricRationalMatrix.from_rows(
            [[self.entry(i, j) for j in idx] for i in idx]
        )

    def __eq__(self, other):
        return (
            isinstance(other, SymmetricRationalMatrix)
            and self.n == other.n
            and self._upper == other._upper
        )

    def __hash__(self):
        return hash((self.n, self._upper))

    def __repr__(self):
        return f"SymmetricRationalMatrix({self.rows()!r})"


def inertia(m: SymmetricRationalMatrix) -> Inertia:
    """Exact signature (n_plus, n_zero, n_minus) of a symmetric matrix."""
    n = m.n
    a = [[Fraction(x) for x in row] for row in m.rows()]
    n_plus = n_zero = n_minus = 0

    def swap(i: int, j: int) -> None:
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < n:
        piv = max(range(k, n), key=lambda i: abs(a[i][i]))
        if a[piv][piv] != 0:
            swap(k, piv)
            p = a[k][k]
            if p > 0:
                n_plus += 1
            else:
                n_minus += 1
            for i in range(k + 1, n):
                if a[i][k] == 0:
                    continue
                f = a[i][k] / p
                for j in range(i, n):
                    a[i][j] -= f * a[k][j]
                    a[j][i] = a[i][j]
            k += 1
            continue
        # whole remaining diagonal is zero; hunt an off-diagonal pivot
        best = None
        for i in range(k, n):
            for j in range(i + 1, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) > abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            n_zero += n - k
            break
        bi, bj = best
        swap(k, bi)  # bi < bj and bj >= k+1, so bj is untouched by this swap
        swap(k + 1, bj)
        # hyperbolic 2x2 block [[0, m], [m, 0]]: one positive, one negative
        n_plus += 1
        n_minus += 1
        q = a[k][k + 1]
        for i in range(k + 2, n):
            for j in range(i, n):
                a[i][j] -= (a[i][k] * a[k + 1][j] + a[i][k + 1] * a[k][j]) / q
                a[j][i] = a[i][j]
        k += 2
    return Inertia(n_plus, n_zero, n_minus)


def congruence(m: SymmetricRationalMatrix, c_rows) -> SymmetricRationalMatrix:
    """Exact congruence transform C @ M @ C^T.

    ``c_rows`` must be a square invertible rational matrix matching M.
    """
    c = [[Fraction(x) for x in row] for row in c_rows]
    n = m.n
    if len(c) != n or any(len(r) != n for r in c):
        raise DimensionMismatchError("congruence matrix shape mismatch")
    # invertibility check by exact elimination
    from .linalg import rational_rank

    if rational_rank([list(r) for r in c], n) != n:
        raise SingularError("congruence matrix is singular")
    mm = m.rows()
    cm = [
        [sum((c[i][k] * mm[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]
    out = [
        [sum((cm[i][k] * c[j][k] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]
    return SymmetricRationalMatrix.from_rows(out)


def inertia_of_rows(rows) -> Inertia:
    """Convenience: inertia of a symmetric matrix given as nested rows."""
    return inertia(SymmetricRationalMatrix.from_rows(rows))
