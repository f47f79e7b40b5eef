"""Fraction-free (Bareiss) elimination over Q: determinants and general solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import as_fraction


class InconsistentSystemError(ValueError):
    """A·x = b has no solution. ``row`` is the original index of a witness row."""

    def __init__(self, row: int):
        super().__init__(f"inconsistent linear system (witness row {row})")
        self.row = row


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(as_fraction(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows)]


@dataclass(frozen=True)
class LinearSolution:
    particular: tuple
    nullspace_basis: tuple
    pivot_columns: tuple

    @property
    def is_unique(self) -> bool:
        return not self.nullspace_basis


def _as_matrix(A) -> ExactMatrix:
    return A if isinstance(A, ExactMatrix) else ExactMatrix.from_rows(A)


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators."""
    out, scales = [], []
    for r in rows:
        den = 1
        for x in r:
            den = math.lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
        scales.append(den)
    return out, scales


def _bareiss_echelon(M: list[list[int]], ncols: int):
    """In-place fraction-free row echelon form on the first ``ncols`` columns.

    Returns (pivot columns, row permutation, number of swaps). Entries stay
    integral because every intermediate is a minor of the input.
    """
    m = len(M)
    width = len(M[0]) if M else 0
    perm = list(range(m))
    pivots = []
    prev = 1
    r = 0
    swaps = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[p], M[r] = M[r], M[p]
            perm[p], perm[r] = perm[r], perm[p]
            swaps += 1
        piv = M[r][c]
        row_r = M[r]
        for i in range(r + 1, m):
            row_i = M[i]
            lead = row_i[c]
            if lead == 0:
                if piv != prev:
                    for j in range(c + 1, width):
                        if row_i[j]:
                            row_i[j] = piv * row_i[j] // prev
                continue
            for j in range(c + 1, width):
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, perm, swaps


def determinant(A) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    A = _as_matrix(A)
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return Fraction(1)
    M, scales = _integer_rows(A.to_rows())
    pivots, _, swaps = _bareiss_echelon(M, n)
    if len(pivots) < n:
        return Fraction(0)
    det = Fraction(M[n - 1][n - 1], math.prod(scales))
    return -det if swaps % 2 else det


def rank(A) -> int:
    A = _as_matrix(A)
    if A.rows == 0 or A.cols == 0:
        return 0
    M, _ = _integer_rows(A.to_rows())
    return len(_bareiss_echelon(M, A.cols)[0])


def solve_general(A, b: Sequence) -> LinearSolution:
    """Particular solution (free variables zero) plus a reduced-echelon nullspace basis.

    Raises :class:`InconsistentSystemError` when A·x = b has no solution.
    """
    A = _as_matrix(A)
    b = [as_fraction(x) for x in b]
    if len(b) != A.rows:
        raise ValueError("A and b have different row counts")
    n = A.cols
    aug = [A.row(i) + [b[i]] for i in range(A.rows)]
    M, _ = _integer_rows(aug) if aug else ([], [])
    pivots, perm, _ = _bareiss_echelon(M, n) if M else ([], [], 0)
    r = len(pivots)
    for i in range(r, len(M)):
        if M[i][n] != 0:
            raise InconsistentSystemError(perm[i])

    # Back substitution to reduced echelon form over Q.
    R = [[Fraction(x) for x in M[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        piv = R[i][c]
        R[i] = [x / piv for x in R[i]]
        for k in range(i):
            f = R[k][c]
            if f:
                R[k] = [x - f * y for x, y in zip(R[k], R[i])]

    particular = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        particular[c] = R[i][n]
    pivot_set = set(pivots)
    nullspace = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][free]
        nullspace.append(tuple(v))
    return LinearSolution(tuple(particular), tuple(nullspace), tuple(pivots))


def inverse(A) -> ExactMatrix:
    A = _as_matrix(A)
    n = A.rows
    if n != A.cols:
        raise ValueError("inverse of a non-square matrix")
    if rank(A) < n:
        raise ZeroDivisionError("singular matrix")
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        sol = solve_general(A, e)
        cols.append(sol.particular)
    return ExactMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])


def confluent_vandermonde(points: Sequence, multiplicities: Sequence[int]) -> ExactMatrix:
    """Rows are the derivatives 0..a_i-1 of (1, t, ..., t^(N-1)) at each point."""
    if len(points) != len(multiplicities) or any(a < 1 for a in multiplicities):
        raise ValueError("one positive multiplicity per point")
    N = sum(multiplicities)
    rows = []
    for x, a in zip(points, multiplicities):
        x = as_fraction(x)
        for k in range(a):
            rows.append([math.perm(j, k) * x ** (j - k) if j >= k else 0 for j in range(N)])
    return ExactMatrix.from_rows(rows)
