"""Smith normal form over Z and linear congruences modulo composite r.

Matrices are lists of rows of Python ints, so there is no overflow.
"""
from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

IntMatrix = list[list[int]]


class DimensionMismatchError(ValueError):
    pass


def identity(k: int) -> IntMatrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def shape(A: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    rows = len(A)
    if rows:
        widths = {len(row) for row in A}
        if len(widths) != 1:
            raise DimensionMismatchError("ragged matrix")
        (w,) = widths
        if cols is not None and cols != w:
            raise DimensionMismatchError(f"expected {cols} columns, got {w}")
        return rows, w
    return 0, cols or 0


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatchError(f"{len(A[0])} columns vs {len(B)} rows")
    cols = len(B[0]) if B else 0
    return [
        [sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(cols)]
        for row in A
    ]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    for row in A:
        if len(row) != len(x):
            raise DimensionMismatchError(f"{len(row)} columns vs vector of {len(x)}")
    return [sum(a * xi for a, xi in zip(row, x) if a) for row in A]


def det(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(
    A: Sequence[Sequence[int]], cols: int | None = None
) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with U @ A @ V == D.

    The diagonal is nonnegative and satisfies d_1 | d_2 | ... .
    """
    m, n = shape(A, cols)
    D = [list(row) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        for M in (D, U):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            i, j = pivot
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < m and t < n and D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return U, D, V


def diagonal(D: Sequence[Sequence[int]]) -> list[int]:
    return [D[k][k] for k in range(min(len(D), len(D[0]) if D else 0))]


def _solve_from_snf(
    U: IntMatrix, D: IntMatrix, V: IntMatrix, b: Sequence[int], r: int, ncols: int
) -> Optional[list[int]]:
    c = matvec(U, b) if U else []
    d = diagonal(D) if D else []
    y = [0] * ncols
    for k, ck in enumerate(c):
        ck %= r
        dk = d[k] if k < len(d) else 0
        g = gcd(dk, r)
        if ck % g:
            return None
        if dk % r == 0:
            continue
        mod = r // g
        y[k] = (ck // g) * pow((dk // g) % mod, -1, mod) % mod if mod > 1 else 0
    return [xi % r for xi in matvec(V, y)] if ncols else []


def solve_mod(
    A: Sequence[Sequence[int]], b: Sequence[int], r: int, cols: int | None = None
) -> Optional[list[int]]:
    """A solution of A x = b (mod r) with entries in [0, r), or None.

    ``cols`` is only needed when A has no rows.
    """
    if r < 2:
        raise ValueError(f"modulus must be at least 2, got {r}")
    m, n = shape(A, cols)
    if len(b) != m:
        raise DimensionMismatchError(f"{m} rows vs right-hand side of {len(b)}")
    U, D, V = smith_normal_form(A, n)
    x = _solve_from_snf(U, D, V, b, r, n)
    if x is not None:
        assert all((lhs - bi) % r == 0 for lhs, bi in zip(matvec(A, x), b)), "bad SNF solve"
    return x


class SmithSolver:
    """Solve A x = b (mod r) for many b and r against one fixed A."""

    def __init__(self, A: Sequence[Sequence[int]], cols: int | None = None):
        self.A = [list(row) for row in A]
        self.rows, self.cols = shape(A, cols)
        self.U, self.D, self.V = smith_normal_form(A, self.cols)

    def solve(self, b: Sequence[int], r: int) -> Optional[list[int]]:
        if len(b) != self.rows:
            raise DimensionMismatchError(f"{self.rows} rows vs right-hand side of {len(b)}")
        x = _solve_from_snf(self.U, self.D, self.V, b, r, self.cols)
        if x is not None:
            assert all((lhs - bi) % r == 0 for lhs, bi in zip(matvec(self.A, x), b))
        return x
