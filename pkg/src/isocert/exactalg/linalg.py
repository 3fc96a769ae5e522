"""Exact linear algebra over any field-like element type.

The routines are generic: entries only need +, -, *, / and an is_zero test
(``e == zero``).  They are used with RationalFunction, tower elements and
curve elements alike.  Matrices are plain lists of lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

Matrix = list[list[Any]]


@dataclass
class LinearSolution:
    """Solution set of M x = rhs: a particular solution and a kernel basis,
    or inconsistent=True."""

    inconsistent: bool
    particular: list | None
    nullspace: list[list]


def _is_zero(e, zero) -> bool:
    z = getattr(e, "is_zero", None)
    if callable(z):
        return e.is_zero()
    return e == zero


def linear_solve(M: Sequence[Sequence], rhs: Sequence, zero, one) -> LinearSolution:
    """Exact Gauss-Jordan elimination; every returned vector satisfies the
    system exactly by construction."""
    m = len(M)
    n = len(M[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        sel = None
        for r in range(row, m):
            if not _is_zero(aug[r][col], zero):
                sel = r
                break
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        inv = one / aug[row][col]
        aug[row] = [inv * e for e in aug[row]]
        for r in range(m):
            if r != row and not _is_zero(aug[r][col], zero):
                factor = aug[r][col]
                aug[r] = [aug[r][j] - factor * aug[row][j] for j in range(n + 1)]
        pivots.append((row, col))
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if not _is_zero(aug[r][n], zero):
            return LinearSolution(True, None, [])
    pivot_cols = {col: r for r, col in pivots}
    particular = [zero] * n
    for col, r in pivot_cols.items():
        particular[col] = aug[r][n]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    nullspace = []
    for fc in free_cols:
        vec = [zero] * n
        vec[fc] = one
        for col, r in pivot_cols.items():
            vec[col] = zero - aug[r][fc]
        nullspace.append(vec)
    return LinearSolution(False, particular, nullspace)


# -- matrix helpers ----------------------------------------------------------


def mat_shape(A: Matrix) -> tuple[int, int]:
    return len(A), len(A[0]) if A else 0


def zeros(n: int, m: int, zero) -> Matrix:
    return [[zero for _ in range(m)] for _ in range(n)]


def identity(n: int, zero, one) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A: Matrix) -> Matrix:
    return [[-a for a in row] for row in A]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[c * a for a in row] for row in A]


def mat_mul(A: Matrix, B: Matrix, zero) -> Matrix:
    n, k = mat_shape(A)
    k2, m = mat_shape(B)
    if k != k2:
        raise ValueError("shape mismatch")
    out = zeros(n, m, zero)
    for i in range(n):
        for p in range(k):
            a = A[i][p]
            if _is_zero(a, zero):
                continue
            for j in range(m):
                b = B[p][j]
                if not _is_zero(b, zero):
                    out[i][j] = out[i][j] + a * b
    return out


def mat_commutator(A: Matrix, B: Matrix, zero) -> Matrix:
    return mat_sub(mat_mul(A, B, zero), mat_mul(B, A, zero))


def mat_transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_is_zero(A: Matrix, zero) -> bool:
    return all(_is_zero(a, zero) for row in A for a in row)


class SingularMatrix(ArithmeticError):
    pass


def mat_inverse(A: Matrix, zero, one) -> Matrix:
    n, m = mat_shape(A)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(A[i]) + list(identity(n, zero, one)[i]) for i in range(n)]
    for col in range(n):
        sel = None
        for r in range(col, n):
            if not _is_zero(aug[r][col], zero):
                sel = r
                break
        if sel is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[sel] = aug[sel], aug[col]
        inv = one / aug[col][col]
        aug[col] = [inv * e for e in aug[col]]
        for r in range(n):
            if r != col and not _is_zero(aug[r][col], zero):
                f = aug[r][col]
                aug[r] = [aug[r][j] - f * aug[col][j] for j in range(2 * n)]
    return [row[n:] for row in aug]


def mat_apply(fn, A: Matrix) -> Matrix:
    return [[fn(a) for a in row] for row in A]
