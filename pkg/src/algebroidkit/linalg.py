"""Exact linear algebra: fraction-free rank over Q, and Gauss-Jordan over coefficient fields."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .coeffring import DivisionByZero

__all__ = ["rank", "integer_rows", "solve_rational", "inverse", "det", "matmul", "is_zero_matrix"]


def integer_rows(matrix):
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    rows = []
    for row in matrix:
        row = [Fraction(v) for v in row]
        scale = lcm(*(v.denominator for v in row)) if row else 1
        rows.append([int(v * scale) for v in row])
    return rows


def rank(matrix):
    """Rank of a rational matrix by Bareiss fraction-free elimination.

    Pivots are the first nonzero entry, scanning columns left to right and
    rows top to bottom, so the elimination is deterministic.
    """
    A = integer_rows(matrix)
    if not A or not A[0]:
        return 0
    nrows, ncols = len(A), len(A[0])
    r = 0
    prev = 1
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        for i in range(r + 1, nrows):
            a = A[i][col]
            row_i, row_r = A[i], A[r]
            # exact by Sylvester's identity
            A[i] = [(p * row_i[j] - a * row_r[j]) // prev for j in range(ncols)]
            A[i][col] = 0
        prev = p
        r += 1
    return r


def matmul(A, B):
    if not A or not B:
        return []
    inner = len(B)
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), Fraction(0))
             for j in range(len(B[0]))] for i in range(len(A))]


def is_zero_matrix(A):
    return all(not v for row in A for v in row)


def solve_rational(A, b):
    """One solution x of A x = b over Q, or None if inconsistent."""
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(nrows)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(nrows):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    if any(M[i][ncols] for i in range(r, nrows)):
        return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = M[i][ncols]
    return x


def _gauss_jordan(M, ncols):
    """Reduce [A | B] in place over a field of coefficients; return pivot sign/product."""
    n = len(M)
    det = 1
    for col in range(ncols):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return None
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det = det * p
        M[col] = [v / p for v in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col]
                M[i] = [vi - f * vc for vi, vc in zip(M[i], M[col])]
    return det


def det(A):
    """Determinant of a square matrix of coefficients (Poly/RatFunc/Fraction)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    d = _gauss_jordan(M, n)
    return 0 * A[0][0] if d is None else d


def inverse(A):
    """Inverse of a square coefficient matrix; raises DivisionByZero if singular."""
    n = len(A)
    if n == 0:
        return []
    one = A[0][0] ** 0 if hasattr(A[0][0], "ring") else Fraction(1)
    zero = one * 0
    M = [list(A[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    if _gauss_jordan(M, n) is None:
        raise DivisionByZero("singular matrix")
    return [row[n:] for row in M]
