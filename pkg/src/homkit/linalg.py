"""
Exact dense linear algebra over a CoefficientField.

Matrices are lists of rows. Everything here is small (chart matrices, graded
pieces of modules), so plain Gaussian elimination is enough.
"""

from typing import Sequence

from fields import CoefficientField, Scalar

Matrix = list[list[Scalar]]


def _copy(rows: Sequence[Sequence], K: CoefficientField) -> Matrix:
    return [[K(a) for a in row] for row in rows]


def rref(rows: Sequence[Sequence], K: CoefficientField) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = _copy(rows, K)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = K.inv(m[r][c])
        m[r] = [K.mul(a, inv) for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [K.sub(a, K.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence], K: CoefficientField) -> int:
    return len(rref(rows, K)[1])


def det(rows: Sequence[Sequence], K: CoefficientField) -> Scalar:
    m = _copy(rows, K)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = K.one()
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return K.zero()
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = K.neg(result)
        result = K.mul(result, m[c][c])
        inv = K.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = K.mul(m[i][c], inv)
                m[i] = [K.sub(a, K.mul(f, b)) for a, b in zip(m[i], m[c])]
    return result


def inverse(rows: Sequence[Sequence], K: CoefficientField) -> Matrix:
    """Inverse of a square matrix; ValueError when singular."""
    n = len(rows)
    augmented = [
        list(row) + [K.one() if i == j else K.zero() for j in range(n)]
        for i, row in enumerate(rows)
    ]
    reduced, pivots = rref(augmented, K)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in reduced]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], K: CoefficientField) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = K.zero()
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    acc = K.add(acc, K.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out

