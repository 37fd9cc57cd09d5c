"""Dense matrices over the exact fields of :mod:`aniso.scalars`.

Matrices are tuples of tuples of FieldElement, all sharing one descriptor.
Everything here is plain Gaussian elimination; fields are exact so there is
no pivoting subtlety beyond skipping zeros.
"""

from __future__ import annotations

from .errors import AnisoError
from .scalars import Field, FieldDescriptor, FieldElement


class MatrixError(AnisoError):
    pass


class NotInvertibleMatrix(MatrixError):
    pass


Matrix = tuple


def mat_from_rows(rows) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if not rows or not rows[0]:
        raise MatrixError("matrix needs at least one row and column")
    width = len(rows[0])
    d = rows[0][0].descriptor
    for r in rows:
        if len(r) != width:
            raise MatrixError("ragged rows")
        for e in r:
            if not isinstance(e, FieldElement) or e.descriptor != d:
                raise MatrixError("entries must share one field descriptor")
    return rows


def mat_descriptor(a: Matrix) -> FieldDescriptor:
    return a[0][0].descriptor


def identity(field: Field, n: int) -> Matrix:
    return tuple(tuple(field.one if i == j else field.zero for j in range(n))
                 for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise MatrixError("shape mismatch")
    bt = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _dot(u, v):
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


def mat_vec(a: Matrix, v) -> tuple:
    return tuple(_dot(row, tuple(v)) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c: FieldElement) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_pow(a: Matrix, e: int) -> Matrix:
    F = Field(mat_descriptor(a))
    if e < 0:
        return mat_pow(mat_inverse(a), -e)
    out = identity(F, len(a))
    acc = a
    while e:
        if e & 1:
            out = mat_mul(out, acc)
        acc = mat_mul(acc, acc)
        e >>= 1
    return out


def mat_det(a: Matrix) -> FieldElement:
    n = len(a)
    if len(a[0]) != n:
        raise MatrixError("determinant of a non-square matrix")
    F = Field(mat_descriptor(a))
    m = [list(row) for row in a]
    det = F.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero), None)
        if piv is None:
            return F.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] = m[r][c] - f * m[col][c]
    return det


def mat_rank(a: Matrix) -> int:
    m = [list(row) for row in a]
    rows, cols = len(m), len(m[0])
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if not m[r][col].is_zero), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        for r in range(rows):
            if r != rank and not m[r][col].is_zero:
                f = m[r][col] * inv
                for c in range(col, cols):
                    m[r][c] = m[r][c] - f * m[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    if len(a[0]) != n:
        raise MatrixError("inverse of a non-square matrix")
    F = Field(mat_descriptor(a))
    m = [list(row) + list(idr) for row, idr in zip(a, identity(F, n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero), None)
        if piv is None:
            raise NotInvertibleMatrix("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def solve_right(a: Matrix, b) -> tuple | None:
    """One solution x of a @ x = b, or None. a need not be square."""
    F = Field(mat_descriptor(a))
    rows, cols = len(a), len(a[0])
    m = [list(row) + [bv] for row, bv in zip(a, b)]
    piv_of_col = {}
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if not m[r][col].is_zero), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and not m[r][col].is_zero:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        piv_of_col[col] = rank
        rank += 1
    for r in range(rank, rows):
        if not m[r][cols].is_zero:
            return None
    x = [F.zero] * cols
    for col, r in piv_of_col.items():
        x[col] = m[r][cols]
    return tuple(x)


def scalar_of(a: Matrix) -> FieldElement | None:
    """The scalar c when a == c * identity, else None."""
    n = len(a)
    c = a[0][0]
    for i in range(n):
        for j in range(n):
            if i == j:
                if a[i][j] != c:
                    return None
            elif not a[i][j].is_zero:
                return None
    return c


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return a == b


def projective_normalize(a: Matrix) -> Matrix:
    """Scale so the first nonzero entry in row-major order equals 1."""
    for row in a:
        for e in row:
            if not e.is_zero:
                if e.is_one:
                    return a
                return mat_scale(a, e.inverse())
    raise MatrixError("zero matrix has no projective normalization")
