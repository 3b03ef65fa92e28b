"""Exact linear algebra over cyclotomic fields (row-echelon forms, ranks)."""
from __future__ import annotations

from .cyclo import ONE, ZERO, CyclotomicNumber


def _cn(x) -> CyclotomicNumber:
    return x if isinstance(x, CyclotomicNumber) else CyclotomicNumber.from_rational(x)


def vec(values) -> tuple[CyclotomicNumber, ...]:
    return tuple(_cn(v) for v in values)


def rref(rows) -> tuple[tuple[CyclotomicNumber, ...], ...]:
    """Reduced row-echelon form with zero rows dropped."""
    mat = [list(vec(r)) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        piv = mat[r][c]
        if piv != ONE:
            inv = piv.inverse()
            mat[r] = [v * inv if v else v for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b if b else a for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r])


def rank(rows) -> int:
    return len(rref(rows))


def in_span(v, basis) -> bool:
    basis = list(basis)
    if not any(_cn(x) for x in v):
        return True
    return rank(basis + [v]) == rank(basis)


def matvec(mat, v) -> tuple[CyclotomicNumber, ...]:
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in mat)


def matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols)
                 for row in a)


def identity(n: int):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def inverse(mat):
    n = len(mat)
    aug = [list(vec(row)) + list(e) for row, e in zip(mat, identity(n))]
    red = rref(aug)
    if len(red) < n or any(red[i][i] != ONE for i in range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def is_zero_vector(v) -> bool:
    return not any(v)
