"""Small dense matrices over residue fields and truncated DVRs.

Entries are FieldElem or DvrElement values; the ring supplies zero and one.
Dimensions here are the ambient dimension d (1 to 3 in practice), so the
determinant and adjugate use cofactor expansion, which needs no division.
"""

from typing import Any, List, Sequence, Tuple

Matrix = Tuple[Tuple[Any, ...], ...]
Vector = Tuple[Any, ...]


def identity(ring: Any, d: int) -> Matrix:
    one, zero = ring.one(), ring.zero()
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def mat_mul(a: Matrix, b: Matrix, ring: Any) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out: List[Tuple[Any, ...]] = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[Any], ring: Any) -> Vector:
    out = []
    for row in a:
        acc = ring.zero()
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return tuple(out)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def minor(a: Matrix, i: int, j: int) -> Matrix:
    return tuple(
        tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(a) if r != i
    )


def determinant(a: Matrix, ring: Any) -> Any:
    d = len(a)
    if d == 0:
        return ring.one()
    if d == 1:
        return a[0][0]
    if d == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    acc = ring.zero()
    for j in range(d):
        term = a[0][j] * determinant(minor(a, 0, j), ring)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def adjugate(a: Matrix, ring: Any) -> Matrix:
    """Transpose of the cofactor matrix, so adj(A) A = det(A) I."""
    d = len(a)
    if d == 1:
        return ((ring.one(),),)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            cof = determinant(minor(a, j, i), ring)
            row.append(cof if (i + j) % 2 == 0 else -cof)
        rows.append(tuple(row))
    return tuple(rows)


def min_valuation(a: Matrix, cap: int) -> int:
    """Smallest entry valuation, or cap for the zero matrix."""
    return min((x.valuation() for row in a for x in row), default=cap)
