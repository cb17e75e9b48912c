"""Exact linear algebra over an exact field.

All routines use Gaussian elimination with deterministic lexicographic
pivoting: columns are processed left to right and the first row with a
nonzero entry is the pivot row.  No floating point anywhere, so ranks,
kernels and solve verdicts are exact.

The element type only needs field arithmetic (+, -, *, /) and equality
with integer 0; Fraction works, and so does the quadratic extension type
used by the 4D frame computation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Vector = List
Matrix = List[List]


def mat_copy(m: Matrix) -> Matrix:
    return [list(row) for row in m]


def identity(n: int) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a: Matrix, v: Sequence) -> Vector:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for k in range(1, len(v)):
            acc = acc + row[k] * v[k]
        out.append(acc)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    return [[c * x for x in row] for row in a]


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(u: Sequence, c) -> Vector:
    return [c * a for a in u]


def vec_is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot column list."""
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix) -> List[Vector]:
    """Deterministic kernel basis: one vector per free column, in column order."""
    if not m:
        return []
    cols = len(m[0])
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v: Vector = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence) -> Optional[Vector]:
    """One exact solution of m x = b, or None if inconsistent.

    The particular solution is the one with all free variables zero
    (deterministic, lexicographic pivots).
    """
    if not m:
        return [] if vec_is_zero(b) else None
    cols = len(m[0])
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    red, pivots = rref(aug)
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None  # pivot in the constants column
    x: Vector = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def solve_affine(m: Matrix, b: Sequence) -> Optional[Tuple[Vector, List[Vector]]]:
    """Full solution set of m x = b: (particular, kernel basis), or None."""
    part = solve(m, b)
    if part is None:
        return None
    return part, nullspace(m)


def det(m: Matrix):
    """Exact determinant by elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = mat_copy(m)
    result = Fraction(1)
    sign = 1
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0) * result  # keeps the field type when exotic
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            sign = -sign
        result = result * a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result if sign == 1 else -result


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + list(idrow) for row, idrow in zip(m, identity(n))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# subspaces as row-span bases
# ---------------------------------------------------------------------------

def span_basis(vectors: Sequence[Sequence]) -> List[Vector]:
    """Canonical basis of the span: rref rows, zero rows dropped."""
    vecs = [list(v) for v in vectors if not vec_is_zero(v)]
    if not vecs:
        return []
    red, pivots = rref(vecs)
    return [red[i] for i in range(len(pivots))]


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if vec_is_zero(v):
        return True
    if not basis:
        return False
    m = [list(b) for b in basis]
    return rank(m) == rank(m + [list(v)])


def span_dim(vectors: Sequence[Sequence]) -> int:
    vecs = [list(v) for v in vectors if not vec_is_zero(v)]
    return rank(vecs) if vecs else 0


def sum_spans(u: Sequence[Sequence], v: Sequence[Sequence]) -> List[Vector]:
    return span_basis(list(u) + list(v))


def intersect_spans(u: Sequence[Sequence], v: Sequence[Sequence]) -> List[Vector]:
    """Basis of span(u) intersect span(v), via the kernel of [U^T | -V^T]."""
    if not u or not v:
        return []
    dim = len(u[0])
    rows = dim
    cols = len(u) + len(v)
    m = [[Fraction(0)] * cols for _ in range(rows)]
    for j, uv in enumerate(u):
        for i in range(dim):
            m[i][j] = uv[i]
    for j, vv in enumerate(v):
        for i in range(dim):
            m[i][len(u) + j] = -vv[i]
    vectors = []
    for k in nullspace(m):
        combo = [Fraction(0)] * dim
        for j, uv in enumerate(u):
            combo = vec_add(combo, vec_scale(uv, k[j]))
        vectors.append(combo)
    return span_basis(vectors)


def spans_equal(u: Sequence[Sequence], v: Sequence[Sequence]) -> bool:
    return span_basis(u) == span_basis(v)
