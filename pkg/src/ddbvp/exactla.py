"""Dense exact linear algebra over the rationals.

Plain lists of lists of ``fractions.Fraction`` throughout; no floating point.
Sizes here are tiny (a handful of rows), so everything is straightforward
Gaussian elimination without pivot-growth heroics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = list[Fraction]
Mat = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions; reject floats."""
    if isinstance(x, float):
        raise TypeError("refusing to coerce float %r to Fraction; pass a string or Fraction" % x)
    return Fraction(x)


def mat_copy(a: Sequence[Sequence]) -> Mat:
    return [[to_fraction(x) for x in row] for row in a]


def identity(n: int) -> Mat:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[Fraction]]) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def mat_vec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vec:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Mat:
    bt = transpose(b)
    return [[sum((ra[t] * cb[t] for t in range(len(ra))), Fraction(0)) for cb in bt] for ra in a]


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction Gaussian elimination. det([]) == 1 by convention."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a nonsquare matrix")
    m = mat_copy(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        result *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return result * sign


def rref(a: Sequence[Sequence[Fraction]]) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = mat_copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Basis of the right null space, one vector per free column of the RREF."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def left_nullspace(a: Sequence[Sequence[Fraction]]) -> list[Vec]:
    return nullspace(transpose(a))


def solve_affine(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Vec, list[Vec]] | None:
    """Full solution set of a x = b.

    Returns (particular, nullspace basis), with free variables of the
    particular solution set to zero, or None when the system is infeasible.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    particular = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        particular[p] = red[r][cols]
    return particular, nullspace(a)


def solve_unique(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec:
    """Solve a x = b when the solution exists and is unique; raise otherwise."""
    sol = solve_affine(a, b)
    if sol is None:
        raise ValueError("inconsistent linear system")
    particular, null = sol
    if null:
        raise ValueError("underdetermined linear system")
    return particular


def invert(a: Sequence[Sequence[Fraction]]) -> Mat:
    n = len(a)
    aug = [list(row) + ident for row, ident in zip(mat_copy(a), identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def min_norm_solution(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Vec, list[Vec]] | None:
    """Like solve_affine, but the particular solution minimizes sum(x_i^2).

    The minimizer over the affine solution set p + span(n_1, ..., n_r) solves
    the exact normal equations G c = -T p with G the Gram matrix of the basis.
    """
    sol = solve_affine(a, b)
    if sol is None:
        return None
    p, null = sol
    if not null:
        return p, null
    gram = [[sum((u[i] * v[i] for i in range(len(p))), Fraction(0)) for v in null] for u in null]
    rhs = [-sum((u[i] * p[i] for i in range(len(p))), Fraction(0)) for u in null]
    c = solve_unique(gram, rhs)
    best = [p[i] + sum((c[j] * null[j][i] for j in range(len(null))), Fraction(0)) for i in range(len(p))]
    return best, null
