"""Exact rational and integer linear algebra on list-of-lists matrices.

Everything here works with ``int`` and ``fractions.Fraction`` entries so that
ranks, determinants and kernels are decided exactly.  Matrices are plain
lists of rows; vectors are plain lists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def as_fractions(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q.  Returns ``(R, pivot_columns)``."""
    r = as_fractions(m)
    if not r:
        return r, []
    rows, cols = len(r), len(r[0])
    pivots: list[int] = []
    i = 0
    for j in range(cols):
        if i >= rows:
            break
        p = next((k for k in range(i, rows) if r[k][j] != 0), None)
        if p is None:
            continue
        r[i], r[p] = r[p], r[i]
        inv = 1 / r[i][j]
        r[i] = [x * inv for x in r[i]]
        for k in range(rows):
            if k != i and r[k][j] != 0:
                f = r[k][j]
                r[k] = [x - f * y for x, y in zip(r[k], r[i])]
        pivots.append(j)
        i += 1
    return r, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel ``{x : m x = 0}`` over Q."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(m)
    n = len(r[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(r, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def _int_reduced(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free analogue of :func:`rref`: same pivots, rows scaled to integers."""
    r = [list(row) for row in m]
    pivots: list[int] = []
    i = 0
    for j in range(len(r[0])):
        p = next((k for k in range(i, len(r)) if r[k][j]), None)
        if p is None:
            continue
        r[i], r[p] = r[p], r[i]
        piv = r[i]
        for k in range(len(r)):
            if k != i and r[k][j]:
                c = r[k][j]
                row = [x * piv[j] - c * y for x, y in zip(r[k], piv)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                r[k] = [x // g for x in row] if g > 1 else row
        pivots.append(j)
        i += 1
        if i == len(r):
            break
    return r[: len(pivots)], pivots


def integer_kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Primitive integer vectors spanning the rational right kernel of ``m``."""
    if not m or not all(isinstance(x, int) for row in m for x in row):
        return [primitive(v) for v in nullspace(m, ncols)]
    r, pivots = _int_reduced(m)
    n = len(m[0])
    basis = []
    for f in (j for j in range(n) if j not in pivots):
        den = 1
        for row, p in zip(r, pivots):
            den = den * abs(row[p]) // gcd(den, abs(row[p]))
        v = [0] * n
        v[f] = den
        for row, p in zip(r, pivots):
            v[p] = -row[f] * den // row[p]
        basis.append(primitive(v))
    return basis


def det(m: Sequence[Sequence]):
    """Exact determinant.  Integer input uses fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for row in m for x in row):
        a = [list(row) for row in m]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if p is None:
                    return 0
                a[k], a[p] = a[p], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
    a = as_fractions(m)
    result = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return result


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def column_space(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis (as vectors) of the column space, taken from the pivot columns."""
    if not m or not m[0]:
        return []
    _, pivots = rref(m)
    cols = transpose(m)
    return [as_fractions([cols[p]])[0] for p in pivots]


def same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """Whether two lists of vectors span the same rational subspace."""
    ra = rank(a) if a else 0
    rb = rank(b) if b else 0
    if ra != rb:
        return False
    both = list(a) + list(b)
    return (rank(both) if both else 0) == ra


def hermite_pivots(cols: Sequence[Sequence[int]], n: int) -> list[int]:
    """Diagonal of an integer echelon form of the lattice spanned by ``cols``.

    Uses only unimodular column operations (Euclid), so the product of the
    returned pivots is the index of the lattice in Z^n when it has rank n.
    """
    vecs = [list(map(int, c)) for c in cols if any(c)]
    pivots = []
    for i in range(n):
        active = [v for v in vecs if v[i] != 0]
        rest = [v for v in vecs if v[i] == 0]
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[i]))
            piv = active[0]
            nxt = [piv]
            for v in active[1:]:
                q = v[i] // piv[i]
                w = [x - q * y for x, y in zip(v, piv)]
                if w[i] != 0:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            active = nxt
        if active:
            pivots.append(abs(active[0][i]))
        vecs = rest
    return pivots


def lattice_index(cols: Sequence[Sequence[int]], n: int) -> int | None:
    """Index of the integer lattice spanned by ``cols`` in Z^n, or None if infinite."""
    piv = hermite_pivots(cols, n)
    if len(piv) < n:
        return None
    out = 1
    for p in piv:
        out *= p
    return out
