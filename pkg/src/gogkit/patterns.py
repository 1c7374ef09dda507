"""Linear subspace patterns: canonical forms, projective equivalence, cross-ratio."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from gogkit import linalg

GRID_LIMIT = 10**6
DEFAULT_TRIALS = 200


class DegeneratePattern(ValueError):
    pass


class SingularMap(ValueError):
    pass


@dataclass(frozen=True)
class SubspacePattern:
    """Ordered subspaces of Q^n; each is a tuple of basis vectors."""

    n: int
    subspaces: tuple[tuple[tuple, ...], ...]
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.subspaces:
            raise DegeneratePattern("a pattern needs at least one subspace")
        for basis in self.subspaces:
            if not basis or any(len(v) != self.n for v in basis):
                raise DegeneratePattern("subspace basis has the wrong shape or is empty")
            if linalg.rank(basis) != len(basis):
                raise DegeneratePattern("basis vectors are dependent")

    @classmethod
    def of(cls, n: int, subspaces, ids=None) -> SubspacePattern:
        subs = tuple(tuple(tuple(v) for v in basis) for basis in subspaces)
        ids = tuple(ids) if ids is not None else tuple(f"W{k + 1}" for k in range(len(subs)))
        return cls(n, subs, ids)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.subspaces)


def canonical_basis(basis) -> tuple[tuple[int, ...], ...]:
    """Reduced echelon basis scaled to primitive integer rows; unique per subspace."""
    r, pivots = linalg.rref(basis)
    if not pivots:
        raise DegeneratePattern("zero subspace")
    return tuple(tuple(linalg.primitive(row)) for row in r[: len(pivots)])


def canonical_projective_pattern(p: SubspacePattern) -> SubspacePattern:
    return SubspacePattern(p.n, tuple(canonical_basis(b) for b in p.subspaces), p.ids)


def apply_linear(f, p: SubspacePattern) -> SubspacePattern:
    if len(f) != p.n or linalg.det(f) == 0:
        raise SingularMap("map must be an invertible n x n matrix")
    images = [[linalg.matvec(f, v) for v in basis] for basis in p.subspaces]
    return SubspacePattern(p.n, tuple(canonical_basis(b) for b in images), p.ids)


def cross_ratio(l1, l2, l3, l4) -> Fraction:
    """Cross-ratio of four lines [x : y] through the origin of Q^2."""
    pts = [tuple(Fraction(c) for c in line) for line in (l1, l2, l3, l4)]

    def d(i, j):
        return pts[i][0] * pts[j][1] - pts[j][0] * pts[i][1]

    for i, j in itertools.combinations(range(4), 2):
        if d(i, j) == 0:
            raise DegeneratePattern(f"lines {i + 1} and {j + 1} coincide")
    return d(0, 2) * d(1, 3) / (d(0, 3) * d(1, 2))


@dataclass
class Equivalence:
    answer: str  # YES | NO | PROBABLY-NO
    witness: list[list[Fraction]] | None = None
    mode: str = "grid"  # grid | random | dims
    solution_dim: int = 0
    basis: list[list[list[int]]] = field(default_factory=list)
    checks: list[bool] = field(default_factory=list)


@lru_cache(maxsize=4096)
def _annihilator(basis: tuple, n: int) -> tuple:
    """Integer rows whose common kernel is the span of ``basis``."""
    return tuple(map(tuple, linalg.integer_kernel([list(v) for v in basis], n)))


def _integer_matrix(vec, n: int) -> list[list[int]]:
    den = lcm(*(Fraction(x).denominator for x in vec))
    ints = [int(Fraction(x) * den) for x in vec]
    return [ints[i * n:(i + 1) * n] for i in range(n)]


def solution_space(p: SubspacePattern, q: SubspacePattern) -> list[list[list[int]]]:
    """Integer basis of {F : F maps each subspace of ``p`` into the matching one of ``q``}."""
    n = p.n
    rows = []
    for w, v in zip(p.subspaces, q.subspaces):
        a = _annihilator(v, n)
        for arow in a:
            for b in w:
                # (arow . F . b) is linear in the n*n entries of F
                rows.append([arow[i] * b[j] for i in range(n) for j in range(n)])
    if not rows:
        # every target is all of Q^n: no constraint at all
        return [_integer_matrix([int(t == s) for t in range(n * n)], n) for s in range(n * n)]
    return [_integer_matrix(vec, n) for vec in linalg.integer_kernel(rows, n * n)]


def _combine(basis, t) -> list[list[int]]:
    n = len(basis[0])
    return [[sum(c * m[i][j] for c, m in zip(t, basis)) for j in range(n)] for i in range(n)]


def _verify(f, p: SubspacePattern, q: SubspacePattern) -> list[bool]:
    return [
        linalg.same_span([linalg.matvec(f, x) for x in w], v)
        for w, v in zip(p.subspaces, q.subspaces)
    ]


def decide_projective_equivalence(
    p: SubspacePattern,
    q: SubspacePattern,
    grid_limit: int = GRID_LIMIT,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> Equivalence:
    """Is there an invertible F with F(W_k) = V_k for every k?

    The F mapping each W_k into V_k form a linear space; an invertible member
    exists iff det is not identically zero on it.  That is decided exactly on
    the grid {0..n}^m when it is small enough, else by random sampling.
    """
    if p.n != q.n or len(p.subspaces) != len(q.subspaces):
        raise ValueError("patterns must share ambient rank and length")
    if p.dims != q.dims:
        return Equivalence("NO", mode="dims")
    n = p.n
    basis = solution_space(p, q)
    m = len(basis)
    if m == 0:
        return Equivalence("NO", mode="grid", basis=basis)
    if (n + 1) ** m <= grid_limit:
        mode, points = "grid", itertools.product(range(n + 1), repeat=m)
    else:
        rng = random.Random(seed)
        mode = "random"
        points = (tuple(rng.randint(-10 * n, 10 * n) for _ in range(m)) for _ in range(trials))
    for t in points:
        f = _combine(basis, t)
        if linalg.det(f) != 0:
            # invertible and mapping W_k into V_k of equal dimension, hence onto
            f = [[Fraction(x) for x in row] for row in f]
            return Equivalence("YES", f, mode, m, basis, _verify(f, p, q))
    return Equivalence("NO" if mode == "grid" else "PROBABLY-NO", mode=mode, solution_dim=m, basis=basis)
