"""Finite graphs of groups in two regimes.

``abstract``: every group carries only a dimension label and every
edge-to-vertex injection carries only its index (possibly infinite).

``abelian``: every group is Z^rank and every injection is an integer matrix
whose columns are the images of the edge-group basis vectors.

Indices are ``int`` or :data:`INF` (``math.inf``), so sums absorb infinity
for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from gogkit import linalg

INF = math.inf

ABSTRACT = "abstract"
ABELIAN = "abelian"


class InvalidInjection(ValueError):
    """An injection matrix that is not injective (rank-deficient)."""


@dataclass(frozen=True)
class GroupSpec:
    """A vertex or edge group: a dimension label, or Z^rank in the abelian regime."""

    dim: int
    abelian: bool = False

    @property
    def rank(self) -> int:
        return self.dim


@dataclass(frozen=True)
class DeclaredIndex:
    index: float  # int or INF


@dataclass(frozen=True)
class MatrixInjection:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "MatrixInjection":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols)

    @property
    def columns(self) -> list[list[int]]:
        return [[r[j] for r in self.rows] for j in range(self.ncols)]


Injection = DeclaredIndex | MatrixInjection


@dataclass(frozen=True)
class EdgeEnd:
    vertex: str
    injection: Injection


@dataclass(frozen=True)
class Edge:
    group: GroupSpec
    ends: tuple[EdgeEnd, EdgeEnd]

    @property
    def is_loop(self) -> bool:
        return self.ends[0].vertex == self.ends[1].vertex


@dataclass(frozen=True)
class GraphOfGroups:
    regime: str
    vertices: Mapping[str, GroupSpec]
    edges: Mapping[str, Edge] = field(default_factory=dict)

    def end_refs(self, v: str) -> Iterator[tuple[str, int]]:
        """(edge id, end number 1|2) of every end attached at ``v``, in canonical order."""
        for eid in sorted(self.edges):
            for k, end in enumerate(self.edges[eid].ends, start=1):
                if end.vertex == v:
                    yield eid, k

    def end(self, eid: str, k: int) -> EdgeEnd:
        return self.edges[eid].ends[k - 1]

    def index(self, eid: str, k: int) -> float:
        e = self.edges[eid]
        end = e.ends[k - 1]
        return injection_index(end.injection, self.vertices[end.vertex].dim, e.group.dim)

    def neighbours(self, v: str) -> set[str]:
        out = set()
        for eid, k in self.end_refs(v):
            out.add(self.edges[eid].ends[2 - k].vertex)
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = min(self.vertices)
        seen, stack = {start}, [start]
        while stack:
            for w in self.neighbours(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def subgraph(self, vertex_ids, edge_ids) -> "GraphOfGroups":
        return GraphOfGroups(
            self.regime,
            {v: self.vertices[v] for v in vertex_ids},
            {e: self.edges[e] for e in edge_ids},
        )


def injection_index(inj: Injection, n_v: int, n_e: int) -> float:
    """Index of the image of an edge group in its vertex group.

    >>> injection_index(MatrixInjection.from_rows([[2, 0], [0, 3]]), 2, 2)
    6
    """
    if isinstance(inj, DeclaredIndex):
        return inj.index
    if inj.ncols != n_e or len(inj.rows) != n_v:
        raise InvalidInjection(f"matrix shape {len(inj.rows)}x{inj.ncols} does not match {n_v}x{n_e}")
    if linalg.rank(inj.rows) != n_e:
        raise InvalidInjection("matrix does not have full column rank")
    if n_e < n_v:
        return INF
    return abs(linalg.det([list(r) for r in inj.rows]))


def validate(g: GraphOfGroups) -> list[str]:
    """All violated well-formedness conditions, as human-readable strings."""
    problems = []
    if g.regime not in (ABSTRACT, ABELIAN):
        return [f"unknown regime {g.regime!r}"]
    abelian = g.regime == ABELIAN
    for vid, spec in sorted(g.vertices.items()):
        if spec.dim < 0:
            problems.append(f"vertex {vid}: negative dimension")
        if spec.abelian != abelian:
            problems.append(f"vertex {vid}: regime mismatch")
    for eid, e in sorted(g.edges.items()):
        if e.group.dim < 0:
            problems.append(f"edge {eid}: negative dimension")
        if e.group.abelian != abelian:
            problems.append(f"edge {eid}: regime mismatch")
        for k, end in enumerate(e.ends, start=1):
            if end.vertex not in g.vertices:
                problems.append(f"edge {eid} end {k}: unknown vertex {end.vertex}")
                continue
            vdim = g.vertices[end.vertex].dim
            if e.group.dim > vdim:
                problems.append(f"edge {eid} end {k}: edge dim exceeds vertex dim")
            inj = end.injection
            if abelian:
                if not isinstance(inj, MatrixInjection):
                    problems.append(f"edge {eid} end {k}: abelian edge needs a matrix")
                    continue
                if len(inj.rows) != vdim or inj.ncols != e.group.dim or any(
                    len(r) != inj.ncols for r in inj.rows
                ):
                    problems.append(f"edge {eid} end {k}: matrix shape does not match ranks")
                elif inj.ncols and linalg.rank(inj.rows) != inj.ncols:
                    problems.append(f"edge {eid} end {k}: matrix not of full column rank")
            else:
                if not isinstance(inj, DeclaredIndex):
                    problems.append(f"edge {eid} end {k}: abstract edge needs a declared index")
                elif not (inj.index == INF or (isinstance(inj.index, int) and inj.index >= 1)):
                    problems.append(f"edge {eid} end {k}: index must be a positive integer or inf")
    if not g.is_connected():
        problems.append("graph is disconnected")
    return problems


def surjective_end_counts(g: GraphOfGroups) -> dict[str, int]:
    counts = {v: 0 for v in g.vertices}
    for eid in g.edges:
        for k in (1, 2):
            if g.index(eid, k) == 1:
                counts[g.end(eid, k).vertex] += 1
    return counts


def is_reduced(g: GraphOfGroups) -> tuple[bool, dict[str, int]]:
    """No vertex has exactly one incident index-1 end."""
    counts = surjective_end_counts(g)
    return all(c != 1 for c in counts.values()), counts


def is_geometrically_homogeneous(g: GraphOfGroups) -> bool:
    return all(g.index(eid, k) != INF for eid in g.edges for k in (1, 2))


def tree_valence(g: GraphOfGroups, v: str) -> float:
    """Valence of any lift of ``v`` to the Bass-Serre tree."""
    return sum((g.index(eid, k) for eid, k in g.end_refs(v)), 0)


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "COLLAPSE" or "NON-COLLAPSIBLE"
    edge: str
    vertex: str
    into: str | None = None

    def __str__(self) -> str:
        if self.kind == "COLLAPSE":
            return f"COLLAPSE edge={self.edge} vertex={self.vertex} into={self.into}"
        return f"NON-COLLAPSIBLE edge={self.edge} vertex={self.vertex} loop"


def collapsible(g: GraphOfGroups) -> list[tuple[str, int]]:
    """(edge, end) pairs whose collapse is admissible, in canonical order.

    The end named is the index-1 end at a vertex with exactly one
    index-1 end; that vertex is the one absorbed.
    """
    counts = surjective_end_counts(g)
    out = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        if e.is_loop:
            continue
        for k in (1, 2):
            if g.index(eid, k) == 1 and counts[e.ends[k - 1].vertex] == 1:
                out.append((eid, k))
    return out


def collapse(g: GraphOfGroups, eid: str, k: int) -> GraphOfGroups:
    """Collapse edge ``eid`` by absorbing the vertex at its end ``k`` into the other end."""
    e = g.edges[eid]
    gone = e.ends[k - 1]
    keep = e.ends[2 - k]
    vertices = {v: s for v, s in g.vertices.items() if v != gone.vertex}
    if g.regime == ABELIAN:
        # Gamma_gone = image of Gamma_e (unimodular), composed into Gamma_keep.
        to_keep = linalg.matmul(keep.injection.rows, linalg.inverse(gone.injection.rows))
        if any(x.denominator != 1 for row in to_keep for x in row):
            raise InvalidInjection("collapse produced a non-integral matrix")
        to_keep = [[int(x) for x in row] for row in to_keep]

        def rebase(inj: MatrixInjection) -> MatrixInjection:
            rows = linalg.matmul(to_keep, inj.rows) if inj.ncols else [[] for _ in to_keep]
            return MatrixInjection.from_rows(rows, inj.ncols)
    else:
        factor = g.index(eid, 3 - k)

        def rebase(inj: DeclaredIndex) -> DeclaredIndex:
            return DeclaredIndex(inj.index * factor)

    edges = {}
    for fid, f in g.edges.items():
        if fid == eid:
            continue
        ends = tuple(
            EdgeEnd(keep.vertex, rebase(end.injection)) if end.vertex == gone.vertex else end
            for end in f.ends
        )
        edges[fid] = Edge(f.group, ends)
    return GraphOfGroups(g.regime, vertices, edges)


def reduce(g: GraphOfGroups) -> tuple[GraphOfGroups, list[TraceStep]]:
    """Collapse index-1 edges until no admissible collapse remains.

    Vertices left with a single index-1 end that sits on a loop cannot be
    collapsed; they are reported as ``NON-COLLAPSIBLE`` trace steps.
    """
    trace: list[TraceStep] = []
    while True:
        cands = collapsible(g)
        if not cands:
            break
        eid, k = cands[0]
        e = g.edges[eid]
        trace.append(TraceStep("COLLAPSE", eid, e.ends[k - 1].vertex, e.ends[2 - k].vertex))
        g = collapse(g, eid, k)
    counts = surjective_end_counts(g)
    for v in sorted(counts):
        if counts[v] == 1:
            eid, _ = next((eid, k) for eid, k in g.end_refs(v) if g.index(eid, k) == 1)
            trace.append(TraceStep("NON-COLLAPSIBLE", eid, v))
    return g, trace
