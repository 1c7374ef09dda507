"""Crossing relation and crossing graphs of edge-space patterns in abelian vertex spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy import ndimage

from gogkit import linalg
from gogkit.gog import ABELIAN, GraphOfGroups


class AbstractRegime(ValueError):
    """The operation needs integer matrices (the abelian regime)."""


class NotHyperplane(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PatternEntry:
    end: str  # "edge:end#"
    basis: tuple[tuple[int, ...], ...]  # basis vectors of the image
    rank: int


@dataclass(frozen=True)
class DirectionPattern:
    n: int
    entries: tuple[PatternEntry, ...]

    def of_rank(self, lo: int, hi: int | None = None) -> list[PatternEntry]:
        hi = lo if hi is None else hi
        return [e for e in self.entries if lo <= e.rank <= hi]


def direction_pattern(g: GraphOfGroups, v: str) -> DirectionPattern:
    if g.regime != ABELIAN:
        raise AbstractRegime("crossing data needs the abelian regime")
    entries = []
    for eid, k in g.end_refs(v):
        cols = g.end(eid, k).injection.columns
        entries.append(PatternEntry(f"{eid}:{k}", tuple(map(tuple, cols)), linalg.rank(cols) if cols else 0))
    return DirectionPattern(g.vertices[v].rank, tuple(entries))


def crosses(s, e, n: int) -> bool:
    """Whether a subspace with basis ``s`` crosses a hyperplane with basis ``e`` in Q^n.

    True exactly when the direction of ``s`` is not contained in that of ``e``.
    """
    e = [list(x) for x in e]
    if (linalg.rank(e) if e else 0) != n - 1:
        raise NotHyperplane("second argument must span a hyperplane")
    both = e + [list(x) for x in s]
    return (linalg.rank(both) if both else 0) > n - 1


def _outside_vector(basis, n: int) -> tuple[int, ...]:
    """A standard basis vector not in the span of ``basis``."""
    r = linalg.rank(basis) if basis else 0
    for i in range(n):
        unit = [int(j == i) for j in range(n)]
        if linalg.rank(list(basis) + [unit]) > r:
            return tuple(unit)
    raise ValueError("subspace is everything")


@dataclass
class CrossingSummary:
    verdict: str  # EMPTY | CONNECTED | DISCONNECTED
    witness: dict = field(default_factory=dict)


def crossing_graph_summary(g: GraphOfGroups, v: str) -> CrossingSummary:
    """Connectivity of the (infinite) coset crossing graph from direction data."""
    pat = direction_pattern(g, v)
    n = pat.n
    hyper = pat.of_rank(n - 1)
    if n == 0 or not hyper:
        return CrossingSummary("EMPTY")
    directions: list[PatternEntry] = []
    for h in hyper:
        if not any(linalg.same_span(h.basis, d.basis) for d in directions):
            directions.append(h)
    if len(directions) >= 2:
        return CrossingSummary("CONNECTED", {"crossing_pair": (directions[0].end, directions[1].end)})
    w = directions[0]
    for u in pat.of_rank(1, n - 2):
        if crosses(u.basis, w.basis, n):
            return CrossingSummary("CONNECTED", {"crosser": u.end, "direction": w.end})
    shift = _outside_vector(w.basis, n)
    return CrossingSummary("DISCONNECTED", {"end": w.end, "cosets": ((0,) * n, shift)})


# Lattice oracle ---------------------------------------------------------------


@dataclass
class OracleGraph:
    nodes: list[tuple[str, int]]
    edges: list[tuple[tuple[str, int], tuple[str, int]]]
    connected: bool | None
    conclusive: bool
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not self.nodes:
            return "EMPTY"
        return "CONNECTED" if self.connected else "DISCONNECTED"


def _coset_mask(basis, offset, n: int, r: int) -> np.ndarray:
    grid = np.indices((2 * r + 1,) * n).reshape(n, -1).T - r
    normals = linalg.integer_kernel([list(b) for b in basis], n) if basis else [
        [int(i == j) for j in range(n)] for i in range(n)
    ]
    nm = np.array(normals, dtype=np.int64).reshape(len(normals), n)
    on = np.all((grid - np.array(offset)) @ nm.T == 0, axis=1)
    return on.reshape((2 * r + 1,) * n)


def lattice_oracle_crossing_graph(
    g: GraphOfGroups,
    v: str,
    r: int = 30,
    cosets: int = 3,
    threshold: int = 4,
    a: int = 1,
    spacing: int | None = None,
    budget: int = 50_000_000,
) -> OracleGraph:
    """Materialise a few cosets of every incident image in a box and test crossing metrically.

    A set crosses a hyperplane coset E when it has points, at sup-distance at
    least ``threshold`` from E, in two different deep components of
    ``box - N_a(E)``.  Cosets of one image are spaced ``spacing`` apart along
    a lattice vector outside the image.
    """
    pat = direction_pattern(g, v)
    n = pat.n
    hyper = pat.of_rank(n - 1)
    if n == 0 or not hyper:
        return OracleGraph([], [], None, True)
    box = (2 * r + 1) ** n
    lower = pat.of_rank(1, n - 2)
    total = cosets * (len(hyper) + len(lower))
    if total * box > budget:
        raise BudgetExceeded(f"{total} cosets in a box of {box} points")
    if spacing is None:
        spacing = max(2 * threshold + 2, r // (cosets + 1))
    js = [j - (cosets - 1) // 2 for j in range(cosets)]

    def sample(entry: PatternEntry, slot: int):
        out = []
        shift = _outside_vector(entry.basis, n)
        for j in js:
            # distinct ends of one direction are offset by their slot so cosets differ
            off = tuple((j * spacing + slot) * x for x in shift)
            out.append(((entry.end, j), _coset_mask(entry.basis, off, n, r)))
        return out

    hyper_sets = [s for i, e in enumerate(hyper) for s in sample(e, i)]
    lower_sets = [s for i, e in enumerate(lower) for s in sample(e, i)]
    structure = ndimage.generate_binary_structure(n, 1)
    sides = {}
    conclusive = True
    notes = []
    for name, mask in hyper_sets:
        dist = ndimage.distance_transform_cdt(~mask, metric="chessboard")
        free = dist > a
        labels, _ = ndimage.label(free, structure=structure)
        padded = np.pad(free, 1, constant_values=False)
        room = ndimage.distance_transform_cdt(padded, metric="chessboard")[(slice(1, -1),) * n]
        deep = set(np.unique(labels[room > threshold]).tolist()) - {0}
        if len(deep) != 2:
            conclusive = False
            notes.append(f"coset {name} leaves {len(deep)} deep components")
        far = (dist >= threshold) & np.isin(labels, list(deep))
        sides[name] = (labels, far)

    def cross(mask, name) -> bool:
        labels, far = sides[name]
        hit = set(np.unique(labels[mask & far]).tolist()) - {0}
        return len(hit) >= 2

    nodes = [name for name, _ in hyper_sets]
    masks = dict(hyper_sets)
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for x, y in itertools.combinations(nodes, 2):
        if cross(masks[x], y) or cross(masks[y], x):
            graph.add_edge(x, y)
            continue
        for _, m in lower_sets:
            if cross(m, x) and cross(m, y):
                graph.add_edge(x, y)
                break
    edges = sorted(tuple(sorted(e)) for e in graph.edges)
    return OracleGraph(nodes, edges, nx.is_connected(graph), conclusive, notes)
