"""Quasi-edges of finite trees and the pipeline that turns their orbits back into a tree."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import networkx as nx

from gogkit import tracks
from gogkit.bassserre import TreeBall
from gogkit.coarse import GraphMetric, QiFit, SampledMap, TreeMetric, fit_qi_constants

DEFAULT_FILL = 12
RETREE_K_GRID = (1, 2, 3)


class EmptyClopen(ValueError):
    pass


class DegeneratePushforward(ValueError):
    pass


class RetreeError(RuntimeError):
    pass


def tree_from_edges(edges: Sequence[tuple[int, int]], root: int | None = None) -> TreeBall:
    """A standalone rooted tree from an undirected edge list."""
    g = nx.Graph(edges)
    if not nx.is_tree(g):
        raise ValueError("edge list is not a tree")
    root = min(g.nodes) if root is None else root
    depth = nx.single_source_shortest_path_length(g, root)
    tree_edges = {}
    for i, (a, b) in enumerate(sorted(tuple(sorted(e)) for e in g.edges)):
        parent, child = (a, b) if depth[a] < depth[b] else (b, a)
        tree_edges[i] = (parent, child)
    return TreeBall(root=root, depth=dict(depth), edges=tree_edges)


class BoundedTree:
    """A finite tree with a designated boundary set standing in for its ends."""

    def __init__(self, tree: TreeBall, boundary=None):
        self.tree = tree
        self.metric = TreeMetric(tree)
        self.adj = {v: sorted(ns) for v, ns in tree.adjacency().items()}
        if boundary is None:
            boundary = tree.truncated or {v for v, ns in self.adj.items() if len(ns) <= 1}
        boundary = frozenset(boundary)
        if not boundary or not boundary <= set(self.adj):
            raise ValueError("boundary must be a nonempty set of tree vertices")
        self.boundary = boundary

    @property
    def vertices(self) -> list[int]:
        return self.tree.vertices

    def d(self, x, y) -> int:
        return int(self.metric.distances[self.metric._index[x], self.metric._index[y]])

    def graph(self) -> nx.Graph:
        return nx.Graph((a, b) for a, b in self.tree.edges.values())


@dataclass(frozen=True, eq=False)
class QuasiEdge:
    side: frozenset
    other: frozenset

    @classmethod
    def of(cls, t: BoundedTree, side) -> QuasiEdge:
        side = frozenset(side)
        other = t.boundary - side
        if not side or not other or not side <= t.boundary:
            raise EmptyClopen("both parts of a quasi-edge must be nonempty subsets of the boundary")
        return cls(side, other)

    @property
    def key(self) -> frozenset:
        return frozenset((self.side, self.other))

    def __eq__(self, other) -> bool:
        return isinstance(other, QuasiEdge) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def canonical(self) -> tuple[tuple, tuple]:
        a, b = sorted((tuple(sorted(self.side)), tuple(sorted(self.other))))
        return a, b


def hull(t: BoundedTree, o) -> set:
    """Smallest subtree containing ``o``, found by pruning leaves outside it."""
    o = set(o)
    if not o:
        raise EmptyClopen("hull of an empty set")
    alive = set(t.adj)
    deg = {v: len(ns) for v, ns in t.adj.items()}
    queue = deque(v for v in alive if deg[v] <= 1 and v not in o)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for w in t.adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= 1 and w not in o:
                    queue.append(w)
    return alive


def neighbourhood(t: BoundedTree, s) -> set:
    out = set(s)
    for v in s:
        out.update(t.adj[v])
    return out


def core(t: BoundedTree, qe: QuasiEdge) -> set:
    """N1(Hull O) ∩ N1(Hull O'); when empty, the midpoint of the bridge between the hulls."""
    h1, h2 = hull(t, qe.side), hull(t, qe.other)
    inter = neighbourhood(t, h1) & neighbourhood(t, h2)
    if inter:
        return inter
    a, b = min(((x, y) for x in h1 for y in h2), key=lambda p: (t.d(*p), p))
    path = nx.shortest_path(t.graph(), a, b)
    return {path[len(path) // 2]}


def qe_constant(t: BoundedTree, qe: QuasiEdge) -> int:
    h1, h2 = hull(t, qe.side), hull(t, qe.other)
    inter = sorted(neighbourhood(t, h1) & neighbourhood(t, h2))
    return max((t.d(x, y) for x in inter for y in inter), default=0)


def core_point(t: BoundedTree, qe: QuasiEdge):
    return min(core(t, qe))


def edge_partition(t: BoundedTree, eid) -> QuasiEdge:
    """The quasi-edge cut out by deleting a tree edge."""
    a, b = t.tree.edges[eid]
    g = t.graph()
    g.remove_edge(a, b)
    side = nx.node_connected_component(g, b) & t.boundary
    return QuasiEdge.of(t, side)


def true_edge_partition(t: BoundedTree, qe: QuasiEdge):
    """The edge whose deletion splits the boundary as ``qe`` does, or None."""
    for eid in sorted(t.tree.edges):
        try:
            if edge_partition(t, eid) == qe:
                return eid
        except EmptyClopen:
            continue
    return None


def boundary_map(t: BoundedTree, f: Mapping) -> dict:
    """x in the boundary -> nearest boundary vertex to f(x), ties to the smallest id."""
    bd = sorted(t.boundary)
    return {x: min(bd, key=lambda y: (t.d(f[x], y), y)) for x in bd}


def pushforward(t: BoundedTree, f: Mapping, qe: QuasiEdge) -> QuasiEdge:
    """Image of a quasi-edge under a vertex self-map, read through the boundary map."""
    beta = boundary_map(t, f)
    votes: dict = {}
    for x in t.boundary:
        side = 0 if x in qe.side else 1
        votes.setdefault(beta[x], Counter())[side] += 1
    # contested points go to the majority of their preimages, ties to the O-side
    b = {y for y, c in votes.items() if c[0] >= c[1]}
    # points missed by the boundary map follow the nearest point that was hit
    hit = sorted(votes)
    for y in sorted(t.boundary - set(votes)):
        if min(hit, key=lambda z: (t.d(y, z), z)) in b:
            b.add(y)
    if not b or b == set(t.boundary):
        raise DegeneratePushforward("image partition has an empty side")
    return QuasiEdge(frozenset(b), t.boundary - frozenset(b))


def compose(f: Mapping, g: Mapping) -> dict:
    """f after g."""
    return {x: f[g[x]] for x in g}


def _canonical_form(t: BoundedTree, v, parent) -> str:
    kids = [w for w in t.adj[v] if w != parent]
    return "(" + "".join(sorted(_canonical_form(t, w, v) for w in kids)) + ")"


def _match(t: BoundedTree, a, pa, b, pb, out: dict):
    out[a] = b
    ka = sorted((w for w in t.adj[a] if w != pa), key=lambda w: (_canonical_form(t, w, a), w))
    kb = sorted((w for w in t.adj[b] if w != pb), key=lambda w: (_canonical_form(t, w, b), w))
    for x, y in zip(ka, kb):
        _match(t, x, a, y, b, out)


def subtree_swap(t: BoundedTree, a, b) -> dict:
    """Automorphism exchanging the subtrees below siblings ``a`` and ``b``."""
    parent = {c: p for p, c in t.tree.edges.values()}
    if parent.get(a) is None or parent.get(a) != parent.get(b):
        raise ValueError("subtree swap needs two siblings")
    p = parent[a]
    if _canonical_form(t, a, p) != _canonical_form(t, b, p):
        raise ValueError("sibling subtrees are not isomorphic")
    f = {v: v for v in t.vertices}
    fwd, back = {}, {}
    _match(t, a, p, b, p, fwd)
    _match(t, b, p, a, p, back)
    f.update(fwd)
    f.update(back)
    return f


@dataclass
class NerveGraph:
    graph: nx.Graph
    quasi_edges: list[QuasiEdge]
    cores: list[set]
    positions: list
    degenerate: int = 0
    connected: bool = True
    fit: QiFit | None = None


def hausdorff(t: BoundedTree, a, b) -> int:
    one = max(min(t.d(x, y) for y in b) for x in a)
    two = max(min(t.d(x, y) for x in a) for y in b)
    return max(one, two)


def nerve_graph(t: BoundedTree, qes: Sequence[QuasiEdge], threshold: int, degenerate: int = 0) -> NerveGraph:
    """Quasi-edges as nodes, joined when their cores lie within Hausdorff distance ``threshold``."""
    cores = [core(t, q) for q in qes]
    positions = [min(c) for c in cores]
    g = nx.Graph()
    g.add_nodes_from(range(len(qes)))
    for i in range(len(qes)):
        for j in range(i + 1, len(qes)):
            if hausdorff(t, cores[i], cores[j]) <= threshold:
                g.add_edge(i, j)
    for i, p in enumerate(positions):
        g.nodes[i]["core"] = p
    connected = nx.is_connected(g) if len(g) else False
    fit = None
    if len(g) >= 2 and connected:
        fit = fit_qi_constants(SampledMap(GraphMetric(g), t.metric, dict(enumerate(positions))))
    return NerveGraph(g, list(qes), cores, positions, degenerate, connected, fit)


def orbit_nerve_graph(
    t: BoundedTree,
    qe0: QuasiEdge,
    generators: Sequence[Mapping],
    word_length: int,
    threshold: int,
) -> NerveGraph:
    """Nerve graph of the orbit of ``qe0`` under words of bounded length in the generators."""
    seen = {qe0: 0}
    order = [qe0]
    frontier = [qe0]
    degenerate = 0
    for _ in range(word_length):
        nxt = []
        for q in frontier:
            for f in generators:
                try:
                    image = pushforward(t, f, q)
                except DegeneratePushforward:
                    degenerate += 1
                    continue
                if image not in seen:
                    seen[image] = len(order)
                    order.append(image)
                    nxt.append(image)
        frontier = nxt
    return nerve_graph(t, order, threshold, degenerate)


@dataclass
class RetreeResult:
    tree: nx.Graph
    complex: tracks.TriComplex
    family: tracks.FamilyReport
    cones: int
    positions: dict
    fit: QiFit | None
    notes: list[str] = field(default_factory=list)


def short_cycles(y: nx.Graph, fill: int) -> list[list]:
    """Cycles of length <= ``fill``, each rotated to start at its smallest node, in sorted order."""
    out = []
    for cyc in nx.simple_cycles(y, length_bound=fill):
        i = cyc.index(min(cyc))
        cyc = cyc[i:] + cyc[:i]
        if len(cyc) > 2 and cyc[-1] < cyc[1]:
            cyc = [cyc[0]] + cyc[:0:-1]
        out.append(cyc)
    return sorted(out)


def fill_cycles(y: nx.Graph, fill: int = DEFAULT_FILL, budget: int = 10**5) -> tuple[tracks.TriComplex, int]:
    """Cone off every cycle of length <= ``fill``; leftover graph edges stay bare."""
    name = {v: f"y{v}" for v in y.nodes}
    verts = [name[v] for v in sorted(y.nodes)]
    tris = []
    covered = set()
    cycles = short_cycles(y, fill)
    if len(cycles) > budget:
        raise RetreeError(f"{len(cycles)} short cycles exceed the budget {budget}")
    for k, cyc in enumerate(cycles):
        z = f"z{k}"
        verts.append(z)
        for i in range(len(cyc)):
            u, w = cyc[i], cyc[(i + 1) % len(cyc)]
            tris.append((f"c{k}_{i}", (z, name[u], name[w])))
            covered.add(frozenset((u, w)))
    bare = [
        (f"b{i}", (name[u], name[w]))
        for i, (u, w) in enumerate(sorted(tuple(sorted(e)) for e in y.edges if frozenset(e) not in covered))
    ]
    return tracks.TriComplex.build(verts, tris, bare), len(cycles)


def retree(
    t: BoundedTree,
    y: nx.Graph,
    fill: int = DEFAULT_FILL,
    m: int = 2,
    weight_cap: int = 3,
    budget: int = 10**6,
) -> RetreeResult:
    """Fill short cycles of Y¹, cut along a maximal essential family, and read off the dual tree.

    Nodes of ``y`` must carry a ``core`` attribute (a vertex of ``t``); each
    node of the output tree is placed at the core of the smallest graph node
    in its region.
    """
    if len(y) == 0 or not nx.is_connected(y):
        raise RetreeError("Y¹ must be nonempty and connected")
    cx, cones = fill_cycles(y, fill)
    h1 = tracks.h1_rank(cx)
    if h1:
        raise RetreeError(f"filled complex has first Betti number {h1}")
    family, report = tracks.maximal_essential_family(cx, m, weight_cap, budget)
    dual = tracks.dual_graph(cx, family)
    if dual.flagged:
        raise RetreeError(f"{len(dual.flagged)} non-separating tracks in the family")
    out = nx.Graph(dual.graph)
    cone_home = {}
    for k, cyc in enumerate(short_cycles(y, fill)):
        cone_home[f"z{k}"] = min(cyc)
    positions = {}
    notes = []
    for node, verts in enumerate(dual.regions.vertex_sets):
        ys = sorted(int(v[1:]) for v in verts if v.startswith("y"))
        zs = sorted(cone_home[v] for v in verts if v.startswith("z"))
        if ys or zs:
            positions[node] = y.nodes[(ys or zs)[0]]["core"]
        else:
            notes.append(f"region {node} holds no vertex")
    for node in sorted(set(out.nodes) - set(positions)):
        nbr = next((w for w in sorted(out[node]) if w in positions), None)
        if nbr is not None:
            positions[node] = positions[nbr]
    if not nx.is_tree(out):
        raise RetreeError("dual graph is not a tree")
    fit = None
    if len(out) >= 2:
        fit = fit_qi_constants(SampledMap(GraphMetric(out), t.metric, positions), RETREE_K_GRID)
    return RetreeResult(out, cx, report, cones, positions, fit, notes)
