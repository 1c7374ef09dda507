"""Normal-coordinate tracks on triangulated 2-complexes.

A pattern puts ``x_v`` parallel arcs around corner ``v`` of every triangle.
On an edge ``{u, v}`` of weight ``w`` the points are numbered 0..w-1 from the
endpoint that sorts first; inside a triangle the ``j``-th arc around ``v``
(counting outward from ``v``) joins the ``j``-th points from ``v`` on the two
edges at ``v``.
"""

from __future__ import annotations

import enum
from functools import cached_property
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field

import networkx as nx

from gogkit import linalg


class InvalidComplex(ValueError):
    pass


class InvalidPattern(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Essentiality(str, enum.Enum):
    ESSENTIAL = "ESSENTIAL"
    INESSENTIAL = "INESSENTIAL"
    NON_SEPARATING = "NonSeparating"

    def __bool__(self) -> bool:
        return self is Essentiality.ESSENTIAL


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


class _DSU:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class TriComplex:
    vertices: tuple[str, ...]
    triangles: tuple[tuple[str, tuple[str, str, str]], ...]
    bare: tuple[tuple[str, tuple[str, str]], ...] = ()

    @classmethod
    def build(cls, vertices, triangles, bare=()) -> TriComplex:
        """``triangles``: ``(id, (a, b, c))`` or plain vertex triples (ids t0, t1, ...)."""
        tris = []
        for i, t in enumerate(triangles):
            if len(t) == 2 and not isinstance(t[1], str):
                tris.append((t[0], tuple(t[1])))
            else:
                tris.append((f"t{i}", tuple(t)))
        c = cls(tuple(vertices), tuple(tris), tuple((e, tuple(uv)) for e, uv in bare))
        problems = c.problems()
        if problems:
            raise InvalidComplex("; ".join(problems))
        return c

    def problems(self) -> list[str]:
        out = []
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            out.append("repeated vertex id")
        for tid, tri in self.triangles:
            if len(set(tri)) != 3:
                out.append(f"triangle {tid} has repeated vertices")
            if not set(tri) <= vs:
                out.append(f"triangle {tid} uses an unknown vertex")
        for eid, (u, v) in self.bare:
            if u == v or not {u, v} <= vs:
                out.append(f"bare edge {eid} is malformed")
            elif edge_key(u, v) in self.triangle_edges:
                out.append(f"bare edge {eid} lies in a triangle")
        if not out and not nx.is_connected(self.graph()):
            out.append("complex is disconnected")
        return out

    @cached_property
    def triangle_edges(self) -> dict[tuple[str, str], list[tuple[int, int, int]]]:
        """Edge key -> [(triangle index, corner at key[0], corner at key[1])]."""
        out: dict = defaultdict(list)
        for ti, (_, tri) in enumerate(self.triangles):
            for i in range(3):
                for j in range(i + 1, 3):
                    a, b = tri[i], tri[j]
                    if a <= b:
                        out[(a, b)].append((ti, i, j))
                    else:
                        out[(b, a)].append((ti, j, i))
        return dict(out)

    @cached_property
    def edges(self) -> list[tuple[str, str]]:
        return sorted(set(self.triangle_edges) | {edge_key(*uv) for _, uv in self.bare})

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def triangle_order(self) -> list[int]:
        """Triangles in breadth-first order across shared edges."""
        te = self.triangle_edges
        adj = defaultdict(set)
        for occ in te.values():
            for a, _, _ in occ:
                for b, _, _ in occ:
                    if a != b:
                        adj[a].add(b)
        order, seen = [], set()
        for start in range(len(self.triangles)):
            if start in seen:
                continue
            seen.add(start)
            queue = deque([start])
            while queue:
                t = queue.popleft()
                order.append(t)
                for u in sorted(adj[t]):
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
        return order


@dataclass(frozen=True)
class NormalPattern:
    """Corner coordinates per triangle (in the triangle's vertex order) and bare-edge weights."""

    corners: tuple[tuple[int, int, int], ...]
    bare: tuple[int, ...] = ()

    @classmethod
    def zero(cls, c: TriComplex) -> NormalPattern:
        return cls(((0, 0, 0),) * len(c.triangles), (0,) * len(c.bare))

    @classmethod
    def of(cls, c: TriComplex, corners: dict | None = None, bare: dict | None = None) -> NormalPattern:
        corners = corners or {}
        bare = bare or {}
        return cls(
            tuple(tuple(corners.get(tid, (0, 0, 0))) for tid, _ in c.triangles),
            tuple(bare.get(eid, 0) for eid, _ in c.bare),
        )

    def __add__(self, other: NormalPattern) -> NormalPattern:
        return NormalPattern(
            tuple(tuple(a + b for a, b in zip(x, y)) for x, y in zip(self.corners, other.corners)),
            tuple(a + b for a, b in zip(self.bare, other.bare)),
        )

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(x for t in self.corners for x in t) + self.bare

    def is_zero(self) -> bool:
        return not any(self.coords)


def validate_pattern(c: TriComplex, p: NormalPattern) -> list[str]:
    out = []
    if len(p.corners) != len(c.triangles) or len(p.bare) != len(c.bare):
        return ["pattern shape does not match the complex"]
    for (tid, _), xs in zip(c.triangles, p.corners):
        if any(x < 0 for x in xs):
            out.append(f"negative corner coordinate in {tid}")
    for (eid, _), w in zip(c.bare, p.bare):
        if w < 0:
            out.append(f"negative weight on bare edge {eid}")
    for key, occ in c.triangle_edges.items():
        weights = {p.corners[t][i] + p.corners[t][j] for t, i, j in occ}
        if len(weights) > 1:
            out.append(f"edge {key[0]}-{key[1]} gets weights {sorted(weights)}")
    return out


def edge_weights(c: TriComplex, p: NormalPattern) -> dict[tuple[str, str], int]:
    w = {key: p.corners[occ[0][0]][occ[0][1]] + p.corners[occ[0][0]][occ[0][2]] for key, occ in c.triangle_edges.items()}
    for (_, uv), x in zip(c.bare, p.bare):
        w[edge_key(*uv)] = x
    return w


def total_weight(c: TriComplex, p: NormalPattern) -> int:
    return sum(edge_weights(c, p).values())


def _check(c: TriComplex, p: NormalPattern) -> dict:
    problems = validate_pattern(c, p)
    if problems:
        raise InvalidPattern("; ".join(problems))
    return edge_weights(c, p)


def _point(key, w: int, v: str, j: int) -> tuple:
    """The ``j``-th point from endpoint ``v`` on edge ``key``."""
    return (key, j if v == key[0] else w - 1 - j)


def _arcs(c: TriComplex, p: NormalPattern, weights):
    """Yield (triangle index, corner, j, point on one side, point on the other)."""
    for ti, (_, tri) in enumerate(c.triangles):
        for corner in range(3):
            v = tri[corner]
            others = [tri[k] for k in range(3) if k != corner]
            keys = [edge_key(v, o) for o in others]
            for j in range(p.corners[ti][corner]):
                yield ti, corner, j, _point(keys[0], weights[keys[0]], v, j), _point(keys[1], weights[keys[1]], v, j)


def _trace(c: TriComplex, p: NormalPattern, weights) -> tuple[list, _DSU, dict]:
    """Arcs of ``p``, the union-find of their points, and per-root coordinate counts."""
    dsu = _DSU()
    arcs = list(_arcs(c, p, weights))
    for *_, x, y in arcs:
        dsu.add(x)
        dsu.add(y)
        dsu.union(x, y)
    for k, (_, uv) in enumerate(c.bare):
        key = edge_key(*uv)
        for i in range(weights[key]):
            dsu.add((key, i))
    tri: dict = defaultdict(lambda: [[0, 0, 0] for _ in c.triangles])
    bare: dict = defaultdict(lambda: [0] * len(c.bare))
    for ti, corner, _, x, _ in arcs:
        tri[dsu.find(x)][ti][corner] += 1
    for k, (_, uv) in enumerate(c.bare):
        key = edge_key(*uv)
        for i in range(weights[key]):
            bare[(key, i)][k] += 1
    roots = {}
    for root in set(tri) | set(bare):
        corners = tri[root] if root in tri else [[0, 0, 0] for _ in c.triangles]
        b = bare[root] if root in bare else [0] * len(c.bare)
        roots[root] = NormalPattern(tuple(map(tuple, corners)), tuple(b))
    return arcs, dsu, roots


def pattern_components(c: TriComplex, p: NormalPattern) -> list[NormalPattern]:
    """Connected components of the embedded pattern, sorted by coordinates."""
    _, _, roots = _trace(c, p, _check(c, p))
    return sorted(roots.values(), key=lambda q: q.coords)


@dataclass
class Regions:
    """Complementary regions of a pattern: a label per region piece, vertex sets per label."""

    labels: dict
    vertex_sets: list[frozenset]
    dsu: _DSU = field(repr=False, default=None)

    @property
    def count(self) -> int:
        return len(self.vertex_sets)


def _segment_region(ti, tri, p, key, w, s):
    """Region of triangle ``ti`` containing segment ``s`` of edge ``key``.

    Region ``("r", t, corner, k)`` lies between the (k-1)-th and k-th arcs
    around that corner; ``("c", t)`` is the central one.
    """
    cu, cv = tri.index(key[0]), tri.index(key[1])
    xu = p.corners[ti][cu]
    if s < xu:
        return ("r", ti, cu, s)
    if s == xu:
        return ("c", ti)
    return ("r", ti, cv, w - s)


def _regions(c: TriComplex, p: NormalPattern, weights) -> _DSU:
    dsu = _DSU()
    for v in c.vertices:
        dsu.add(("v", v))
    for ti, (_, tri) in enumerate(c.triangles):
        dsu.add(("c", ti))
        for corner in range(3):
            for k in range(p.corners[ti][corner]):
                dsu.add(("r", ti, corner, k))
    te = c.triangle_edges
    for key in c.edges:
        w = weights[key]
        for s in range(w + 1):
            seg = ("s", key, s)
            dsu.add(seg)
            for ti, _, _ in te.get(key, ()):
                dsu.union(seg, _segment_region(ti, c.triangles[ti][1], p, key, w, s))
        dsu.union(("v", key[0]), ("s", key, 0))
        dsu.union(("v", key[1]), ("s", key, w))
    return dsu


def complement_components(c: TriComplex, p: NormalPattern) -> Regions:
    weights = _check(c, p)
    dsu = _regions(c, p, weights)
    roots = sorted({dsu.find(x) for x in dsu.parent}, key=repr)
    members: dict = {r: set() for r in roots}
    for v in c.vertices:
        members[dsu.find(("v", v))].add(v)
    ordered = sorted(roots, key=lambda r: (sorted(members[r]), repr(r)))
    label = {r: i for i, r in enumerate(ordered)}
    return Regions({x: label[dsu.find(x)] for x in dsu.parent}, [frozenset(members[r]) for r in ordered], dsu)


def is_essential(c: TriComplex, track: NormalPattern, m: int) -> Essentiality:
    """Whether both sides of a single track hold at least ``m`` vertices."""
    regions = complement_components(c, track)
    if regions.count != 2:
        return Essentiality.NON_SEPARATING
    if all(len(s) >= m for s in regions.vertex_sets):
        return Essentiality.ESSENTIAL
    return Essentiality.INESSENTIAL


@dataclass
class DualGraph:
    graph: nx.Graph
    flagged: list[int]  # indices of tracks that do not border exactly two regions
    tracks: list[NormalPattern]
    regions: Regions

    @property
    def is_tree(self) -> bool:
        return not self.flagged and self.graph.number_of_nodes() > 0 and nx.is_tree(self.graph)


def dual_graph(c: TriComplex, p: NormalPattern) -> DualGraph:
    """Complementary regions as nodes, one edge per track joining the regions it borders."""
    weights = _check(c, p)
    regions = complement_components(c, p)
    arcs, dsu, roots = _trace(c, p, weights)
    lab = regions.labels
    sides: dict = defaultdict(set)
    for ti, corner, j, x, _ in arcs:
        outer = ("r", ti, corner, j + 1) if j + 1 < p.corners[ti][corner] else ("c", ti)
        sides[dsu.find(x)] |= {lab[("r", ti, corner, j)], lab[outer]}
    for _, uv in c.bare:
        key = edge_key(*uv)
        for i in range(weights[key]):
            sides[(key, i)] |= {lab[("s", key, i)], lab[("s", key, i + 1)]}
    order = sorted(roots, key=lambda r: (roots[r].coords, sorted(sides[r])))
    g = nx.MultiGraph()
    g.add_nodes_from(range(regions.count))
    flagged = []
    for idx, root in enumerate(order):
        if len(sides[root]) == 2:
            a, b = sorted(sides[root])
            g.add_edge(a, b, track=idx)
        else:
            flagged.append(idx)
    return DualGraph(g, flagged, [roots[r] for r in order], regions)


def h1_rank(c: TriComplex) -> int:
    """First rational Betti number from the ranks of the two boundary maps."""
    edges = c.edges
    eidx = {e: i for i, e in enumerate(edges)}
    vidx = {v: i for i, v in enumerate(c.vertices)}
    d1 = [[0] * len(edges) for _ in c.vertices]
    for i, (u, v) in enumerate(edges):
        d1[vidx[u]][i] -= 1
        d1[vidx[v]][i] += 1
    d2 = [[0] * len(c.triangles) for _ in edges]
    for j, (_, (a, b, cc)) in enumerate(c.triangles):
        for x, y in ((a, b), (b, cc), (cc, a)):
            d2[eidx[edge_key(x, y)]][j] += 1 if x <= y else -1
    r1 = linalg.rank(d1) if edges else 0
    r2 = linalg.rank(d2) if c.triangles else 0
    return len(edges) - r1 - r2


# Enumeration ---------------------------------------------------------------


def enumerate_patterns(c: TriComplex, weight_cap: int, budget: int = 10**6):
    """Every valid pattern on the triangles with total edge weight <= ``weight_cap``.

    Triangles are filled in breadth-first order; a triangle's coordinates are
    forced or bounded by the weights of its edges already fixed.
    """
    order = c.triangle_order()
    tris = [c.triangles[t][1] for t in order]
    keys = [[edge_key(tri[i], tri[j]) for i, j in ((0, 1), (1, 2), (0, 2))] for tri in tris]
    fixed: dict = {}
    current = [None] * len(tris)
    steps = 0

    def options(pos, left):
        (ab, bc, ac) = keys[pos]
        wab, wbc, wac = fixed.get(ab), fixed.get(bc), fixed.get(ac)
        for xa in range(left + 1 if wab is None and wac is None else min(x for x in (wab, wac) if x is not None) + 1):
            for xb in _range_for(wab, xa, left):
                for xc in _range_for(wac, xa, left):
                    if wbc is not None and xb + xc != wbc:
                        continue
                    new = sum(w for k, w in ((ab, xa + xb), (bc, xb + xc), (ac, xa + xc)) if k not in fixed)
                    if new <= left:
                        yield (xa, xb, xc), new

    def _range_for(w, xa, left):
        if w is not None:
            return (w - xa,) if w >= xa else ()
        return range(left + 1)

    def rec(pos, left):
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"pattern enumeration passed {budget} steps")
        if pos == len(tris):
            corners = [None] * len(c.triangles)
            for t, xs in zip(order, current):
                corners[t] = xs
            yield NormalPattern(tuple(corners), (0,) * len(c.bare))
            return
        for xs, new in options(pos, left):
            added = []
            for k, w in zip(keys[pos], (xs[0] + xs[1], xs[1] + xs[2], xs[0] + xs[2])):
                if k not in fixed:
                    fixed[k] = w
                    added.append(k)
            current[pos] = xs
            yield from rec(pos + 1, left - new)
            for k in added:
                del fixed[k]

    yield from rec(0, weight_cap)


def enumerate_tracks(c: TriComplex, weight_cap: int, budget: int = 10**6) -> list[NormalPattern]:
    """Connected nonzero patterns of weight <= cap, ordered by (weight, coordinates)."""
    found = set()
    for p in enumerate_patterns(c, weight_cap, budget):
        if p.is_zero():
            continue
        if len(pattern_components(c, p)) == 1:
            found.add(p)
    if weight_cap >= 1:
        for k in range(len(c.bare)):
            found.add(NormalPattern(((0, 0, 0),) * len(c.triangles), tuple(int(i == k) for i in range(len(c.bare)))))
    return sorted(found, key=lambda q: (total_weight(c, q), q.coords))


@dataclass
class FamilyReport:
    tracks: list[NormalPattern]
    candidates: int
    non_separating: int
    passes: int
    region_sizes: list[int]
    bounded: bool  # every complementary region has fewer than m vertices


def addable(c: TriComplex, family: NormalPattern, tau: NormalPattern, m: int) -> bool:
    """Whether ``tau`` can join the family.

    It must be essential on its own, not a copy of a member, disjoint from
    the family (the sum splits back into the same pieces), and afterwards
    every track must still see at least ``m`` vertices on each side within
    the complement of the whole enlarged family.
    """
    if not is_essential(c, tau, m):
        return False
    current = pattern_components(c, family)
    if tau in current:
        return False
    bigger = family + tau
    dual = dual_graph(c, bigger)
    if Counter(dual.tracks) != Counter(current + [tau]) or dual.flagged:
        return False
    sizes = [len(s) for s in dual.regions.vertex_sets]
    return all(sizes[a] >= m and sizes[b] >= m for a, b in dual.graph.edges())


def maximal_essential_family(
    c: TriComplex, m: int, weight_cap: int, budget: int = 10**6
) -> tuple[NormalPattern, FamilyReport]:
    candidates = enumerate_tracks(c, weight_cap, budget)
    verdicts = {tau: is_essential(c, tau, m) for tau in candidates}
    family = NormalPattern.zero(c)
    members: list[NormalPattern] = []
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for tau in candidates:
            if verdicts[tau] and addable(c, family, tau, m):
                family = family + tau
                members.append(tau)
                changed = True
    sizes = [len(s) for s in complement_components(c, family).vertex_sets]
    report = FamilyReport(
        members,
        len(candidates),
        sum(v is Essentiality.NON_SEPARATING for v in verdicts.values()),
        passes,
        sizes,
        all(s < m for s in sizes),
    )
    return family, report
