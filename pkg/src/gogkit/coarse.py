"""Coarse geometry on finite hosts.

Hosts are either a lattice box ``Z^n ∩ [-r, r]^n`` or the vertex set of a
finite tree (or any connected graph) with its path metric.  All notions are computed exactly on the
finite host; nothing is extrapolated beyond it.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
from scipy import ndimage

from gogkit.bassserre import TreeBall

Point = Hashable

METRICS = ("sup", "euclidean", "l1")


class EmptyTarget(ValueError):
    pass


class NotCoarselyDense(ValueError):
    pass


@dataclass(frozen=True)
class LatticeBox:
    n: int
    r: int
    metric: str = "sup"

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")

    def points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(-self.r, self.r + 1), repeat=self.n))

    def __contains__(self, p) -> bool:
        return len(p) == self.n and all(-self.r <= x <= self.r for x in p)

    def key_matrix(self, a: Sequence, b: Sequence) -> np.ndarray:
        """Monotone exact surrogate of the distance: sup/l1 distance or squared euclidean."""
        pa = np.asarray(a, dtype=np.int64).reshape(len(a), self.n)
        pb = np.asarray(b, dtype=np.int64).reshape(len(b), self.n)
        diff = np.abs(pa[:, None, :] - pb[None, :, :])
        if self.metric == "sup":
            return diff.max(axis=2)
        if self.metric == "l1":
            return diff.sum(axis=2)
        return (diff * diff).sum(axis=2)

    def key_of(self, radius) -> Fraction:
        radius = Fraction(radius)
        return radius * radius if self.metric == "euclidean" else radius

    def radius_of(self, key) -> Fraction:
        if self.metric != "euclidean":
            return Fraction(int(key))
        root = math.isqrt(int(key))
        if root * root == key:
            return Fraction(root)
        return Fraction(math.sqrt(int(key))).limit_denominator(10**6)

    def distance(self, x, y) -> Fraction:
        return self.radius_of(self.key_matrix([x], [y])[0, 0])


@dataclass(eq=False)
class TreeMetric:
    tree: TreeBall
    _dist: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.tree.vertices)}

    def points(self) -> list[int]:
        return self.tree.vertices

    def __contains__(self, p) -> bool:
        return p in self._index

    @property
    def distances(self) -> np.ndarray:
        if self._dist is None:
            adj = self.tree.adjacency()
            verts = self.tree.vertices
            d = np.zeros((len(verts), len(verts)), dtype=np.int64)
            for v in verts:
                seen = {v: 0}
                queue = deque([v])
                while queue:
                    u = queue.popleft()
                    for w in adj[u]:
                        if w not in seen:
                            seen[w] = seen[u] + 1
                            queue.append(w)
                row = d[self._index[v]]
                for w, k in seen.items():
                    row[self._index[w]] = k
            self._dist = d
        return self._dist

    def key_matrix(self, a: Sequence, b: Sequence) -> np.ndarray:
        ia = [self._index[x] for x in a]
        ib = [self._index[x] for x in b]
        return self.distances[np.ix_(ia, ib)]

    def key_of(self, radius) -> Fraction:
        return Fraction(radius)

    def radius_of(self, key) -> Fraction:
        return Fraction(int(key))

    def distance(self, x, y) -> Fraction:
        return Fraction(int(self.distances[self._index[x], self._index[y]]))


class GraphMetric(TreeMetric):
    """Path metric on a connected networkx graph with sortable nodes."""

    def __init__(self, graph):
        self.graph = graph
        self._dist = None
        self._index = {v: i for i, v in enumerate(self.points())}

    def points(self) -> list:
        return sorted(self.graph.nodes)

    @property
    def distances(self) -> np.ndarray:
        if self._dist is None:
            verts = self.points()
            d = np.zeros((len(verts), len(verts)), dtype=np.int64)
            for v, lengths in nx.all_pairs_shortest_path_length(self.graph):
                row = d[self._index[v]]
                for w, k in lengths.items():
                    row[self._index[w]] = k
            self._dist = d
        return self._dist


Host = LatticeBox | TreeMetric


@dataclass(frozen=True)
class PointSet:
    host: Host
    points: tuple

    @classmethod
    def of(cls, host: Host, points: Iterable) -> "PointSet":
        pts = sorted(set(map(_norm, points)))
        bad = [p for p in pts if p not in host]
        if bad:
            raise ValueError(f"points outside host: {bad[:3]}")
        return cls(host, tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _norm(p):
    return tuple(p) if isinstance(p, (list, tuple)) else p


def _min_keys(host: Host, a: Sequence, b: Sequence, chunk: int = 4096) -> np.ndarray:
    """For each point of ``a`` the key-distance to the nearest point of ``b``."""
    out = np.empty(len(a), dtype=np.int64)
    for s in range(0, len(a), chunk):
        out[s : s + chunk] = host.key_matrix(a[s : s + chunk], b).min(axis=1)
    return out


def neighborhood(host: Host, a: Iterable, radius) -> PointSet:
    """``N_R(A)``: host points within ``radius`` of ``a``."""
    a = list(a)
    pts = host.points()
    if not a:
        return PointSet(host, ())
    keep = _min_keys(host, pts, a) <= host.key_of(radius)
    return PointSet(host, tuple(p for p, k in zip(pts, keep) if k))


def containment_radius(a: PointSet, b: PointSet) -> Fraction:
    """Least R with ``a ⊆ N_R(b)``."""
    if not len(b):
        raise EmptyTarget("containment in an empty set")
    if not len(a):
        return Fraction(0)
    return a.host.radius_of(_min_keys(a.host, a.points, b.points).max())


def equiv_radius(a: PointSet, b: PointSet) -> Fraction:
    """Hausdorff distance: least R with each set inside the R-neighbourhood of the other."""
    if not len(a) or not len(b):
        raise EmptyTarget("equivalence with an empty set")
    return max(containment_radius(a, b), containment_radius(b, a))


@dataclass
class ProfileRow:
    radius: Fraction
    size: int
    equiv: Fraction | None
    stable: Fraction | None


def coarse_intersection_profile(a: PointSet, b: PointSet, radii: Iterable, candidate: PointSet) -> list[ProfileRow]:
    """Hausdorff distance from ``N_R(a) ∩ N_R(b)`` to ``candidate`` for each R.

    ``stable`` is the worst value over all listed radii >= R (empty
    intersections are skipped).
    """
    rows = []
    for r in sorted(Fraction(x) for x in radii):
        na = set(neighborhood(a.host, a.points, r).points)
        inter = PointSet(a.host, tuple(p for p in neighborhood(b.host, b.points, r).points if p in na))
        eq = equiv_radius(inter, candidate) if len(inter) else None
        rows.append(ProfileRow(r, len(inter), eq, None))
    worst = None
    for row in reversed(rows):
        if row.equiv is not None:
            worst = row.equiv if worst is None else max(worst, row.equiv)
        row.stable = worst
    return rows


# Quasi-isometries -----------------------------------------------------------


@dataclass(frozen=True)
class SampledMap:
    source: Host
    target: Host
    table: Mapping

    @property
    def domain(self) -> list:
        return sorted(self.table)


@dataclass(frozen=True)
class QiFit:
    K: Fraction
    C: Fraction
    lower: tuple = ()  # (d, g(d)) steps: least image distance among pairs at distance >= d
    upper: tuple = ()  # (d, h(d)) steps: largest image distance among pairs at distance <= d


def _pair_distances(f: SampledMap):
    dom = f.domain
    if len(dom) < 2:
        raise ValueError("need at least two sample points")
    img = [f.table[x] for x in dom]
    ds = f.source.key_matrix(dom, dom)
    dt = f.target.key_matrix(img, img)
    iu = np.triu_indices(len(dom), 1)
    src = [f.source.radius_of(k) for k in ds[iu]]
    tgt = [f.target.radius_of(k) for k in dt[iu]]
    return src, tgt


def qi_excess(src, tgt, K) -> Fraction:
    K = Fraction(K)
    worst = Fraction(0)
    for d, e in zip(src, tgt):
        worst = max(worst, e - K * d, d / K - e)
    return worst


def fit_qi_constants(f: SampledMap, k_grid: Iterable = (1, 2, 3, 4)) -> QiFit:
    """Smallest additive constant over the multiplicative grid, ties to the smaller K."""
    src, tgt = _pair_distances(f)
    best = None
    for K in sorted(Fraction(k) for k in k_grid):
        if K < 1:
            raise ValueError("K must be at least 1")
        c = qi_excess(src, tgt, K)
        if best is None or c < best[1]:
            best = (K, c)
    by_d: dict[Fraction, list[Fraction]] = {}
    for d, e in zip(src, tgt):
        by_d.setdefault(d, []).append(e)
    ds = sorted(by_d)
    upper, lower = [], []
    running = None
    for d in ds:
        m = max(by_d[d])
        running = m if running is None else max(running, m)
        upper.append((d, running))
    running = None
    for d in reversed(ds):
        m = min(by_d[d])
        running = m if running is None else min(running, m)
        lower.append((d, running))
    return QiFit(best[0], best[1], tuple(reversed(lower)), tuple(upper))


def coarse_inverse(f: SampledMap, K, C, target_points: Iterable | None = None) -> tuple[SampledMap, Fraction]:
    """Nearest-preimage inverse of ``f`` on ``target_points`` (default: the whole target host)."""
    dom = f.domain
    ys = sorted(set(map(_norm, target_points))) if target_points is not None else f.target.points()
    img = [f.table[x] for x in dom]
    keys = f.target.key_matrix(ys, img)
    nearest = keys.argmin(axis=1)  # first minimum = smallest domain point
    density = f.target.radius_of(keys.min(axis=1).max())
    if density > Fraction(C):
        raise NotCoarselyDense(f"image is only {density}-dense, need {C}")
    g = SampledMap(f.target, f.source, {y: dom[i] for y, i in zip(ys, nearest)})
    c1 = max((f.source.distance(x, g.table[f.table[x]]) for x in dom if f.table[x] in g.table), default=Fraction(0))
    c2 = max(f.target.distance(y, f.table[g.table[y]]) for y in ys)
    return g, max(c1, c2)


# Quasi-actions --------------------------------------------------------------


@dataclass
class QuasiActionSample:
    """Finitely many group elements acting by maps on sample points of a host.

    ``compose[(g, h)]`` names the element g·h when it is in the sample.
    Maps may be partial; checks only use points where they are defined.
    """

    host: Host
    elements: list
    compose: dict
    maps: dict

    def act(self, g, x):
        return self.maps[g].get(x)


@dataclass
class QuasiActionReport:
    passed: bool
    worst_qi_excess: Fraction
    worst_qi_element: object
    worst_composition: Fraction
    worst_composition_at: tuple | None
    compositions_checked: int
    cobounded_radius: Fraction
    properness: dict


def check_quasi_action(qa: QuasiActionSample, K, C, radii: Iterable = (0, 1, 2), base=None) -> QuasiActionReport:
    K, C = Fraction(K), Fraction(C)
    host = qa.host
    worst_qi, worst_el = Fraction(0), None
    for g in qa.elements:
        f = SampledMap(host, host, qa.maps[g])
        if len(f.table) < 2:
            continue
        src, tgt = _pair_distances(f)
        ex = qi_excess(src, tgt, K) - C
        if worst_el is None or ex > worst_qi:
            worst_qi, worst_el = ex, g
    worst_comp, where, checked = Fraction(0), None, 0
    for (g, h), gh in sorted(qa.compose.items(), key=repr):
        for x, hx in qa.maps[h].items():
            ghx = qa.act(g, hx)
            direct = qa.act(gh, x)
            if ghx is None or direct is None:
                continue
            checked += 1
            d = host.distance(ghx, direct)
            if d > worst_comp:
                worst_comp, where = d, (g, h, x)
    pts = sorted(set().union(*(set(m) for m in qa.maps.values())))
    if base is None:
        base = pts[0]
    orbit = [qa.act(g, base) for g in qa.elements if qa.act(g, base) is not None]
    cob = containment_radius(PointSet(host, tuple(pts)), PointSet(host, tuple(sorted(set(orbit)))))
    prop = {}
    for r in radii:
        prop[Fraction(r)] = _properness(qa, pts, r)
    passed = worst_qi <= 0 and worst_comp <= C
    return QuasiActionReport(passed, worst_qi, worst_el, worst_comp, where, checked, cob, prop)


def _properness(qa: QuasiActionSample, pts, r) -> int:
    """max over (x, y) of #{g : g·N(x, r) meets N(y, r)}."""
    host = qa.host
    counts: dict = {}
    balls = {x: neighborhood(host, [x], r).points for x in pts}
    for g in qa.elements:
        m = qa.maps[g]
        for x in pts:
            image = {m[p] for p in balls[x] if p in m}
            if not image:
                continue
            for y in neighborhood(host, image, r).points:
                counts[(x, y)] = counts.get((x, y), 0) + 1
    return max(counts.values(), default=0)


def stabilizer_sample(qa: QuasiActionSample, h: PointSet, a) -> tuple[list, Fraction | None]:
    """Elements moving ``h`` within Hausdorff distance ``a`` of itself."""
    if not len(h):
        raise EmptyTarget("empty subset")
    out = []
    for g in qa.elements:
        m = qa.maps[g]
        if any(p not in m for p in h.points):
            continue
        moved = PointSet(qa.host, tuple(sorted(set(m[p] for p in h.points))))
        if equiv_radius(moved, h) <= Fraction(a):
            out.append(g)
    if not out:
        return out, None
    base = h.points[0]
    orbit = PointSet(qa.host, tuple(sorted({qa.maps[g][base] for g in out})))
    return out, containment_radius(h, orbit)


# Deep components ------------------------------------------------------------


@dataclass
class DeepReport:
    count: int
    deep_sizes: list[int]
    component_sizes: list[int]


_CDT = {"sup": "chessboard", "l1": "taxicab"}


def _distance_to(mask: np.ndarray, metric: str) -> np.ndarray:
    """Distance from every cell to the nearest ``True`` cell of ``mask`` (outside: never)."""
    if not mask.any():
        return np.full(mask.shape, np.inf)
    if metric == "euclidean":
        return ndimage.distance_transform_edt(~mask)
    return ndimage.distance_transform_cdt(~mask, metric=_CDT[metric]).astype(float)


def deep_component_count(host: Host, s: PointSet, a, depth) -> DeepReport:
    """Deep components of ``host - N_a(s)`` under unit adjacency.

    A component is deep when it contains a point whose ``depth``-ball lies
    inside it (and inside the host).
    """
    if isinstance(host, TreeMetric):
        return _deep_tree(host, s, a, depth)
    shape = (2 * host.r + 1,) * host.n
    smask = np.zeros(shape, dtype=bool)
    for p in s.points:
        smask[tuple(x + host.r for x in p)] = True
    free = _distance_to(smask, host.metric) > float(a)
    # outside the box is not free: pad with a blocked border
    padded = np.pad(free, 1, constant_values=False)
    depth_ok = _distance_to(~padded, host.metric) > float(depth)
    depth_ok = depth_ok[(slice(1, -1),) * host.n]
    labels, k = ndimage.label(free, structure=ndimage.generate_binary_structure(host.n, 1))
    sizes = np.bincount(labels.ravel(), minlength=k + 1)[1:]
    deep = sorted(set(np.unique(labels[depth_ok & free]).tolist()) - {0})
    return DeepReport(len(deep), sorted((int(sizes[i - 1]) for i in deep), reverse=True), sorted(map(int, sizes), reverse=True))


def _deep_tree(host: TreeMetric, s: PointSet, a, depth) -> DeepReport:
    pts = host.points()
    near = set(neighborhood(host, s.points, a).points) if len(s) else set()
    free = [p for p in pts if p not in near]
    adj = host.tree.adjacency()
    comp: dict = {}
    comps = []
    for p in free:
        if p in comp:
            continue
        comp[p] = len(comps)
        members = [p]
        stack = [p]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in near and w not in comp:
                    comp[w] = comp[p]
                    members.append(w)
                    stack.append(w)
        comps.append(members)
    trunc = sorted(host.tree.truncated)
    deep = set()
    for i, members in enumerate(comps):
        for x in members:
            ball = neighborhood(host, [x], depth).points
            if all(comp.get(y) == i for y in ball) and (
                not trunc or _min_keys(host, [x], trunc)[0] >= int(depth)
            ):
                deep.add(i)
                break
    sizes = [len(c) for c in comps]
    return DeepReport(len(deep), sorted((sizes[i] for i in deep), reverse=True), sorted(sizes, reverse=True))


# Rigidity checks on samples of trees of spaces --------------------------------


@dataclass
class TreeOfSpacesSample:
    host: Host
    vertex_spaces: dict  # tree vertex -> PointSet
    edge_spaces: dict = field(default_factory=dict)  # tree edge -> PointSet


def vertex_rigidity_check(x: TreeOfSpacesSample, maps: Sequence[Mapping], mode: str = "WEAK") -> list[dict]:
    """For each map and each vertex space, the best matching target vertex space.

    ``WEAK`` ranks targets by containment radius of the image, ``FULL`` by
    Hausdorff distance, ``UNIQUE`` is ``WEAK`` plus the gap to the runner-up,
    and ``STRONG-EDGE`` reports the least Hausdorff distance between two
    distinct edge spaces.
    """
    mode = mode.upper()
    if mode == "STRONG-EDGE":
        names = sorted(x.edge_spaces)
        best = None
        for e1, e2 in itertools.combinations(names, 2):
            d = equiv_radius(x.edge_spaces[e1], x.edge_spaces[e2])
            if best is None or d < best[0]:
                best = (d, e1, e2)
        return [{"min_edge_separation": best[0] if best else None, "pair": best[1:] if best else None}]
    if mode not in ("WEAK", "FULL", "UNIQUE"):
        raise ValueError(f"unknown mode {mode}")
    measure = equiv_radius if mode == "FULL" else containment_radius
    reports = []
    for f in maps:
        rows = {}
        for v, space in sorted(x.vertex_spaces.items()):
            image = PointSet(x.host, tuple(sorted({f[p] for p in space.points})))
            scored = sorted((measure(image, w_space), w) for w, w_space in x.vertex_spaces.items())
            row = {"target": scored[0][1], "radius": scored[0][0]}
            if mode == "UNIQUE":
                row["gap"] = scored[1][0] - scored[0][0] if len(scored) > 1 else None
            rows[v] = row
        reports.append(rows)
    return reports
