"""Finite balls in Bass-Serre trees, and the bounded / line-like / bushy trichotomy."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from gogkit import gog
from gogkit.gog import INF, GraphOfGroups

DEFAULT_BUDGET = 10**6


class InfiniteIndex(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Unclassifiable(ValueError):
    pass


class Trichotomy(str, enum.Enum):
    BOUNDED = "BOUNDED"
    LINELIKE = "LINELIKE"
    BUSHY = "BUSHY"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class TreeBall:
    """A rooted finite tree.

    ``over`` maps a vertex to the graph-of-groups vertex it lies over, and
    ``edge_over`` maps an edge id to ``(gamma edge, end number at the child)``.
    Both are empty for standalone trees.  ``truncated`` holds the vertices at
    the cut-off radius that would have further children in the full tree.
    """

    root: int
    depth: dict[int, int]
    edges: dict[int, tuple[int, int]]
    over: dict[int, str] = field(default_factory=dict)
    edge_over: dict[int, tuple[str, int]] = field(default_factory=dict)
    truncated: set[int] = field(default_factory=set)
    radius: int | None = None

    @property
    def vertices(self) -> list[int]:
        return sorted(self.depth)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.depth}
        for a, b in self.edges.values():
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def boundary_sizes(self) -> list[int]:
        """Number of vertices at each depth that have children in the full tree."""
        top = max(self.depth.values(), default=0)
        sizes = [0] * (top + 1)
        kids = {a for a, b in self.edges.values() if self.depth[b] > self.depth[a]}
        for v, d in self.depth.items():
            if v in kids or v in self.truncated:
                sizes[d] += 1
        return sizes


def _child_plan(g: GraphOfGroups, v: str, entry: tuple[str, int] | None) -> list[tuple[str, int, int]]:
    """(gamma edge, end at parent, copies) for a tree vertex over ``v`` entered via ``entry``."""
    plan = []
    for eid, k in g.end_refs(v):
        idx = g.index(eid, k)
        if idx == INF:
            raise InfiniteIndex(f"edge {eid} end {k} has infinite index")
        copies = idx - 1 if entry == (eid, k) else idx
        if copies:
            plan.append((eid, k, int(copies)))
    return plan


def expand_ball(g: GraphOfGroups, base: str, radius: int, budget: int = DEFAULT_BUDGET) -> TreeBall:
    """Breadth-first expansion of the Bass-Serre tree of ``g`` around a lift of ``base``.

    A child reached across the end ``(e, k)`` of its parent lies over the
    opposite end ``(e, 3 - k)``, which is also the end it was entered through.
    Vertex and edge ids are assigned in BFS order, children ordered by
    (gamma edge id, end number, copy number).
    """
    if base not in g.vertices:
        raise KeyError(base)
    ball = TreeBall(root=0, depth={0: 0}, edges={}, over={0: base}, radius=radius)
    entry: dict[int, tuple[str, int] | None] = {0: None}
    queue = deque([0])
    next_id = 1
    while queue:
        t = queue.popleft()
        plan = _child_plan(g, ball.over[t], entry[t])
        if ball.depth[t] == radius:
            if plan:
                ball.truncated.add(t)
            continue
        for eid, k, copies in plan:
            other = g.edges[eid].ends[2 - k].vertex
            for _ in range(copies):
                if next_id >= budget:
                    raise BudgetExceeded(f"more than {budget} tree vertices")
                c = next_id
                next_id += 1
                ball.depth[c] = ball.depth[t] + 1
                ball.over[c] = other
                entry[c] = (eid, 3 - k)
                ball.edges[c - 1] = (t, c)
                ball.edge_over[c - 1] = (eid, 3 - k)
                queue.append(c)
    return ball


def local_count_violations(g: GraphOfGroups, ball: TreeBall) -> list[str]:
    """Check that every non-truncated vertex has the right number of edges over each end."""
    seen: dict[int, dict[tuple[str, int], int]] = {v: {} for v in ball.depth}
    entered: dict[int, tuple[str, int]] = {}
    for eid_t, (a, b) in ball.edges.items():
        ge, kb = ball.edge_over[eid_t]
        ka = 3 - kb
        seen[a][(ge, ka)] = seen[a].get((ge, ka), 0) + 1
        seen[b][(ge, kb)] = seen[b].get((ge, kb), 0) + 1
        entered[b] = (ge, kb)
    problems = []
    for v in ball.vertices:
        if v in ball.truncated:
            continue
        for eid, k in g.end_refs(ball.over[v]):
            want = g.index(eid, k)
            got = seen[v].get((eid, k), 0)
            if got != want:
                problems.append(f"vertex {v}: {got} edges over {eid}:{k}, expected {want}")
    return problems


def classify_trichotomy(g: GraphOfGroups) -> Trichotomy:
    """Bounded / line-like / bushy, read off the reduced graph's valences."""
    red, trace = gog.reduce(g)
    for step in trace:
        if step.kind == "NON-COLLAPSIBLE" and not red.edges[step.edge].is_loop:
            raise Unclassifiable(f"non-loop obstruction at {step.vertex}")
    if len(red.vertices) == 1 and not red.edges:
        return Trichotomy.BOUNDED
    valences = {v: gog.tree_valence(red, v) for v in red.vertices}
    if any(x >= 3 for x in valences.values()):
        return Trichotomy.BUSHY
    if all(x == 2 for x in valences.values()):
        return Trichotomy.LINELIKE
    raise Unclassifiable(f"reduced graph has valences {valences}")


def oracle_classify_by_expansion(g: GraphOfGroups, radius: int, base: str | None = None) -> Trichotomy:
    """Classify from the shape of a single expanded ball (independent of reduction)."""
    if base is None:
        base = min(g.vertices)
    ball = expand_ball(g, base, radius)
    if not ball.truncated:
        return Trichotomy.BOUNDED
    sizes = ball.boundary_sizes()
    if len(sizes) > 2 and all(s == 2 for s in sizes[2:]):
        return Trichotomy.LINELIKE
    adj = ball.adjacency()
    branching = any(len(adj[v]) >= 3 for v in ball.vertices if v not in ball.truncated)
    monotone = all(a <= b for a, b in zip(sizes[1:], sizes[2:]))
    if branching and monotone and sizes[-1] >= 3:
        return Trichotomy.BUSHY
    return Trichotomy.INCONCLUSIVE


def amalgam_ball_size(p: int, depth: int) -> int:
    """Vertex count of the radius-``depth`` ball in the (p, p) amalgam tree."""
    return 1 + p * ((p - 1) ** depth - 1) // (p - 2)
