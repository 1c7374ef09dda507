"""Dimension filtration, rafts, and the hypothesis checkers built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

from gogkit import crossing, gog, linalg
from gogkit.bassserre import Trichotomy, classify_trichotomy
from gogkit.gog import ABELIAN, GraphOfGroups

POINT, BOUNDED, LINE, BUSHY = "POINT", "BOUNDED", "LINE", "BUSHY"


class MissingCrossingData(ValueError):
    pass


@dataclass(frozen=True)
class Filtration:
    top: int
    levels: dict  # i -> (frozenset of vertices, frozenset of edges) of dimension >= i


@dataclass(frozen=True)
class Raft:
    dim: int
    vertices: frozenset
    edges: frozenset
    kind: str | None = None


def dimension_filtration(g: GraphOfGroups) -> Filtration:
    top = max((s.dim for s in g.vertices.values()), default=0)
    levels = {}
    for i in range(top, -1, -1):
        vs = frozenset(v for v, s in g.vertices.items() if s.dim >= i)
        es = frozenset(e for e, x in g.edges.items() if x.group.dim >= i)
        levels[i] = (vs, es)
    return Filtration(top, levels)


def _is_raft(g: GraphOfGroups, n: int, vertices, edges) -> bool:
    for eid, e in g.edges.items():
        if eid in edges:
            continue
        if any(end.vertex in vertices for end in e.ends) and e.group.dim >= n:
            return False
    return True


def find_rafts(g: GraphOfGroups) -> tuple[list[Raft], list[str]]:
    """All rafts (classified) and the vertices lying on none of them."""
    rafts = []
    for n in sorted({s.dim for s in g.vertices.values()}, reverse=True):
        vs = {v for v, s in g.vertices.items() if s.dim == n}
        es = {
            eid for eid, e in g.edges.items()
            if e.group.dim == n and all(end.vertex in vs for end in e.ends)
        }
        seen: set = set()
        for start in sorted(vs):
            if start in seen:
                continue
            comp_v, comp_e, stack = {start}, set(), [start]
            while stack:
                u = stack.pop()
                for eid in es:
                    ends = [end.vertex for end in g.edges[eid].ends]
                    if u in ends:
                        comp_e.add(eid)
                        for w in ends:
                            if w not in comp_v:
                                comp_v.add(w)
                                stack.append(w)
            seen |= comp_v
            if _is_raft(g, n, comp_v, comp_e):
                raft = Raft(n, frozenset(comp_v), frozenset(comp_e))
                rafts.append(Raft(n, raft.vertices, raft.edges, classify_raft(g, raft)))
    on = set().union(*(r.vertices for r in rafts)) if rafts else set()
    return rafts, sorted(set(g.vertices) - on)


def classify_raft(g: GraphOfGroups, raft: Raft) -> str:
    if len(raft.vertices) == 1 and not raft.edges:
        return POINT
    verdict = classify_trichotomy(g.subgraph(raft.vertices, raft.edges))
    return {Trichotomy.BOUNDED: BOUNDED, Trichotomy.LINELIKE: LINE, Trichotomy.BUSHY: BUSHY}[verdict]


@dataclass
class Report:
    passed: bool
    failures: list[tuple[str, str]] = field(default_factory=list)  # (code, where)
    details: dict = field(default_factory=dict)


def check_star_condition(g: GraphOfGroups, integral: bool = False) -> Report:
    """Incident images have rank < n, and span Z^n rationally whenever one has rank n-1.

    With ``integral`` the span must be all of Z^n rather than a finite-index sublattice.
    """
    if g.regime != ABELIAN:
        raise crossing.AbstractRegime("condition (*) needs the abelian regime")
    rep = Report(True)
    for v in sorted(g.vertices):
        n = g.vertices[v].rank
        cols, ranks = [], []
        for eid, k in g.end_refs(v):
            c = g.end(eid, k).injection.columns
            cols.extend(c)
            ranks.append(linalg.rank(c) if c else 0)
        span = linalg.rank(cols) if cols else 0
        rep.details[v] = {"rank": n, "image_ranks": ranks, "span": span}
        if any(x >= n for x in ranks):
            rep.failures.append(("STAR-A", v))
        if n - 1 in ranks:
            if integral:
                ok = linalg.lattice_index(cols, n) == 1
            else:
                ok = span == n
            if not ok:
                rep.failures.append(("STAR-B", v))
    rep.passed = not rep.failures
    return rep


def check_raft_hypotheses(g: GraphOfGroups, crossing_summaries: dict | None = None) -> Report:
    """Reducedness, no line rafts, and connected-or-empty crossing graphs at point rafts.

    In the abstract regime the crossing verdict of each point raft vertex
    must be supplied in ``crossing_summaries`` (vertex id -> verdict string).
    """
    rep = Report(True)
    reduced, counts = gog.is_reduced(g)
    if not reduced:
        rep.failures.append(("NOT-REDUCED", ",".join(v for v in sorted(counts) if counts[v] == 1)))
    rafts, off = find_rafts(g)
    rep.details["rafts"] = [(r.dim, sorted(r.vertices), sorted(r.edges), r.kind) for r in rafts]
    rep.details["off_raft"] = off
    for r in rafts:
        where = ",".join(sorted(r.vertices))
        if r.kind == LINE:
            rep.failures.append(("NO-LINE-RAFTS", where))
        elif r.kind == BOUNDED and not reduced:
            rep.failures.append(("BOUNDED-RAFT", where))
        elif r.kind == POINT:
            (v,) = r.vertices
            if g.regime == ABELIAN:
                verdict = crossing.crossing_graph_summary(g, v).verdict
            else:
                if not crossing_summaries or v not in crossing_summaries:
                    raise MissingCrossingData(f"no crossing summary for point raft {v}")
                verdict = crossing_summaries[v]
            rep.details.setdefault("crossing", {})[v] = verdict
            if verdict not in ("CONNECTED", "EMPTY"):
                rep.failures.append(("CROSSING-DISCONNECTED", v))
    rep.passed = not rep.failures
    return rep
