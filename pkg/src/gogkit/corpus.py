"""Builders for small graphs of groups used as fixtures."""

from __future__ import annotations

from gogkit.gog import (
    ABELIAN,
    ABSTRACT,
    INF,
    DeclaredIndex,
    Edge,
    EdgeEnd,
    GraphOfGroups,
    GroupSpec,
    MatrixInjection,
)


def abstract(vertices: dict[str, int], edges: list[tuple]) -> GraphOfGroups:
    """``edges``: ``(id, v, w, dim, idx_v, idx_w)`` tuples."""
    vs = {v: GroupSpec(d) for v, d in vertices.items()}
    es = {
        eid: Edge(GroupSpec(d), (EdgeEnd(v, DeclaredIndex(i)), EdgeEnd(w, DeclaredIndex(j))))
        for eid, v, w, d, i, j in edges
    }
    return GraphOfGroups(ABSTRACT, vs, es)


def abelian(vertices: dict[str, int], edges: list[tuple]) -> GraphOfGroups:
    """``edges``: ``(id, v, w, rank, rows_v, rows_w)`` tuples; rows are n_v x rank matrices."""
    vs = {v: GroupSpec(d, abelian=True) for v, d in vertices.items()}
    es = {}
    for eid, v, w, r, m1, m2 in edges:
        es[eid] = Edge(
            GroupSpec(r, abelian=True),
            (
                EdgeEnd(v, MatrixInjection.from_rows(m1, r)),
                EdgeEnd(w, MatrixInjection.from_rows(m2, r)),
            ),
        )
    return GraphOfGroups(ABELIAN, vs, es)


def point(dim: int = 0) -> GraphOfGroups:
    return abstract({"v": dim}, [])


def amalgam(p: int, q: int, dim: int = 0) -> GraphOfGroups:
    """Z/p * Z/q when ``dim`` is 0: two vertices joined by an edge with indices (p, q)."""
    return abstract({"a": dim, "b": dim}, [("e", "a", "b", dim, p, q)])


def circle(n: int, dim: int = 1, index: int = 1) -> GraphOfGroups:
    """A cycle of ``n`` vertices (a loop when n = 1) with all indices equal."""
    vs = {f"v{i}": dim for i in range(n)}
    es = [(f"e{i}", f"v{i}", f"v{(i + 1) % n}", dim, index, index) for i in range(n)]
    return abstract(vs, es)


def arc(n: int, dim: int = 1) -> GraphOfGroups:
    """A path of ``n`` vertices, interior indices 1 and index-2 ends at both extremes.

    The two extreme vertices are closed off by hanging the index-2 ends on
    the edges leading into the arc; for n = 1 this is a single vertex with
    a loop-free dihedral pattern modelled as an edge to itself being
    impossible, so n must be at least 2.
    """
    if n < 2:
        raise ValueError("arc needs at least two vertices")
    vs = {f"v{i}": dim for i in range(n)}
    es = []
    for i in range(n - 1):
        left = 2 if i == 0 else 1
        right = 2 if i == n - 2 else 1
        es.append((f"e{i}", f"v{i}", f"v{i + 1}", dim, left, right))
    return abstract(vs, es)


def mapping_torus_circle() -> GraphOfGroups:
    """Z^2 as a circle of one Z vertex with an isomorphic loop (index 1 at both ends)."""
    return abstract({"v": 1}, [("t", "v", "v", 1, 1, 1)])


def baumslag_solitar(p: int, q: int) -> GraphOfGroups:
    return abstract({"v": 1}, [("t", "v", "v", 1, p, q)])


def trichotomy_suite() -> dict[str, tuple[GraphOfGroups, str]]:
    """Named graphs with their expected classification."""
    suite = {
        "point": (point(), "BOUNDED"),
        "point_dim2": (point(2), "BOUNDED"),
        "single_edge_1_1": (abstract({"a": 1, "b": 1}, [("e", "a", "b", 1, 1, 1)]), "BOUNDED"),
        "single_edge_1_3": (abstract({"a": 0, "b": 0}, [("e", "a", "b", 0, 1, 3)]), "BOUNDED"),
        "star_of_surjections": (
            abstract({"c": 1, "x": 1, "y": 1}, [("e", "x", "c", 1, 1, 1), ("f", "y", "c", 1, 1, 2)]),
            "BOUNDED",
        ),
        "mapping_torus_loop": (mapping_torus_circle(), "LINELIKE"),
        "circle_2": (circle(2), "LINELIKE"),
        "circle_4": (circle(4), "LINELIKE"),
        "arc_2": (arc(2), "LINELIKE"),
        "arc_3": (arc(3), "LINELIKE"),
        "arc_5": (arc(5), "LINELIKE"),
        "z2_z2": (amalgam(2, 2), "LINELIKE"),
        "z3_z3": (amalgam(3, 3), "BUSHY"),
        "z5_z5": (amalgam(5, 5), "BUSHY"),
        "z2_z3": (amalgam(2, 3), "BUSHY"),
        "bs_1_2": (baumslag_solitar(1, 2), "BUSHY"),
        "bs_2_3": (baumslag_solitar(2, 3), "BUSHY"),
        "circle_index_2": (circle(3, index=2), "BUSHY"),
        "theta": (
            abstract({"a": 1, "b": 1}, [("e", "a", "b", 1, 1, 1), ("f", "a", "b", 1, 1, 1), ("g", "a", "b", 1, 1, 1)]),
            "BUSHY",
        ),
        "circle_with_hair": (
            abstract({"v": 1, "w": 1}, [("t", "v", "v", 1, 1, 1), ("h", "v", "w", 1, 1, 1)]),
            "LINELIKE",
        ),
        "amalgam_with_tail": (
            abstract({"a": 0, "b": 0, "c": 0}, [("e", "a", "b", 0, 3, 3), ("f", "b", "c", 0, 2, 1)]),
            "BUSHY",
        ),
    }
    return suite


# Abelian fixtures ---------------------------------------------------------

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def _cols(*vectors) -> list[list[int]]:
    """Matrix whose columns are the given vectors."""
    return [list(row) for row in zip(*vectors)]


def z3_with_planes(planes: list[tuple[tuple[int, ...], tuple[int, ...]]]) -> GraphOfGroups:
    """A Z^3 vertex with one loop per plane; both ends of loop i embed as plane i.

    Loops give both ends at the same vertex, so the pattern inside the vertex
    space is exactly the given planes (each twice), with no other vertices.
    """
    edges = []
    for i, (u, w) in enumerate(planes):
        m = _cols(u, w)
        edges.append((f"p{i}", "v", "v", 2, m, m))
    return abelian({"v": 3}, edges)


def z3_xy_yz_xz() -> GraphOfGroups:
    return z3_with_planes([(E1, E2), (E2, E3), (E1, E3)])


def z3_single_plane() -> GraphOfGroups:
    """Z^3 vertex whose only incident image is one Z^2 plane: condition (*) fails."""
    return abelian({"v": 3, "w": 2}, [("p", "v", "w", 2, _cols(E1, E2), [[1, 0], [0, 1]]), ("q", "w", "w", 2, [[1, 0], [0, 1]], [[1, 0], [0, 2]])])


# Triangulated 2-complexes ---------------------------------------------------


def single_triangle():
    from gogkit.tracks import TriComplex

    return TriComplex.build(["a", "b", "c"], [("t", ("a", "b", "c"))])


def hexagon_disk():
    """Six triangles around a central vertex c with rim r1..r6."""
    from gogkit.tracks import TriComplex

    rim = [f"r{i}" for i in range(1, 7)]
    tris = [(f"t{i + 1}", ("c", rim[i], rim[(i + 1) % 6])) for i in range(6)]
    return TriComplex.build(["c", *rim], tris)


def annulus():
    """Inner triangle i0 i1 i2 and outer triangle o0 o1 o2 joined by a band of six triangles."""
    from gogkit.tracks import TriComplex

    tris = [
        ("i0", "i1", "o0"), ("i1", "o1", "o0"), ("i1", "i2", "o1"),
        ("i2", "o2", "o1"), ("i2", "i0", "o2"), ("i0", "o0", "o2"),
    ]
    return TriComplex.build(["i0", "i1", "i2", "o0", "o1", "o2"], tris)


def strip():
    """Four triangles in a row between a bottom path b0 b1 b2 and a top path t0 t1 t2."""
    from gogkit.tracks import TriComplex

    tris = [("b0", "b1", "t0"), ("b1", "t1", "t0"), ("b1", "b2", "t1"), ("b2", "t2", "t1")]
    return TriComplex.build(["b0", "b1", "b2", "t0", "t1", "t2"], tris)


def wedge_of_disks():
    """Two two-triangle squares sharing the single vertex x."""
    from gogkit.tracks import TriComplex

    tris = [("x", "a1", "a2"), ("x", "a2", "a3"), ("x", "b1", "b2"), ("x", "b2", "b3")]
    return TriComplex.build(["x", "a1", "a2", "a3", "b1", "b2", "b3"], tris)


def random_disk(seed: int, triangles: int):
    """A triangulated disk grown by gluing triangles onto its boundary.

    Each step either hangs a new vertex off a boundary edge or closes a
    boundary corner whose outer vertices are not yet joined; both moves
    keep the complex a disk.
    """
    import random

    from gogkit.tracks import TriComplex

    rng = random.Random(seed)
    verts = ["v0", "v1", "v2"]
    tris = [("v0", "v1", "v2")]
    boundary = ["v0", "v1", "v2"]  # cyclic
    edges = {frozenset(p) for p in (("v0", "v1"), ("v1", "v2"), ("v0", "v2"))}
    while len(tris) < triangles:
        k = len(boundary)
        i = rng.randrange(k)
        u, w = boundary[i], boundary[(i + 1) % k]
        x = boundary[(i + 2) % k]
        if k > 3 and rng.random() < 0.4 and frozenset((u, x)) not in edges:
            tris.append((u, w, x))
            edges.add(frozenset((u, x)))
            boundary.pop((i + 1) % k)
            continue
        v = f"v{len(verts)}"
        verts.append(v)
        tris.append((u, w, v))
        edges |= {frozenset((u, v)), frozenset((w, v))}
        boundary.insert(i + 1, v)
    return TriComplex.build(verts, tris)
