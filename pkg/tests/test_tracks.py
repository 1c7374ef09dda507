import itertools

import networkx as nx
import pytest

from gogkit import corpus, tracks
from gogkit.tracks import Essentiality, NormalPattern
from oracles import h1_by_sympy, track_components_geometric

FIXTURES = {
    "single_triangle": corpus.single_triangle,
    "hexagon_disk": corpus.hexagon_disk,
    "annulus": corpus.annulus,
    "strip": corpus.strip,
    "wedge_of_disks": corpus.wedge_of_disks,
}


def encircling(c):
    return NormalPattern.of(c, {tid: (1, 0, 0) for tid, _ in c.triangles})


def transverse_arc(a):
    """Inner boundary to outer boundary across the annulus band."""
    return NormalPattern.of(a, {"t0": (0, 1, 0), "t1": (0, 0, 1)})


def test_validate_examples():
    c = corpus.single_triangle()
    p = NormalPattern.of(c, {"t": (1, 0, 0)})
    assert tracks.validate_pattern(c, p) == []
    assert tracks.edge_weights(c, p) == {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 0}
    assert tracks.validate_pattern(c, NormalPattern.of(c, {"t": (-1, 0, 0)}))
    s = corpus.strip()
    bad = NormalPattern.of(s, {"t0": (0, 1, 0)})
    assert any("b1-t0" in v for v in tracks.validate_pattern(s, bad))


def test_invalid_pattern_rejected():
    s = corpus.strip()
    with pytest.raises(tracks.InvalidPattern):
        tracks.pattern_components(s, NormalPattern.of(s, {"t0": (0, 1, 0)}))


def test_invalid_complex():
    with pytest.raises(tracks.InvalidComplex):
        tracks.TriComplex.build(["a", "b", "c", "d"], [("a", "b", "c")])
    with pytest.raises(tracks.InvalidComplex):
        tracks.TriComplex.build(["a", "b"], [("a", "a", "b")])


def test_component_examples():
    c = corpus.single_triangle()
    assert len(tracks.pattern_components(c, NormalPattern.of(c, {"t": (1, 0, 0)}))) == 1
    assert len(tracks.pattern_components(c, NormalPattern.of(c, {"t": (2, 0, 0)}))) == 2
    h = corpus.hexagon_disk()
    assert len(tracks.pattern_components(h, encircling(h))) == 1


def test_region_examples():
    c = corpus.single_triangle()
    regions = tracks.complement_components(c, NormalPattern.of(c, {"t": (1, 0, 0)}))
    assert sorted(map(sorted, regions.vertex_sets)) == [["a"], ["b", "c"]]
    assert tracks.complement_components(c, NormalPattern.zero(c)).count == 1
    h = corpus.hexagon_disk()
    regions = tracks.complement_components(h, encircling(h))
    assert sorted(map(sorted, regions.vertex_sets)) == [["c"], [f"r{i}" for i in range(1, 7)]]


def test_essential_examples():
    h = corpus.hexagon_disk()
    assert tracks.is_essential(h, encircling(h), 1) is Essentiality.ESSENTIAL
    assert tracks.is_essential(h, encircling(h), 2) is Essentiality.INESSENTIAL
    a = corpus.annulus()
    assert tracks.is_essential(a, transverse_arc(a), 1) is Essentiality.NON_SEPARATING


def test_annulus_circle_separates():
    a = corpus.annulus()
    # the circle around the inner boundary cuts the band in two
    circle = [t for t in tracks.enumerate_tracks(a, 6) if tracks.complement_components(a, t).vertex_sets
              and sorted(map(sorted, tracks.complement_components(a, t).vertex_sets)) == [["i0", "i1", "i2"], ["o0", "o1", "o2"]]]
    assert circle


def test_dual_graph_examples():
    h = corpus.hexagon_disk()
    d = tracks.dual_graph(h, encircling(h))
    assert d.graph.number_of_nodes() == 2 and d.graph.number_of_edges() == 1 and d.is_tree
    d0 = tracks.dual_graph(h, NormalPattern.zero(h))
    assert d0.graph.number_of_nodes() == 1 and d0.graph.number_of_edges() == 0
    s = corpus.strip()
    across = NormalPattern.of(s, {"t1": (0, 1, 0), "t2": (1, 0, 0)})
    assert tracks.validate_pattern(s, across) == []
    d2 = tracks.dual_graph(s, across + across)
    assert nx.is_isomorphic(nx.Graph(d2.graph), nx.path_graph(3)) and not d2.flagged


@pytest.mark.parametrize("name,want", [("single_triangle", 0), ("hexagon_disk", 0), ("annulus", 1), ("strip", 0), ("wedge_of_disks", 0)])
def test_h1(name, want):
    c = FIXTURES[name]()
    assert tracks.h1_rank(c) == want == h1_by_sympy(c)


@pytest.mark.parametrize("seed", range(5))
def test_random_disk_h1_matches_sympy(seed):
    c = corpus.random_disk(seed, 25)
    assert tracks.h1_rank(c) == 0 == h1_by_sympy(c)


def all_patterns(c, cap):
    return [p for p in tracks.enumerate_patterns(c, cap)]


def brute_patterns(c, cap):
    """Every corner-coordinate vector with entries <= cap that matches and fits the weight cap."""
    out = set()
    n = len(c.triangles)
    for flat in itertools.product(range(cap + 1), repeat=3 * n):
        p = NormalPattern(tuple(tuple(flat[3 * i:3 * i + 3]) for i in range(n)), ())
        if not tracks.validate_pattern(c, p) and tracks.total_weight(c, p) <= cap:
            out.add(p)
    return out


def two_triangles():
    return tracks.TriComplex.build(["a", "b", "c", "d"], [("a", "b", "c"), ("b", "d", "c")])


@pytest.mark.parametrize("make,cap", [(corpus.single_triangle, 4), (two_triangles, 3)])
def test_enumeration_matches_brute_force(make, cap):
    c = make()
    assert set(tracks.enumerate_patterns(c, cap)) == brute_patterns(c, cap)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_components_sum_and_geometric_count(name):
    c = FIXTURES[name]()
    for p in all_patterns(c, 6):
        comps = tracks.pattern_components(c, p)
        total = NormalPattern.zero(c)
        for q in comps:
            total = total + q
        assert total == p
        assert len(comps) == track_components_geometric(c, p)


@pytest.mark.parametrize("name", ["single_triangle", "hexagon_disk", "strip", "wedge_of_disks"])
def test_simply_connected_tracks_separate(name):
    c = FIXTURES[name]()
    for tau in tracks.enumerate_tracks(c, 8):
        assert tracks.complement_components(c, tau).count == 2
    for p in all_patterns(c, 6):
        assert tracks.dual_graph(c, p).is_tree


def test_annulus_dual_graph_is_only_reported():
    a = corpus.annulus()
    d = tracks.dual_graph(a, transverse_arc(a))
    assert d.flagged == [0] and not d.is_tree


@pytest.mark.parametrize("name", ["hexagon_disk", "strip"])
def test_addition_of_disjoint_tracks(name):
    c = FIXTURES[name]()
    cands = tracks.enumerate_tracks(c, 6)

    def support(p):
        return {i for i, xs in enumerate(p.corners) if any(xs)}

    pairs = 0
    for p, q in itertools.combinations(cands, 2):
        if support(p) & support(q):
            continue
        pairs += 1
        assert sorted(tracks.pattern_components(c, p + q), key=lambda x: x.coords) == sorted([p, q], key=lambda x: x.coords)
    for p in cands:
        assert tracks.pattern_components(c, p + p) == [p, p]
    assert pairs


def test_family_examples():
    h = corpus.hexagon_disk()
    fam, rep = tracks.maximal_essential_family(h, 1, 12)
    assert rep.tracks and max(rep.region_sizes) <= 6
    assert tracks.dual_graph(h, fam).is_tree
    c = corpus.single_triangle()
    fam, rep = tracks.maximal_essential_family(c, 1, 12)
    assert sorted(map(sorted, tracks.complement_components(c, fam).vertex_sets)) == [["a"], ["b"], ["c"]]
    assert len(rep.tracks) == 2
    a = corpus.annulus()
    fam, rep = tracks.maximal_essential_family(a, 4, 12)
    assert fam.is_zero() and rep.non_separating > 0


@pytest.mark.parametrize("name,m", [("hexagon_disk", 1), ("strip", 1), ("wedge_of_disks", 2), ("single_triangle", 1)])
def test_family_is_maximal(name, m):
    c = FIXTURES[name]()
    fam, rep = tracks.maximal_essential_family(c, m, 8)
    assert not any(tracks.addable(c, fam, tau, m) for tau in tracks.enumerate_tracks(c, 8))
    for tau in rep.tracks:
        assert tracks.is_essential(c, tau, m)


def test_enumeration_budget():
    with pytest.raises(tracks.BudgetExceeded):
        list(tracks.enumerate_patterns(corpus.hexagon_disk(), 12, budget=50))


def test_bare_edges():
    c = tracks.TriComplex.build(["a", "b", "c", "d"], [("a", "b", "c")], bare=[("e", ("c", "d"))])
    p = NormalPattern.of(c, {"t0": (0, 0, 1)}, {"e": 2})
    assert len(tracks.pattern_components(c, p)) == 3
    d = tracks.dual_graph(c, p)
    assert d.is_tree and d.graph.number_of_nodes() == 4
