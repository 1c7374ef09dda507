import itertools

import pytest

from gogkit import corpus, crossing, gog, rafts
from gogkit.corpus import E1, E2, E3, _cols
from test_crossing import z2_axes, z3_mixed


def path_fixture():
    return corpus.abstract(
        {"v": 3, "w": 2, "u": 1},
        [("e", "v", "w", 2, 1, 1), ("f", "w", "u", 1, 1, 1)],
    )


def brute_rafts(g):
    """Every connected constant-dimension subgraph meeting the raft condition, keep the maximal ones."""
    found = []
    cells_v = sorted(g.vertices)
    for k in range(1, len(cells_v) + 1):
        for vs in itertools.combinations(cells_v, k):
            dims = {g.vertices[v].dim for v in vs}
            if len(dims) != 1:
                continue
            (n,) = dims
            inner = [
                eid for eid, e in g.edges.items()
                if all(x.vertex in vs for x in e.ends) and e.group.dim == n
            ]
            for j in range(len(inner) + 1):
                for es in itertools.combinations(inner, j):
                    sub = g.subgraph(set(vs), set(es))
                    if not sub.is_connected():
                        continue
                    ok = all(
                        e.group.dim < n
                        for eid, e in g.edges.items()
                        if eid not in es and any(x.vertex in vs for x in e.ends)
                    )
                    if ok:
                        found.append((n, frozenset(vs), frozenset(es)))
    maximal = [
        r for r in found
        if not any(s != r and r[1] <= s[1] and r[2] <= s[2] for s in found)
    ]
    return sorted((n, sorted(v), sorted(e)) for n, v, e in maximal)


def raft_corpus():
    out = {name: g for name, (g, _) in corpus.trichotomy_suite().items()}
    out["path"] = path_fixture()
    out["two_dim2"] = corpus.abstract(
        {"a": 2, "b": 2, "c": 1},
        [("e", "a", "b", 2, 1, 1), ("f", "b", "c", 1, 3, 1), ("g", "a", "c", 0, 2, 2)],
    )
    out["xy_yz_xz"] = corpus.z3_xy_yz_xz()
    out["single_plane"] = corpus.z3_single_plane()
    return out


def test_filtration_path():
    f = rafts.dimension_filtration(path_fixture())
    assert f.top == 3
    assert f.levels[3] == ({"v"}, set())
    assert f.levels[2] == ({"v", "w"}, {"e"})
    assert f.levels[1] == f.levels[0] == ({"v", "w", "u"}, {"e", "f"})


def test_filtration_homogeneous_and_single_vertex():
    g = corpus.circle(3, dim=2)
    f = rafts.dimension_filtration(g)
    assert f.levels[2] == (set(g.vertices), set(g.edges))
    assert rafts.dimension_filtration(corpus.point(2)).levels[2] == ({"v"}, set())


def test_path_has_one_point_raft():
    found, off = rafts.find_rafts(path_fixture())
    assert [(r.dim, set(r.vertices), r.kind) for r in found] == [(3, {"v"}, "POINT")]
    assert off == ["u", "w"]


def test_homogeneous_bushy_raft_is_whole_graph():
    g = corpus.amalgam(3, 3, dim=1)
    (r,), off = rafts.find_rafts(g)
    assert r.kind == "BUSHY" and set(r.vertices) == {"a", "b"} and not off


def test_two_vertex_raft():
    found, _ = rafts.find_rafts(raft_corpus()["two_dim2"])
    assert [(r.dim, sorted(r.vertices), sorted(r.edges)) for r in found] == [(2, ["a", "b"], ["e"])]


@pytest.mark.parametrize("name", sorted(raft_corpus()))
def test_rafts_match_brute_force(name):
    g = raft_corpus()[name]
    found, _ = rafts.find_rafts(g)
    got = sorted((r.dim, sorted(r.vertices), sorted(r.edges)) for r in found)
    assert got == brute_rafts(g)


@pytest.mark.parametrize("name", sorted(raft_corpus()))
def test_rafts_disjoint(name):
    found, off = rafts.find_rafts(raft_corpus()[name])
    cells = [c for r in found for c in [*r.vertices, *r.edges]]
    assert len(cells) == len(set(cells))
    assert not set(off) & set(cells)


def test_raft_kinds():
    assert rafts.find_rafts(corpus.circle(3))[0][0].kind == "LINE"
    assert rafts.find_rafts(corpus.point(1))[0][0].kind == "POINT"
    assert rafts.find_rafts(corpus.abstract({"a": 0, "b": 0}, [("e", "a", "b", 0, 1, 3)]))[0][0].kind == "BOUNDED"


def test_star_examples():
    assert rafts.check_star_condition(corpus.z3_xy_yz_xz()).passed
    rep = rafts.check_star_condition(corpus.z3_single_plane())
    assert ("STAR-B", "v") in rep.failures
    assert rafts.check_star_condition(z3_mixed([], [E1, E2])).passed


def test_star_integral_option():
    g = corpus.abelian({"v": 2}, [("a", "v", "v", 1, _cols((2, 0)), _cols((2, 0))), ("b", "v", "v", 1, _cols((0, 2)), _cols((0, 2)))])
    assert rafts.check_star_condition(g).passed
    assert not rafts.check_star_condition(g, integral=True).passed
    assert rafts.check_star_condition(z2_axes((1, 0), (0, 1)), integral=True).passed


def test_star_rejects_abstract():
    with pytest.raises(crossing.AbstractRegime):
        rafts.check_star_condition(corpus.point(1))


def hypothesis_suite():
    """(graph, star passes, raft hypotheses failure codes)."""
    index1_loop = corpus.abelian({"v": 1}, [("t", "v", "v", 1, [[1]], [[1]])])
    z2_to_z = corpus.abelian({"v": 2, "w": 1}, [("e", "v", "w", 1, _cols((1, 0)), [[2]])])
    amalgam_zz = corpus.abelian({"a": 1, "b": 1}, [("e", "a", "b", 1, [[2]], [[3]])])
    nonreduced = corpus.abelian({"a": 2, "b": 2}, [("e", "a", "b", 2, [[1, 0], [0, 1]], [[2, 0], [0, 1]])])
    return {
        "xy_yz_xz": (corpus.z3_xy_yz_xz(), True, set()),
        "single_plane": (corpus.z3_single_plane(), False, {"CROSSING-DISCONNECTED"}),
        "z3_lines_only": (z3_mixed([], [E1, E3]), True, set()),
        "index1_loop": (index1_loop, False, {"NO-LINE-RAFTS"}),
        "z2_axis_to_z": (z2_to_z, False, {"CROSSING-DISCONNECTED"}),
        "z2_two_axes": (z2_axes((1, 0), (0, 1)), True, set()),
        "plane_plus_z_line": (z3_mixed([(E1, E2)], [E3]), True, set()),
        "plane_plus_x_line": (z3_mixed([(E1, E2)], [E1]), False, {"CROSSING-DISCONNECTED"}),
        "slanted_planes": (z3_mixed([((1, 1, 0), E3), ((1, 0, 1), E2)], []), True, set()),
        "amalgam_zz": (amalgam_zz, False, set()),
        "nonreduced": (nonreduced, False, {"NOT-REDUCED", "BOUNDED-RAFT"}),
    }


@pytest.mark.parametrize("name", sorted(hypothesis_suite()))
def test_hypotheses_suite(name):
    g, star, codes = hypothesis_suite()[name]
    assert rafts.check_star_condition(g).passed == star
    rep = rafts.check_raft_hypotheses(g)
    assert {c for c, _ in rep.failures} == codes
    assert rep.passed == (not codes)


@pytest.mark.parametrize("name", sorted(hypothesis_suite()))
def test_star_implies_no_crossing_failure(name):
    g, _, _ = hypothesis_suite()[name]
    if not rafts.check_star_condition(g).passed:
        return
    rep = rafts.check_raft_hypotheses(g)
    assert not any(c == "CROSSING-DISCONNECTED" for c, _ in rep.failures)
    assert gog.is_reduced(g)[0]


def test_abstract_needs_summaries():
    g = corpus.point(2)
    with pytest.raises(rafts.MissingCrossingData):
        rafts.check_raft_hypotheses(g)
    assert rafts.check_raft_hypotheses(g, {"v": "EMPTY"}).passed
    rep = rafts.check_raft_hypotheses(g, {"v": "DISCONNECTED"})
    assert rep.failures == [("CROSSING-DISCONNECTED", "v")]


def test_index1_circle_raft_fails():
    rep = rafts.check_raft_hypotheses(corpus.circle(3), {})
    assert ("NO-LINE-RAFTS", "v0,v1,v2") in rep.failures
