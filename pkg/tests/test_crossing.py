import itertools

import pytest

from gogkit import corpus, crossing
from gogkit.corpus import E1, E2, E3, _cols


def z2_axes(*vectors):
    edges = [(f"a{i}", "v", "v", 1, _cols(u), _cols(u)) for i, u in enumerate(vectors)]
    return corpus.abelian({"v": 2}, edges)


def z3_mixed(planes, lines):
    edges = [(f"p{i}", "v", "v", 2, _cols(*pl), _cols(*pl)) for i, pl in enumerate(planes)]
    edges += [(f"l{i}", "v", "v", 1, _cols(u), _cols(u)) for i, u in enumerate(lines)]
    return corpus.abelian({"v": 3}, edges)


def oracle_suite():
    """Ten small vertex patterns with the verdict the direction data predicts."""
    return {
        "xy_yz": (corpus.z3_with_planes([(E1, E2), (E2, E3)]), "CONNECTED"),
        "xy_yz_xz": (corpus.z3_xy_yz_xz(), "CONNECTED"),
        "single_plane": (corpus.z3_single_plane(), "DISCONNECTED"),
        "z2_x_axis": (z2_axes((1, 0)), "DISCONNECTED"),
        "z2_two_axes": (z2_axes((1, 0), (0, 1)), "CONNECTED"),
        "z2_slanted": (z2_axes((1, 1), (1, -1)), "CONNECTED"),
        "z3_lines_only": (z3_mixed([], [E1, E3]), "EMPTY"),
        "plane_plus_z_line": (z3_mixed([(E1, E2)], [E3]), "CONNECTED"),
        "plane_plus_x_line": (z3_mixed([(E1, E2)], [E1]), "DISCONNECTED"),
        "slanted_planes": (z3_mixed([((1, 1, 0), E3), ((1, 0, 1), E2)], []), "CONNECTED"),
    }


def test_crosses_examples():
    plane = [E1, E2]
    assert crossing.crosses([E3], plane, 3)
    assert not crossing.crosses([E1], plane, 3)
    assert crossing.crosses([(1, 0, 1)], plane, 3)


def test_crosses_requires_hyperplane():
    with pytest.raises(crossing.NotHyperplane):
        crossing.crosses([E3], [E1], 3)


HYPERPLANES = [[E1, E2], [E2, E3], [E1, E3], [(1, 1, 0), E3], [(2, 4, 0), (0, 0, 3)], [(1, 1, 1), (1, -1, 0)]]


@pytest.mark.parametrize("a,b", list(itertools.combinations(range(len(HYPERPLANES)), 2)))
def test_crosses_symmetric_on_hyperplanes(a, b):
    x, y = HYPERPLANES[a], HYPERPLANES[b]
    from gogkit import linalg

    distinct = not linalg.same_span(x, y)
    assert crossing.crosses(x, y, 3) == crossing.crosses(y, x, 3) == distinct


@pytest.mark.parametrize("name", sorted(oracle_suite()))
def test_summary_matches_expected(name):
    g, want = oracle_suite()[name]
    assert crossing.crossing_graph_summary(g, "v").verdict == want


@pytest.mark.parametrize("name", sorted(oracle_suite()))
def test_summary_agrees_with_lattice_oracle(name):
    g, want = oracle_suite()[name]
    got = crossing.lattice_oracle_crossing_graph(g, "v", r=30, cosets=3)
    assert got.conclusive, got.notes
    assert got.verdict == crossing.crossing_graph_summary(g, "v").verdict == want


def test_disconnected_witness_names_two_cosets():
    s = crossing.crossing_graph_summary(z2_axes((1, 0)), "v")
    a, b = s.witness["cosets"]
    assert a != b


def test_abstract_regime_rejected():
    with pytest.raises(crossing.AbstractRegime):
        crossing.crossing_graph_summary(corpus.point(2), "v")


def test_oracle_budget():
    with pytest.raises(crossing.BudgetExceeded):
        crossing.lattice_oracle_crossing_graph(corpus.z3_xy_yz_xz(), "v", r=30, budget=10**5)


@pytest.mark.parametrize("shift", [(0, 0, 0), (3, -2, 5), (-7, 1, 1)])
def test_crossing_translation_invariant_in_oracle(shift):
    """Translating a line coset never changes whether it crosses a fixed plane coset."""
    import numpy as np
    from scipy import ndimage

    r, n = 20, 3
    plane = crossing._coset_mask([E1, E2], (0, 0, 0), n, r)
    dist = ndimage.distance_transform_cdt(~plane, metric="chessboard")
    labels, _ = ndimage.label(dist > 1)
    far = dist >= 4
    for direction, expect in [(E3, True), (E1, False), ((1, 0, 1), True)]:
        line = crossing._coset_mask([direction], shift, n, r)
        hit = set(np.unique(labels[line & far]).tolist()) - {0}
        assert (len(hit) >= 2) == expect
