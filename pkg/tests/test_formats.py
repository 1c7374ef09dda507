import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gogkit import bassserre, corpus, formats, tracks
from gogkit.cli import fixture_dir
from gogkit.formats import ParseError
from gogkit.gog import INF
from gogkit.patterns import SubspacePattern

SUFFIXES = ("gog", "tree", "pts", "cx2", "npat", "pat")


def shipped():
    return sorted(p for p in fixture_dir().iterdir() if p.suffix.lstrip(".") in SUFFIXES)


@pytest.mark.parametrize("path", shipped(), ids=lambda p: p.name)
def test_shipped_fixtures_round_trip(path):
    fmt = path.suffix.lstrip(".")
    text = path.read_text()
    assert formats.serialize(formats.parse(path), fmt) == text


def test_every_format_is_shipped():
    assert {p.suffix.lstrip(".") for p in shipped()} == set(SUFFIXES)


@pytest.mark.parametrize("name", sorted(corpus.trichotomy_suite()))
def test_gog_round_trip(name):
    g, _ = corpus.trichotomy_suite()[name]
    text = formats.dump_gog(g)
    again = formats.parse_gog(text)
    assert again == g
    assert formats.dump_gog(again) == text


def test_gog_inf_index():
    g = formats.parse_gog("gog v1 abstract\nvertex a dim=1\nvertex b dim=0\nedge e ends=a,b dim=0 idx=inf,2\n")
    assert g.index("e", 1) == INF
    assert "idx=inf,2" in formats.dump_gog(g)


def test_gog_comments_and_blank_lines():
    text = "# a comment\n\ngog v1 abstract   # trailing\nvertex v dim=0\n"
    assert formats.dump_gog(formats.parse_gog(text)) == "gog v1 abstract\nvertex v dim=0\n"


def test_gog_canonical_order():
    text = "gog v1 abstract\nvertex b dim=0\nvertex a dim=0\nedge z ends=a,b dim=0 idx=2,2\nedge y ends=b,a dim=0 idx=1,3\n"
    out = formats.dump_gog(formats.parse_gog(text))
    assert out.splitlines()[1:] == [
        "vertex a dim=0", "vertex b dim=0",
        "edge y ends=b,a dim=0 idx=1,3", "edge z ends=a,b dim=0 idx=2,2",
    ]


def test_gog_empty_matrix():
    text = "gog v1 abelian\nvertex v rank=1\nvertex w rank=1\nedge e ends=v,w rank=0 m1=- m2=-\n"
    g = formats.parse_gog(text)
    assert g.index("e", 1) == INF
    assert formats.dump_gog(g) == text


@pytest.mark.parametrize(
    "text,line",
    [
        ("gog v1 abelian\nvertex v rank=2\nedge e ends=v,v rank=2 m1=1,0;0 m2=1,0;0,1\n", 3),
        ("gog v1 abelian\nvertex v rank=2\nedge e ends=v,v rank=2 m1=1,0 m2=1,0;0,1\n", 3),
        ("gog v1 abstract\nvertex a dim=0\nedge e ends=a,b dim=0 idx=1,1\n", 3),
        ("gog v1 abstract\nvertex a dim=0\nvertex a dim=1\n", 3),
        ("gog v1 abstract\nvertex a dim=x\n", 2),
        ("gog v1 abstract\nvertex a dim=0\nedge e ends=a,a dim=0 idx=0,1\n", 3),
        ("gog v2 abstract\n", 1),
        ("gog v1 weird\n", 1),
        ("gog v1 abstract\nvertex a dim=0\nbanana\n", 3),
        ("gog v1 abstract\nvertex a dim=1\nedge e ends=a,a dim=2 idx=1,1\n", 3),
    ],
)
def test_gog_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        formats.parse_gog(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_gog_rank_deficient_matrix():
    text = "gog v1 abelian\nvertex v rank=2\nedge e ends=v,v rank=2 m1=1,2;2,4 m2=1,0;0,1\n"
    with pytest.raises(ParseError, match="full column rank"):
        formats.parse_gog(text)


def test_gog_disconnected_rejected():
    with pytest.raises(ParseError, match="disconnected"):
        formats.parse_gog("gog v1 abstract\nvertex a dim=0\nvertex b dim=0\n")


def test_tree_round_trip_of_expanded_balls():
    for p, r in ((3, 3), (5, 2), (4, 1)):
        ball = bassserre.expand_ball(corpus.amalgam(p, p), "a", r)
        again = formats.parse_tree(formats.dump_tree(ball))
        assert again.depth == ball.depth and again.edges == ball.edges
        assert again.over == ball.over and again.edge_over == ball.edge_over
        assert again.truncated == ball.truncated


def test_standalone_tree():
    text = "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=1\nv 2 depth=1\ne 0 0 1\ne 1 0 2\n"
    t = formats.parse_tree(text)
    assert t.over == {} and formats.dump_tree(t) == text


@pytest.mark.parametrize(
    "text",
    [
        "tree v1\nv 0 depth=0\n",
        "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=2\ne 0 0 1\n",
        "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=1\ne 0 0 7\n",
        "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=1 bogus\n",
        "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=1\ne 0 0 1 over=e:3\n",
        "tree v1\nroot 0\nv 0 depth=0\nv 1 depth=1\nv 2 depth=1\ne 0 0 1\n",
    ],
)
def test_tree_errors(text):
    with pytest.raises(ParseError):
        formats.parse_tree(text)


def test_pts_round_trip_and_host(tmp_path):
    p = formats.PointsFile(("lattice", 2, 5, "l1"), [(1, 0), (-1, 2), (0, 0)])
    text = formats.dump_pts(p)
    assert text.splitlines()[1] == "p -1,2"
    again = formats.parse_pts(text)
    assert formats.dump_pts(again) == text
    assert again.load_host().r == 5
    ball = bassserre.expand_ball(corpus.amalgam(3, 3), "a", 2)
    (tmp_path / "b.tree").write_text(formats.dump_tree(ball))
    tree_pts = formats.parse_pts("pts v1 host=tree b.tree\np 3\np 1\n")
    assert formats.dump_pts(tree_pts) == "pts v1 host=tree b.tree\np 1\np 3\n"
    assert sorted(tree_pts.load_host(tmp_path).points()) == ball.vertices


@pytest.mark.parametrize(
    "text",
    [
        "pts v1 host=lattice 2 5 sup\np 9,0\n",
        "pts v1 host=lattice 2 5 taxi\n",
        "pts v1 host=lattice 2 5 sup\np 1,0\np 1,0\n",
        "pts v1 host=sphere\n",
        "pts v1\n",
    ],
)
def test_pts_errors(text):
    with pytest.raises(ParseError):
        formats.parse_pts(text)


def test_cx2_round_trip_with_bare_edges():
    c = tracks.TriComplex.build(["a", "b", "c", "d"], [("t", ("a", "b", "c"))], [("x", ("c", "d"))])
    text = formats.dump_cx2(c)
    assert text == "cx2 v1\nv a\nv b\nv c\nv d\nt t a b c\ne x c d\n"
    assert formats.parse_cx2(text) == c


@pytest.mark.parametrize(
    "text",
    [
        "cx2 v1\nv a\nv b\nt t a b q\n",
        "cx2 v1\nv a\nv b\nv c\nt t a b c\nt t a b c\n",
        "cx2 v1\nv a\nv b\nv c\nt t a b\n",
        "cx2 v1\nv a\nv b\nv c\nv d\nt t a b c\n",
    ],
)
def test_cx2_errors(text):
    with pytest.raises(ParseError):
        formats.parse_cx2(text)


def test_npat_round_trip_and_pattern():
    c = corpus.annulus()
    text = "npat v1 over=annulus\ncorner t0 0,1,0\ncorner t1 0,0,1\n"
    npat = formats.parse_npat(text)
    assert formats.dump_npat(npat) == text
    p = npat.pattern(c)
    assert formats.NpatFile.of(c, p, "annulus") == npat
    assert tracks.is_essential(c, p, 1) is tracks.Essentiality.NON_SEPARATING


def test_npat_errors():
    c = corpus.annulus()
    with pytest.raises(ParseError):
        formats.parse_npat("npat v1 over=annulus\ncorner t0 1,2\n")
    with pytest.raises(ParseError):
        formats.parse_npat("npat v1 over=annulus\ncorner t0 -1,0,0\n")
    with pytest.raises(ParseError):
        formats.parse_npat("npat v1\n")
    with pytest.raises(ParseError, match="not in the complex"):
        formats.parse_npat("npat v1 over=annulus\ncorner zz 1,0,0\n").pattern(c)
    # one lonely corner arc does not match across the edge it ends on
    with pytest.raises(ParseError):
        formats.parse_npat("npat v1 over=annulus\ncorner t0 1,0,0\n").pattern(c)


def test_pat_round_trip_keeps_order():
    text = "pat v1 n=3\nsub b rows=0,1,0\nsub a rows=1,0,0;0,0,1\n"
    p = formats.parse_pat(text)
    assert p.ids == ("b", "a") and p.dims == (1, 2)
    assert formats.dump_pat(p) == text


def test_pat_fractions():
    text = "pat v1 n=2\nsub h rows=1/2,3\n"
    p = formats.parse_pat(text)
    assert formats.dump_pat(p) == text


@pytest.mark.parametrize(
    "text",
    [
        "pat v1 n=2\nsub a rows=1,0,0\n",
        "pat v1 n=2\nsub a rows=1,1;2,2\n",
        "pat v1 n=2\nsub a rows=0,0\n",
        "pat v1 n=2\n",
        "pat v1 n=2\nsub a rows=1,0\nsub a rows=0,1\n",
    ],
)
def test_pat_errors(text):
    with pytest.raises(ParseError):
        formats.parse_pat(text)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda n: st.lists(
            st.lists(st.tuples(*[st.integers(-5, 5)] * n), min_size=1, max_size=n),
            min_size=1, max_size=4,
        ).map(lambda subs: (n, subs))
    )
)
def test_pat_round_trip_property(data):
    n, subs = data
    try:
        p = SubspacePattern.of(n, subs)
    except Exception:
        return
    text = formats.dump_pat(p)
    assert formats.dump_pat(formats.parse_pat(text)) == text


def test_random_abelian_gog_round_trip():
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randint(1, 3)
        cols = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        g = corpus.abelian({"v": n}, [("e", "v", "v", n, cols, cols)])
        try:
            text = formats.dump_gog(g)
            assert formats.dump_gog(formats.parse_gog(text)) == text
        except ParseError as exc:
            assert "rank" in str(exc)


def test_parse_by_suffix_and_unknown(tmp_path):
    path = tmp_path / "x.gog"
    path.write_text("gog v1 abstract\nvertex v dim=0\n")
    assert formats.parse(path).vertices.keys() == {"v"}
    assert formats.parse("gog v1 abstract\nvertex v dim=0\n", "gog").regime == "abstract"
    with pytest.raises(ParseError):
        formats.parse(tmp_path / "x.txt")
    with pytest.raises(ParseError):
        formats.parse("", "gog")
