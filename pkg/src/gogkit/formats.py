"""Line-oriented text formats for every input the CLI reads.

Each format has a ``parse_*`` taking text and a ``dump_*`` producing the
canonical text.  ``#`` starts a comment; blank lines are ignored.  Errors
carry the 1-based line number they were found on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from gogkit import gog, tracks
from gogkit.bassserre import TreeBall
from gogkit.coarse import LatticeBox, METRICS
from gogkit.gog import ABELIAN, ABSTRACT, INF, DeclaredIndex, Edge, EdgeEnd, GraphOfGroups, GroupSpec, MatrixInjection
from gogkit.patterns import DegeneratePattern, SubspacePattern


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _header(lines, magic: str) -> tuple[int, list[str]]:
    try:
        no, toks = next(lines)
    except StopIteration:
        raise ParseError(f"empty file, expected '{magic} v1'") from None
    if toks[:2] != [magic, "v1"]:
        raise ParseError(f"expected header '{magic} v1'", no)
    return no, toks[2:]


def _kv(tokens, no: int, allowed=None) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, eq, val = tok.partition("=")
        if not eq or not key:
            raise ParseError(f"expected key=value, got {tok!r}", no)
        if allowed is not None and key not in allowed:
            raise ParseError(f"unknown key {key!r}", no)
        if key in out:
            raise ParseError(f"repeated key {key!r}", no)
        out[key] = val
    return out


def _need(kv: dict, key: str, no: int) -> str:
    if key not in kv:
        raise ParseError(f"missing {key}=", no)
    return kv[key]


def _int(s: str, no: int, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {s!r}", no) from None


def parse_rows(s: str, no: int, number=int) -> list[list]:
    """``1,0;0,1`` -> [[1, 0], [0, 1]]; ``-`` is the empty matrix."""
    if s == "-":
        return []
    rows = []
    for part in s.split(";"):
        try:
            rows.append([number(x) for x in part.split(",")])
        except ValueError:
            raise ParseError(f"bad matrix entry in {s!r}", no) from None
    if len({len(r) for r in rows}) > 1:
        raise ParseError(f"matrix rows have different lengths in {s!r}", no)
    return rows


def dump_rows(rows) -> str:
    if not rows or not rows[0]:
        return "-"
    return ";".join(",".join(str(x) for x in r) for r in rows)


def _unique(seen: dict, kind: str, ident: str, no: int):
    if ident in seen:
        raise ParseError(f"duplicate {kind} id {ident!r}", no)
    seen[ident] = no


# .gog ------------------------------------------------------------------------


def _index(s: str, no: int) -> float:
    if s == "inf":
        return INF
    i = _int(s, no, "index")
    if i < 1:
        raise ParseError("index must be positive or inf", no)
    return i


def parse_gog(text: str) -> GraphOfGroups:
    lines = _lines(text)
    hno, rest = _header(lines, "gog")
    if len(rest) != 1 or rest[0] not in (ABSTRACT, ABELIAN):
        raise ParseError("header must name the regime: abstract or abelian", hno)
    regime = rest[0]
    size = "rank" if regime == ABELIAN else "dim"
    where: dict[str, int] = {}
    vertices, raw_edges = {}, {}
    for no, toks in lines:
        kind = toks[0]
        if kind == "vertex" and len(toks) >= 2:
            _unique(where, "vertex", "vertex " + toks[1], no)
            kv = _kv(toks[2:], no, {size})
            vertices[toks[1]] = GroupSpec(_int(_need(kv, size, no), no, size), regime == ABELIAN)
        elif kind == "edge" and len(toks) >= 2:
            _unique(where, "edge", "edge " + toks[1], no)
            allowed = {"ends", size, "m1", "m2"} if regime == ABELIAN else {"ends", size, "idx"}
            raw_edges[toks[1]] = (no, _kv(toks[2:], no, allowed))
        else:
            raise ParseError(f"unknown or incomplete record {kind!r}", no)
    edges = {}
    for eid, (no, kv) in raw_edges.items():
        ends = _need(kv, "ends", no).split(",")
        if len(ends) != 2:
            raise ParseError("ends= needs two vertex ids", no)
        for v in ends:
            if v not in vertices:
                raise ParseError(f"unknown vertex {v!r}", no)
        dim = _int(_need(kv, size, no), no, size)
        if regime == ABELIAN:
            injs = []
            for key, v in zip(("m1", "m2"), ends):
                rows = parse_rows(_need(kv, key, no), no)
                n_v = vertices[v].dim
                if not rows:
                    rows = [[] for _ in range(n_v)]
                if len(rows) != n_v or any(len(r) != dim for r in rows):
                    raise ParseError(f"{key} must be {n_v}x{dim} to match the ranks", no)
                injs.append(MatrixInjection.from_rows(rows, dim))
        else:
            idx = _need(kv, "idx", no).split(",")
            if len(idx) != 2:
                raise ParseError("idx= needs two indices", no)
            injs = [DeclaredIndex(_index(x, no)) for x in idx]
        edges[eid] = Edge(GroupSpec(dim, regime == ABELIAN), (EdgeEnd(ends[0], injs[0]), EdgeEnd(ends[1], injs[1])))
    g = GraphOfGroups(regime, vertices, edges)
    problems = gog.validate(g)
    if problems:
        first = problems[0]
        words = first.split()
        no = where.get(" ".join(words[:2]).rstrip(":"), hno)
        raise ParseError("; ".join(problems), no)
    return g


def dump_gog(g: GraphOfGroups) -> str:
    abelian = g.regime == ABELIAN
    size = "rank" if abelian else "dim"
    out = [f"gog v1 {g.regime}"]
    for v in sorted(g.vertices):
        out.append(f"vertex {v} {size}={g.vertices[v].dim}")
    for eid in sorted(g.edges):
        e = g.edges[eid]
        a, b = e.ends
        line = f"edge {eid} ends={a.vertex},{b.vertex} {size}={e.group.dim}"
        if abelian:
            line += f" m1={dump_rows(a.injection.rows)} m2={dump_rows(b.injection.rows)}"
        else:
            idx = ["inf" if end.injection.index == INF else str(end.injection.index) for end in e.ends]
            line += f" idx={idx[0]},{idx[1]}"
        out.append(line)
    return "\n".join(out) + "\n"


# .tree -----------------------------------------------------------------------


def parse_tree(text: str) -> TreeBall:
    lines = _lines(text)
    hno, rest = _header(lines, "tree")
    if rest:
        raise ParseError("unexpected tokens after header", hno)
    root = None
    depth, over, truncated = {}, {}, set()
    edges, edge_over = {}, {}
    vline, eline = {}, {}
    for no, toks in lines:
        kind = toks[0]
        if kind == "root" and len(toks) == 2:
            if root is not None:
                raise ParseError("repeated root line", no)
            root = _int(toks[1], no, "root")
        elif kind == "v" and len(toks) >= 2:
            v = _int(toks[1], no, "vertex id")
            if v in vline:
                raise ParseError(f"duplicate vertex id {v}", no)
            vline[v] = no
            flags = [t for t in toks[2:] if "=" not in t]
            if flags not in ([], ["truncated"]):
                raise ParseError(f"unknown flag {flags[0]!r}", no)
            kv = _kv([t for t in toks[2:] if "=" in t], no, {"depth", "over"})
            depth[v] = _int(_need(kv, "depth", no), no, "depth")
            if "over" in kv:
                over[v] = kv["over"]
            if flags:
                truncated.add(v)
        elif kind == "e" and len(toks) >= 4:
            eid = _int(toks[1], no, "edge id")
            if eid in eline:
                raise ParseError(f"duplicate edge id {eid}", no)
            eline[eid] = no
            edges[eid] = (_int(toks[2], no, "vertex id"), _int(toks[3], no, "vertex id"))
            kv = _kv(toks[4:], no, {"over"})
            if "over" in kv:
                ge, colon, k = kv["over"].rpartition(":")
                if not colon or k not in ("1", "2"):
                    raise ParseError("edge over= must be <gamma-edge>:<1|2>", no)
                edge_over[eid] = (ge, int(k))
        else:
            raise ParseError(f"unknown or incomplete record {kind!r}", no)
    if root is None:
        raise ParseError("missing root line", hno)
    if root not in depth:
        raise ParseError(f"root {root} is not a vertex", hno)
    for eid, (a, b) in edges.items():
        for x in (a, b):
            if x not in depth:
                raise ParseError(f"edge {eid} uses unknown vertex {x}", eline[eid])
        if depth[b] != depth[a] + 1:
            raise ParseError(f"edge {eid} must go from depth d to d+1", eline[eid])
    if len(edges) != len(depth) - 1 or depth[root] != 0:
        raise ParseError("vertices and edges do not form a rooted tree", hno)
    children = {b for a, b in edges.values()}
    if len(children) != len(edges) or root in children:
        raise ParseError("vertices and edges do not form a rooted tree", hno)
    radius = max(depth.values()) if truncated else None
    return TreeBall(root, depth, edges, over, edge_over, truncated, radius)


def dump_tree(t: TreeBall) -> str:
    out = ["tree v1", f"root {t.root}"]
    for v in sorted(t.depth):
        line = f"v {v} depth={t.depth[v]}"
        if v in t.over:
            line += f" over={t.over[v]}"
        if v in t.truncated:
            line += " truncated"
        out.append(line)
    for eid in sorted(t.edges):
        a, b = t.edges[eid]
        line = f"e {eid} {a} {b}"
        if eid in t.edge_over:
            ge, k = t.edge_over[eid]
            line += f" over={ge}:{k}"
        out.append(line)
    return "\n".join(out) + "\n"


# .pts ------------------------------------------------------------------------


@dataclass
class PointsFile:
    """Points in a host: a lattice box (``host=lattice n r metric``) or a ``.tree`` file."""

    host: tuple  # ("lattice", n, r, metric) or ("tree", path)
    points: list = field(default_factory=list)

    def load_host(self, base: Path | str = "."):
        if self.host[0] == "lattice":
            _, n, r, metric = self.host
            return LatticeBox(n, r, metric)
        from gogkit.coarse import TreeMetric

        path = Path(base) / self.host[1]
        return TreeMetric(parse_tree(path.read_text()))


def parse_pts(text: str) -> PointsFile:
    lines = _lines(text)
    hno, rest = _header(lines, "pts")
    if not rest or not rest[0].startswith("host="):
        raise ParseError("header needs host=", hno)
    kind, *args = [rest[0][5:], *rest[1:]]
    if kind == "lattice":
        if len(args) != 3:
            raise ParseError("host=lattice needs n r metric", hno)
        n, r = _int(args[0], hno, "n"), _int(args[1], hno, "r")
        if args[2] not in METRICS:
            raise ParseError(f"metric must be one of {', '.join(METRICS)}", hno)
        host = ("lattice", n, r, args[2])
    elif kind == "tree":
        if len(args) != 1:
            raise ParseError("host=tree needs one path", hno)
        host = ("tree", args[0])
    else:
        raise ParseError(f"unknown host {kind!r}", hno)
    pts = []
    for no, toks in lines:
        if toks[0] != "p" or len(toks) != 2:
            raise ParseError("expected 'p <point>'", no)
        if host[0] == "lattice":
            (coords,) = parse_rows(toks[1], no)
            if len(coords) != host[1] or any(abs(x) > host[2] for x in coords):
                raise ParseError(f"point {toks[1]} is outside the box", no)
            pts.append(tuple(coords))
        else:
            pts.append(_int(toks[1], no, "vertex id"))
    if len(set(pts)) != len(pts):
        raise ParseError("repeated point")
    return PointsFile(host, pts)


def dump_pts(p: PointsFile) -> str:
    host = " ".join(str(x) for x in p.host)
    out = [f"pts v1 host={host}"]
    for x in sorted(p.points):
        out.append(f"p {','.join(map(str, x)) if isinstance(x, tuple) else x}")
    return "\n".join(out) + "\n"


# .cx2 / .npat ------------------------------------------------------------------


def parse_cx2(text: str) -> tracks.TriComplex:
    lines = _lines(text)
    hno, rest = _header(lines, "cx2")
    if rest:
        raise ParseError("unexpected tokens after header", hno)
    verts, tris, bare = [], [], []
    seen: dict[str, int] = {}
    for no, toks in lines:
        kind = toks[0]
        if kind == "v" and len(toks) == 2:
            _unique(seen, "vertex", "v " + toks[1], no)
            verts.append(toks[1])
        elif kind == "t" and len(toks) == 5:
            _unique(seen, "cell", "c " + toks[1], no)
            tris.append((toks[1], tuple(toks[2:])))
        elif kind == "e" and len(toks) == 4:
            _unique(seen, "cell", "c " + toks[1], no)
            bare.append((toks[1], tuple(toks[2:])))
        else:
            raise ParseError(f"unknown or malformed record {kind!r}", no)
    c = tracks.TriComplex(tuple(verts), tuple(tris), tuple(bare))
    problems = c.problems()
    if problems:
        raise ParseError("; ".join(problems), hno)
    return c


def dump_cx2(c: tracks.TriComplex) -> str:
    out = ["cx2 v1"]
    out += [f"v {v}" for v in sorted(c.vertices)]
    out += [f"t {tid} {' '.join(tri)}" for tid, tri in sorted(c.triangles)]
    out += [f"e {eid} {u} {v}" for eid, (u, v) in sorted(c.bare)]
    return "\n".join(out) + "\n"


@dataclass
class NpatFile:
    over: str
    corners: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    bare: dict[str, int] = field(default_factory=dict)

    def pattern(self, c: tracks.TriComplex) -> tracks.NormalPattern:
        tids = {tid for tid, _ in c.triangles}
        eids = {eid for eid, _ in c.bare}
        unknown = sorted(set(self.corners) - tids) + sorted(set(self.bare) - eids)
        if unknown:
            raise ParseError(f"pattern names cells not in the complex: {', '.join(unknown)}")
        p = tracks.NormalPattern.of(c, self.corners, self.bare)
        problems = tracks.validate_pattern(c, p)
        if problems:
            raise ParseError("; ".join(problems))
        return p

    @classmethod
    def of(cls, c: tracks.TriComplex, p: tracks.NormalPattern, over: str) -> NpatFile:
        corners = {tid: x for (tid, _), x in zip(c.triangles, p.corners) if any(x)}
        bare = {eid: w for (eid, _), w in zip(c.bare, p.bare) if w}
        return cls(over, corners, bare)


def parse_npat(text: str) -> NpatFile:
    lines = _lines(text)
    hno, rest = _header(lines, "npat")
    over = _need(_kv(rest, hno, {"over"}), "over", hno)
    out = NpatFile(over)
    for no, toks in lines:
        kind = toks[0]
        if kind == "corner" and len(toks) == 3:
            if toks[1] in out.corners:
                raise ParseError(f"duplicate corner line for {toks[1]}", no)
            (xs,) = parse_rows(toks[2], no)
            if len(xs) != 3 or min(xs) < 0:
                raise ParseError("corner needs three non-negative integers", no)
            out.corners[toks[1]] = tuple(xs)
        elif kind == "bare" and len(toks) == 3:
            if toks[1] in out.bare:
                raise ParseError(f"duplicate bare line for {toks[1]}", no)
            w = _int(toks[2], no, "weight")
            if w < 0:
                raise ParseError("weight must be non-negative", no)
            out.bare[toks[1]] = w
        else:
            raise ParseError(f"unknown or malformed record {kind!r}", no)
    return out


def dump_npat(p: NpatFile) -> str:
    out = [f"npat v1 over={p.over}"]
    out += [f"corner {t} {','.join(map(str, x))}" for t, x in sorted(p.corners.items())]
    out += [f"bare {e} {w}" for e, w in sorted(p.bare.items())]
    return "\n".join(out) + "\n"


# .pat --------------------------------------------------------------------------


def parse_pat(text: str) -> SubspacePattern:
    """Subspaces keep file order: a pattern is an ordered family."""
    lines = _lines(text)
    hno, rest = _header(lines, "pat")
    n = _int(_need(_kv(rest, hno, {"n"}), "n", hno), hno, "n")
    if n < 1:
        raise ParseError("n must be positive", hno)
    ids, subs = [], []
    for no, toks in lines:
        if toks[0] != "sub" or len(toks) != 3:
            raise ParseError("expected 'sub <id> rows=...'", no)
        if toks[1] in ids:
            raise ParseError(f"duplicate subspace id {toks[1]!r}", no)
        rows = parse_rows(_need(_kv(toks[2:], no, {"rows"}), "rows", no), no, Fraction)
        if not rows or len(rows[0]) != n:
            raise ParseError(f"basis rows must have length {n}", no)
        try:
            SubspacePattern.of(n, [rows])
        except DegeneratePattern as exc:
            raise ParseError(str(exc), no) from None
        ids.append(toks[1])
        subs.append([tuple(_intish(x) for x in r) for r in rows])
    if not subs:
        raise ParseError("a pattern needs at least one subspace", hno)
    return SubspacePattern.of(n, subs, ids)


def _intish(x: Fraction):
    return int(x) if x.denominator == 1 else x


def dump_pat(p: SubspacePattern) -> str:
    out = [f"pat v1 n={p.n}"]
    for sid, basis in zip(p.ids, p.subspaces):
        out.append(f"sub {sid} rows={dump_rows(basis)}")
    return "\n".join(out) + "\n"


PARSERS = {
    "gog": parse_gog,
    "tree": parse_tree,
    "pts": parse_pts,
    "cx2": parse_cx2,
    "npat": parse_npat,
    "pat": parse_pat,
}
DUMPERS = {
    "gog": dump_gog,
    "tree": dump_tree,
    "pts": dump_pts,
    "cx2": dump_cx2,
    "npat": dump_npat,
    "pat": dump_pat,
}


def parse(source: str | Path, fmt: str | None = None):
    """Parse a path (format from its suffix unless given) or, with ``fmt``, raw text."""
    if fmt is None or isinstance(source, Path):
        path = Path(source)
        fmt = fmt or path.suffix.lstrip(".")
        if fmt not in PARSERS:
            raise ParseError(f"unknown format {fmt!r}")
        return PARSERS[fmt](path.read_text(encoding="utf-8"))
    if fmt not in PARSERS:
        raise ParseError(f"unknown format {fmt!r}")
    return PARSERS[fmt](str(source))


def serialize(value, fmt: str) -> str:
    return DUMPERS[fmt](value)
