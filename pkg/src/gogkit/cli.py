"""``gogkit`` command line: parse an input file, run one operation, print a key=value report.

Exit codes: 0 computed, 1 a checked property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from importlib import resources
from pathlib import Path

import networkx as nx

from gogkit import bassserre, crossing, formats, gog, patterns, quasiedges, rafts, tracks
from gogkit.formats import ParseError
from gogkit.gog import INF

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(ValueError):
    """Anything wrong with what the user handed us; maps to exit code 2."""


class Report:
    def __init__(self, command: str):
        self.lines: list[tuple[str, str]] = [("command", command)]

    def add(self, key: str, value) -> None:
        self.lines.append((key, _fmt(value)))

    def text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.lines)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if value == INF:
        return "inf"
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        sep = ";" if any(isinstance(x, (list, tuple)) for x in items) else ","
        return sep.join(_fmt(x) for x in items) or "-"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


# inputs ----------------------------------------------------------------------


def fixture_dir() -> Path:
    return Path(str(resources.files("gogkit") / "fixtures"))


def _resolve(path: str) -> Path:
    """A real path, or a shipped fixture when the name starts with ``fixtures/``."""
    p = Path(path)
    if p.exists():
        return p
    if p.parts and p.parts[0] == "fixtures":
        shipped = fixture_dir().joinpath(*p.parts[1:])
        if shipped.exists():
            return shipped
    raise InputError(f"no such file: {path}")


def _load(path: str, fmt: str):
    p = _resolve(path)
    if p.suffix != f".{fmt}":
        raise InputError(f"{path}: expected a .{fmt} file")
    try:
        return formats.parse(p, fmt)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path: str | None, text: str, rep: Report, key: str = "output") -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        rep.add(key, path)


def _figure(args, rep: Report, draw) -> None:
    if args.figure:
        draw(args.figure)
        rep.add("figure", args.figure)


def _no_figure(args) -> None:
    if args.figure:
        raise InputError(f"--figure is not available for '{args.command}'")


def _abelian(g, what: str):
    if g.regime != gog.ABELIAN:
        raise InputError(f"{what} needs an abelian .gog file")


# graph-of-groups commands ------------------------------------------------------


def cmd_classify(args, rep: Report) -> int:
    g = _load(args.gog, "gog")
    code = OK
    try:
        verdict = bassserre.classify_trichotomy(g).value
    except bassserre.Unclassifiable as exc:
        verdict = "UNCLASSIFIABLE"
        rep.add("reason", exc)
        code = FAILED
    rep.add("trichotomy", verdict)
    red, _ = gog.reduce(g)
    rep.add("reduced_vertices", sorted(red.vertices))
    for v in sorted(red.vertices):
        rep.add(f"valence.{v}", gog.tree_valence(red, v))
    if args.oracle_radius:
        try:
            oracle = bassserre.oracle_classify_by_expansion(g, args.oracle_radius).value
        except bassserre.InfiniteIndex:
            oracle = "INFINITE-INDEX"
        rep.add("oracle", oracle)
        rep.add("oracle_radius", args.oracle_radius)
        if oracle in ("BOUNDED", "LINELIKE", "BUSHY"):
            rep.add("agree", oracle == verdict)
            if oracle != verdict:
                code = FAILED

    def draw(path):
        from gogkit import plotting

        plotting.draw_gog(g, path, title=f"trichotomy {verdict}")

    _figure(args, rep, draw)
    return code


def cmd_reduce(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    red, trace = gog.reduce(g)
    for i, step in enumerate(trace, start=1):
        rep.add(f"step.{i}", step)
    rep.add("steps", len(trace))
    rep.add("vertices", sorted(red.vertices))
    rep.add("edges", sorted(red.edges))
    rep.add("reduced", gog.is_reduced(red)[0])
    _write(args.output, formats.dump_gog(red), rep)
    return OK


def cmd_expand(args, rep: Report) -> int:
    g = _load(args.gog, "gog")
    base = args.base or min(g.vertices)
    if base not in g.vertices:
        raise InputError(f"unknown base vertex {base}")
    try:
        ball = bassserre.expand_ball(g, base, args.radius, args.budget or bassserre.DEFAULT_BUDGET)
    except bassserre.InfiniteIndex as exc:
        raise InputError(str(exc)) from None
    except bassserre.BudgetExceeded as exc:
        rep.add("status", "BUDGET-EXCEEDED")
        rep.add("reason", exc)
        return FAILED
    rep.add("base", base)
    rep.add("radius", args.radius)
    rep.add("vertices", len(ball.depth))
    rep.add("edges", len(ball.edges))
    rep.add("truncated", len(ball.truncated))
    rep.add("boundary_sizes", ball.boundary_sizes())
    problems = bassserre.local_count_violations(g, ball)
    rep.add("local_count_violations", len(problems))
    _write(args.output, formats.dump_tree(ball), rep)

    def draw(path):
        from gogkit import plotting

        plotting.draw_tree(ball, path)

    _figure(args, rep, draw)
    return FAILED if problems else OK


def cmd_homogeneous(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    rep.add("homogeneous", gog.is_geometrically_homogeneous(g))
    infinite = [f"{e}:{k}" for e in sorted(g.edges) for k in (1, 2) if g.index(e, k) == INF]
    rep.add("infinite_index_ends", infinite)
    for v in sorted(g.vertices):
        rep.add(f"valence.{v}", gog.tree_valence(g, v))
    return OK


def cmd_rafts(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    filt = rafts.dimension_filtration(g)
    rep.add("top", filt.top)
    for i in sorted(filt.levels, reverse=True):
        vs, es = filt.levels[i]
        rep.add(f"level.{i}.vertices", vs)
        rep.add(f"level.{i}.edges", es)
    found, off = rafts.find_rafts(g)
    for k, r in enumerate(found, start=1):
        rep.add(f"raft.{k}.dim", r.dim)
        rep.add(f"raft.{k}.kind", r.kind)
        rep.add(f"raft.{k}.vertices", r.vertices)
        rep.add(f"raft.{k}.edges", r.edges)
    rep.add("rafts", len(found))
    rep.add("off_raft", off)
    return OK


def _failures(rep: Report, report: rafts.Report) -> int:
    rep.add("passed", report.passed)
    for k, (code, where) in enumerate(report.failures, start=1):
        rep.add(f"failure.{k}", f"{code} {where}")
    return OK if report.passed else FAILED


def cmd_check_star(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    _abelian(g, "check-star")
    report = rafts.check_star_condition(g, integral=args.integral)
    rep.add("integral", args.integral)
    for v in sorted(report.details):
        d = report.details[v]
        rep.add(f"vertex.{v}", f"rank={d['rank']} span={d['span']} images={_fmt(d['image_ranks'])}")
    return _failures(rep, report)


def _crossing_flag(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        if not part:
            continue
        v, eq, verdict = part.partition("=")
        if not eq or verdict not in ("EMPTY", "CONNECTED", "DISCONNECTED"):
            raise InputError(f"--crossing expects v=EMPTY|CONNECTED|DISCONNECTED, got {part!r}")
        out[v] = verdict
    return out


def cmd_check_raft_hypotheses(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    try:
        report = rafts.check_raft_hypotheses(g, _crossing_flag(args.crossing) or None)
    except rafts.MissingCrossingData as exc:
        raise InputError(f"{exc}; pass --crossing for abstract graphs") from None
    for v, verdict in sorted(report.details.get("crossing", {}).items()):
        rep.add(f"crossing.{v}", verdict)
    return _failures(rep, report)


def cmd_crossing(args, rep: Report) -> int:
    _no_figure(args)
    g = _load(args.gog, "gog")
    _abelian(g, "crossing")
    vertices = [args.vertex] if args.vertex else sorted(g.vertices)
    code = OK
    for v in vertices:
        if v not in g.vertices:
            raise InputError(f"unknown vertex {v}")
        summary = crossing.crossing_graph_summary(g, v)
        rep.add(f"{v}.verdict", summary.verdict)
        for key in sorted(summary.witness):
            rep.add(f"{v}.witness.{key}", summary.witness[key])
        if args.oracle:
            try:
                og = crossing.lattice_oracle_crossing_graph(
                    g, v, r=args.radius, cosets=args.cosets, budget=args.budget or 50_000_000
                )
            except crossing.BudgetExceeded as exc:
                rep.add(f"{v}.oracle", "BUDGET-EXCEEDED")
                rep.add(f"{v}.oracle_reason", exc)
                continue
            rep.add(f"{v}.oracle", og.verdict)
            rep.add(f"{v}.oracle_conclusive", og.conclusive)
            rep.add(f"{v}.oracle_nodes", [f"{e}#{j}" for e, j in og.nodes])
            rep.add(f"{v}.oracle_edges", [f"{a}#{i}-{b}#{j}" for (a, i), (b, j) in og.edges])
            if og.conclusive:
                agree = og.verdict == summary.verdict
                rep.add(f"{v}.agree", agree)
                if not agree:
                    code = FAILED
    return code


# patterns --------------------------------------------------------------------


def cmd_patterns(args, rep: Report) -> int:
    _no_figure(args)
    p = _load(args.pattern, "pat")
    rep.add("n", p.n)
    rep.add("dims", p.dims)
    canon = patterns.canonical_projective_pattern(p)
    for sid, basis in zip(canon.ids, canon.subspaces):
        rep.add(f"canonical.{sid}", formats.dump_rows(basis))
    if p.n == 2 and p.dims == (1, 1, 1, 1):
        try:
            rep.add("cross_ratio", patterns.cross_ratio(*(b[0] for b in p.subspaces)))
        except patterns.DegeneratePattern as exc:
            rep.add("cross_ratio", f"undefined ({exc})")
    if not args.other:
        return OK
    q = _load(args.other, "pat")
    if q.n != p.n or len(q.subspaces) != len(p.subspaces):
        raise InputError("patterns must share n and the number of subspaces")
    eq = patterns.decide_projective_equivalence(
        p, q, grid_limit=args.grid_limit, trials=args.trials, seed=args.seed
    )
    rep.add("answer", eq.answer)
    rep.add("mode", eq.mode)
    rep.add("seed", args.seed)
    rep.add("solution_dim", eq.solution_dim)
    if eq.witness is not None:
        rep.add("F", formats.dump_rows(eq.witness))
        for sid, ok in zip(p.ids, eq.checks):
            rep.add(f"check.{sid}", ok)
    return OK


# tracks ----------------------------------------------------------------------


def _coords(c: tracks.TriComplex, p: tracks.NormalPattern) -> str:
    npat = formats.NpatFile.of(c, p, "")
    parts = [f"{t}:{','.join(map(str, x))}" for t, x in sorted(npat.corners.items())]
    parts += [f"{e}:{w}" for e, w in sorted(npat.bare.items())]
    return ";".join(parts) or "-"


def _dual_lines(c, p, rep: Report) -> tracks.DualGraph:
    dual = tracks.dual_graph(c, p)
    rep.add("tracks", len(dual.tracks))
    rep.add("regions", dual.regions.count)
    for k, vs in enumerate(dual.regions.vertex_sets):
        rep.add(f"region.{k}", vs)
    rep.add("dual_edges", [f"{a}-{b}" for a, b in sorted(tuple(sorted(e[:2])) for e in dual.graph.edges)])
    rep.add("flagged", len(dual.flagged))
    rep.add("is_tree", dual.is_tree)
    return dual


def cmd_tracks(args, rep: Report) -> int:
    c = _load(args.complex, "cx2")
    stem = _resolve(args.complex).stem
    if args.action == "h1":
        _no_figure(args)
        rep.add("h1", tracks.h1_rank(c))
        return OK
    if args.action == "dual":
        if not args.pattern:
            raise InputError("tracks dual needs a .npat file")
        npat = _load(args.pattern, "npat")
        if npat.over != stem:
            raise InputError(f"pattern is over {npat.over!r}, not {stem!r}")
        try:
            p = npat.pattern(c)
        except ParseError as exc:
            raise InputError(str(exc)) from None
        for k, comp in enumerate(tracks.pattern_components(c, p), start=1):
            rep.add(f"track.{k}", _coords(c, comp))
            rep.add(f"track.{k}.essential", tracks.is_essential(c, comp, args.essential_min).value)
        dual = _dual_lines(c, p, rep)
    else:
        budget = args.budget or 10**6
        try:
            p, report = tracks.maximal_essential_family(c, args.essential_min, args.weight_cap, budget)
        except tracks.BudgetExceeded as exc:
            rep.add("status", "BUDGET-EXCEEDED")
            rep.add("reason", exc)
            return FAILED
        rep.add("essential_min", args.essential_min)
        rep.add("weight_cap", args.weight_cap)
        rep.add("candidates", report.candidates)
        rep.add("non_separating", report.non_separating)
        rep.add("family", len(report.tracks))
        for k, t in enumerate(report.tracks, start=1):
            rep.add(f"member.{k}", _coords(c, t))
        rep.add("bounded", report.bounded)
        dual = _dual_lines(c, p, rep)
        _write(args.output, formats.dump_npat(formats.NpatFile.of(c, p, stem)), rep)

    def draw(path):
        from gogkit import plotting

        plotting.draw_complex(c, path, p, title=f"{len(dual.tracks)} tracks, {dual.regions.count} regions")

    _figure(args, rep, draw)
    return OK if dual.is_tree else FAILED


# quasi-edges -------------------------------------------------------------------


def _ids(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated vertex ids") from None


def _generators(t: quasiedges.BoundedTree, spec: str | None) -> list[dict]:
    """``swap:a:b`` subtree swaps or ``map:<file>`` vertex maps, separated by ``;``."""
    gens = []
    for part in (spec or "").split(";"):
        if not part:
            continue
        kind, _, rest = part.partition(":")
        if kind == "swap":
            a, b = _ids(rest.replace(":", ","), "--gens swap")
            try:
                gens.append(quasiedges.subtree_swap(t, a, b))
            except (ValueError, KeyError) as exc:
                raise InputError(f"bad generator {part!r}: {exc}") from None
        elif kind == "map":
            f = {}
            for no, toks in formats._lines(_resolve(rest).read_text()):
                if len(toks) != 2:
                    raise InputError(f"{rest}: line {no}: expected '<vertex> <image>'")
                f[int(toks[0])] = int(toks[1])
            if set(f) != set(t.vertices) or not set(f.values()) <= set(t.vertices):
                raise InputError(f"{rest}: map must send every tree vertex to a tree vertex")
            gens.append(f)
        else:
            raise InputError(f"unknown generator kind {kind!r}")
    return gens


def _clopen(t, args) -> quasiedges.QuasiEdge:
    if not args.clopen:
        raise InputError(f"qe {args.action} needs --clopen")
    try:
        return quasiedges.QuasiEdge.of(t, _ids(args.clopen, "--clopen"))
    except quasiedges.EmptyClopen as exc:
        raise InputError(str(exc)) from None


def _side(q: quasiedges.QuasiEdge) -> list:
    return list(q.canonical()[0])


def cmd_qe(args, rep: Report) -> int:
    ball = _load(args.tree, "tree")
    t = quasiedges.BoundedTree(ball)
    rep.add("boundary", len(t.boundary))
    if args.action in ("constant", "true-edge", "push"):
        _no_figure(args)
        q = _clopen(t, args)
        rep.add("side", _side(q))
        rep.add("constant", quasiedges.qe_constant(t, q))
        if args.action == "constant":
            rep.add("core", quasiedges.core(t, q))
            return OK
        if args.action == "true-edge":
            eid = quasiedges.true_edge_partition(t, q)
            rep.add("edge", eid)
            if eid is not None:
                rep.add("edge_ends", t.tree.edges[eid])
            return OK if eid is not None else FAILED
        gens = _generators(t, args.gens)
        if not gens:
            raise InputError("qe push needs --gens")
        for k, f in enumerate(gens, start=1):
            try:
                image = quasiedges.pushforward(t, f, q)
            except quasiedges.DegeneratePushforward as exc:
                rep.add(f"image.{k}", f"DEGENERATE ({exc})")
                continue
            rep.add(f"image.{k}", _side(image))
            rep.add(f"image.{k}.constant", quasiedges.qe_constant(t, image))
        return OK
    if args.action == "orbit":
        _no_figure(args)
        ng = quasiedges.orbit_nerve_graph(t, _clopen(t, args), _generators(t, args.gens), args.wordlen, args.threshold)
        _nerve_lines(ng, rep)
        return OK if ng.connected else FAILED
    # retree
    y = _retree_input(t, args, rep)
    try:
        result = quasiedges.retree(t, y, fill=args.fill, m=args.essential_min, weight_cap=args.weight_cap,
                                   budget=args.budget or 10**6)
    except quasiedges.RetreeError as exc:
        rep.add("status", "FAILED")
        rep.add("reason", exc)
        return FAILED
    rep.add("cones", result.cones)
    rep.add("family", len(result.family.tracks))
    rep.add("tree_nodes", len(result.tree))
    rep.add("tree_edges", [f"{a}-{b}" for a, b in sorted(tuple(sorted(e)) for e in result.tree.edges)])
    for node in sorted(result.positions):
        rep.add(f"position.{node}", result.positions[node])
    if result.fit is not None:
        rep.add("K", result.fit.K)
        rep.add("C", result.fit.C)
    for k, note in enumerate(result.notes, start=1):
        rep.add(f"note.{k}", note)

    def draw(path):
        from gogkit import plotting

        plotting.draw_retree(y, result, path)

    _figure(args, rep, draw)
    return OK


def _nerve_lines(ng: quasiedges.NerveGraph, rep: Report) -> None:
    rep.add("nodes", len(ng.graph))
    for i, q in enumerate(ng.quasi_edges):
        rep.add(f"node.{i}", _side(q))
    rep.add("edges", [f"{a}-{b}" for a, b in sorted(ng.graph.edges)])
    rep.add("degenerate", ng.degenerate)
    rep.add("connected", ng.connected)
    if ng.fit is not None:
        rep.add("K", ng.fit.K)
        rep.add("C", ng.fit.C)


def _retree_input(t, args, rep: Report) -> nx.Graph:
    """Y¹ from an orbit when --clopen and --gens are given, else from all edge partitions."""
    if args.clopen:
        ng = quasiedges.orbit_nerve_graph(t, _clopen(t, args), _generators(t, args.gens), args.wordlen, args.threshold)
        rep.add("source", "orbit")
    else:
        qes = []
        for eid in sorted(t.tree.edges):
            try:
                q = quasiedges.edge_partition(t, eid)
            except quasiedges.EmptyClopen:
                continue
            if q not in qes:
                qes.append(q)
        ng = quasiedges.nerve_graph(t, qes, args.threshold)
        rep.add("source", "edge-partitions")
    rep.add("y_nodes", len(ng.graph))
    rep.add("y_edges", ng.graph.number_of_edges())
    return ng.graph


# fixtures --------------------------------------------------------------------


def fixtures() -> list[tuple[str, str]]:
    """(file name, provenance) for every shipped fixture."""
    out = []
    for line in (fixture_dir() / "MANIFEST").read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            name, _, why = line.partition(" ")
            out.append((name, why.strip()))
    return out


def cmd_fixtures(args, rep: Report) -> int:
    _no_figure(args)
    listing = fixtures()
    for name, why in listing:
        rep.add(name, why)
    if args.extract:
        dest = Path(args.extract)
        dest.mkdir(parents=True, exist_ok=True)
        for name, _ in listing:
            (dest / name).write_text((fixture_dir() / name).read_text(encoding="utf-8"), encoding="utf-8")
        rep.add("extracted", args.extract)
    return OK


# parser ----------------------------------------------------------------------


def _globals(parser: argparse.ArgumentParser, top: bool) -> None:
    # the sub-parser copies default to SUPPRESS so a flag given before the
    # subcommand is not overwritten by the sub-parser's default
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=default(0), help="seed for randomised modes")
    parser.add_argument("--budget", type=int, default=default(None), help="work budget passed to the module")
    parser.add_argument("--format", choices=["text"], default=default("text"))
    parser.add_argument("--figure", default=default(None), metavar="PATH", help="also render a matplotlib figure")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gogkit", description=__doc__.splitlines()[0])
    _globals(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _globals(p, False)
        p.set_defaults(func=func)
        return p

    p = add("classify", cmd_classify, "bounded / line-like / bushy")
    p.add_argument("gog")
    p.add_argument("--oracle-radius", type=int, default=0, help="also classify from an expanded ball")
    p = add("reduce", cmd_reduce, "collapse index-1 edges")
    p.add_argument("gog")
    p.add_argument("-o", "--output")
    p = add("expand", cmd_expand, "expand a ball of the Bass-Serre tree")
    p.add_argument("gog")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--base")
    p.add_argument("-o", "--output")
    p = add("homogeneous", cmd_homogeneous, "finite-index test for every injection")
    p.add_argument("gog")
    p = add("rafts", cmd_rafts, "dimension filtration and rafts")
    p.add_argument("gog")
    p = add("check-star", cmd_check_star, "spanning condition on abelian vertex groups")
    p.add_argument("gog")
    p.add_argument("--integral", action="store_true", help="require the span to be the whole lattice")
    p = add("check-raft-hypotheses", cmd_check_raft_hypotheses, "reduced, no line rafts, connected crossing graphs")
    p.add_argument("gog")
    p.add_argument("--crossing", help="crossing verdicts for abstract graphs, e.g. v=CONNECTED,w=EMPTY")
    p = add("crossing", cmd_crossing, "crossing graph summary at abelian vertices")
    p.add_argument("gog")
    p.add_argument("--vertex")
    p.add_argument("--oracle", action="store_true", help="also run the lattice oracle")
    p.add_argument("--radius", type=int, default=30)
    p.add_argument("--cosets", type=int, default=3)
    p = add("patterns", cmd_patterns, "canonical form, cross-ratio, projective equivalence")
    p.add_argument("pattern")
    p.add_argument("other", nargs="?")
    p.add_argument("--grid-limit", type=int, default=patterns.GRID_LIMIT)
    p.add_argument("--trials", type=int, default=patterns.DEFAULT_TRIALS)
    p = add("tracks", cmd_tracks, "tracks on a triangulated 2-complex")
    p.add_argument("action", choices=["find", "dual", "h1"])
    p.add_argument("complex")
    p.add_argument("pattern", nargs="?")
    p.add_argument("--essential-min", type=int, default=1)
    p.add_argument("--weight-cap", type=int, default=3)
    p.add_argument("-o", "--output")
    p = add("qe", cmd_qe, "quasi-edges of a finite tree")
    p.add_argument("action", choices=["constant", "true-edge", "push", "orbit", "retree"])
    p.add_argument("tree")
    p.add_argument("--clopen", help="boundary vertex ids on one side, comma-separated")
    p.add_argument("--gens", help="generators: swap:a:b or map:<file>, separated by ';'")
    p.add_argument("--wordlen", type=int, default=3)
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("--fill", type=int, default=quasiedges.DEFAULT_FILL)
    p.add_argument("--essential-min", type=int, default=2)
    p.add_argument("--weight-cap", type=int, default=3)
    p = add("fixtures", cmd_fixtures, "list the shipped fixture corpus")
    p.add_argument("--extract", metavar="DIR", help="copy the fixtures into DIR")
    return parser


def run(argv) -> tuple[int, str]:
    """Run one command; returns (exit code, report text)."""
    err = io.StringIO()
    try:
        with redirect_stderr(err), redirect_stdout(err):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), err.getvalue()
    rep = Report(args.command if args.command not in ("tracks", "qe") else f"{args.command} {args.action}")
    try:
        code = args.func(args, rep)
    except (InputError, ParseError) as exc:
        return BAD_INPUT, f"error={exc}\n"
    return code, rep.text()


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code != BAD_INPUT else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
