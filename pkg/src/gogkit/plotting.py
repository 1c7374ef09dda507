"""Matplotlib figures for the CLI's ``--figure`` option."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from gogkit import tracks  # noqa: E402
from gogkit.bassserre import TreeBall  # noqa: E402
from gogkit.gog import INF, ABELIAN, GraphOfGroups  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def layered_layout(t: TreeBall) -> dict:
    """Depth down the y axis, leaves spread evenly along x in DFS order."""
    kids: dict = {v: [] for v in t.depth}
    for a, b in sorted(t.edges.values()):
        kids[a].append(b)
    pos, slot = {}, [0]

    def place(v):
        if not kids[v]:
            x = slot[0]
            slot[0] += 1
        else:
            xs = [place(c) for c in kids[v]]
            x = (xs[0] + xs[-1]) / 2
        pos[v] = (x, -t.depth[v])
        return x

    place(t.root)
    return pos


def draw_tree(t: TreeBall, path, title: str | None = None):
    g = nx.Graph(list(t.edges.values()))
    g.add_nodes_from(t.depth)
    pos = layered_layout(t)
    fig, ax = plt.subplots(figsize=(max(4, 0.25 * len(g)), 4))
    colours = ["tab:red" if v in t.truncated else "tab:blue" for v in g.nodes]
    nx.draw_networkx(g, pos, ax=ax, node_size=40, node_color=colours, with_labels=len(g) <= 40, font_size=6)
    ax.set_title(title or f"{len(g)} vertices, {len(t.truncated)} truncated")
    ax.axis("off")
    _save(fig, path)


def draw_gog(g: GraphOfGroups, path, title: str | None = None):
    mg = nx.MultiGraph()
    mg.add_nodes_from(sorted(g.vertices))
    labels = {}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        a, b = (end.vertex for end in e.ends)
        mg.add_edge(a, b, key=eid)
        idx = ["inf" if g.index(eid, k) == INF else str(int(g.index(eid, k))) for k in (1, 2)]
        labels[(a, b)] = labels.get((a, b), "") + f"{eid}:{idx[0]}/{idx[1]} "
    pos = nx.circular_layout(sorted(g.vertices)) if len(g.vertices) > 1 else {v: (0, 0) for v in g.vertices}
    fig, ax = plt.subplots(figsize=(5, 4))
    size = "rank" if g.regime == ABELIAN else "dim"
    nx.draw_networkx_nodes(mg, pos, ax=ax, node_color="tab:orange")
    nx.draw_networkx_labels(mg, pos, {v: f"{v}\n{size} {s.dim}" for v, s in g.vertices.items()}, ax=ax, font_size=7)
    simple = nx.Graph([(a, b) for a, b in labels if a != b])
    nx.draw_networkx_edges(simple, pos, ax=ax)
    nx.draw_networkx_edge_labels(simple, pos, {k: v.strip() for k, v in labels.items() if k[0] != k[1]}, ax=ax, font_size=7)
    loops = [f"{v}: {lab.strip()}" for (v, w), lab in labels.items() if v == w]
    ax.set_title(title or ("loops " + "; ".join(loops) if loops else g.regime), fontsize=8)
    ax.axis("off")
    _save(fig, path)


def _arc_segments(c: tracks.TriComplex, p: tracks.NormalPattern, pos) -> list:
    """Straight segments for every normal arc, ready to draw over the 1-skeleton."""
    weights = tracks.edge_weights(c, p)
    segs = []

    def point(key, w, v, j):
        idx = j if v == key[0] else w - 1 - j
        s = (idx + 1) / (w + 1)
        (x0, y0), (x1, y1) = pos[key[0]], pos[key[1]]
        return (x0 + s * (x1 - x0), y0 + s * (y1 - y0))

    for (_, tri), corners in zip(c.triangles, p.corners):
        for i, v in enumerate(tri):
            a, b = (tri[k] for k in range(3) if k != i)
            ka, kb = tracks.edge_key(v, a), tracks.edge_key(v, b)
            for j in range(corners[i]):
                segs.append((point(ka, weights[ka], v, j), point(kb, weights[kb], v, j)))
    return segs


def draw_complex(c: tracks.TriComplex, path, p: tracks.NormalPattern | None = None, title: str | None = None):
    g = c.graph()
    pos = nx.kamada_kawai_layout(g) if len(g) > 2 else nx.circular_layout(g)
    fig, ax = plt.subplots(figsize=(5, 5))
    for _, tri in c.triangles:
        ax.fill(*zip(*(pos[v] for v in tri)), color="tab:gray", alpha=0.15)
    nx.draw_networkx(g, pos, ax=ax, node_size=60, font_size=6, edge_color="tab:gray")
    if p is not None:
        for (x0, y0), (x1, y1) in _arc_segments(c, p, pos):
            ax.plot([x0, x1], [y0, y1], color="tab:red", lw=1.5)
    ax.set_title(title or f"{len(c.triangles)} triangles", fontsize=8)
    ax.axis("off")
    _save(fig, path)


def draw_retree(y: nx.Graph, result, path):
    """Y¹ on the left, the dual tree on the right."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 5))
    nx.draw_networkx(y, nx.kamada_kawai_layout(y) if len(y) > 2 else None, ax=left, node_size=40, font_size=6)
    left.set_title(f"Y1: {len(y)} nodes, {result.cones} cones", fontsize=8)
    t = result.tree
    layout = nx.kamada_kawai_layout(t) if len(t) > 2 else nx.circular_layout(t)
    nx.draw_networkx(t, layout, ax=right, node_size=60, font_size=6, node_color="tab:green")
    fit = f"K={result.fit.K} C={result.fit.C}" if result.fit else "no fit"
    right.set_title(f"dual tree: {len(t)} nodes, {fit}", fontsize=8)
    for ax in (left, right):
        ax.axis("off")
    _save(fig, path)
