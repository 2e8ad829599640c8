"""Building graphs that model PLSes: triangle gluing, standard graphs of
QIMPs and UMPs, path extension and augmented UMPs."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (BoundExceeded, EdgesNotIncident, InputError, ModeViolation,
                     NotAQimp, PathCollision, TheoremViolation)
from .lattice import label_key, sort_labels
from .matroid import (Model, check_circuit_friendly, check_cycle_preserving,
                      check_line_pres, cycle_pls_rank, graph_model, is_wheel,
                      labeled_graph)
from .pls import (PLS, add_path, classify_pls, components, enumerate_cycles,
                  is_qimp, make_cycle, plotted_points, recognize_augmented_ump,
                  replay_history, tree_decomposition)

DEFAULT_GLUE_LINE_BOUND = 16


# ------------------------------------------------------------- naive gluing

@dataclass(frozen=True)
class GlueResult:
    model: Model | None
    flips: tuple            # orientation bits of the successful gluing
    explored: int           # complete gluings examined

    @property
    def exhausted(self):
        return self.model is None


def _glue_order(p):
    return sorted(p.points, key=lambda x: (-p.degree(x), label_key(x)))


def iter_glue_models(p, line_bound=DEFAULT_GLUE_LINE_BOUND, stats=None):
    """Yield (flips, model) for every gluing of line triangles that is not a dud.

    Each line becomes its own triangle; the copies of a point are then glued
    edge to edge, each copy after the first in one of two orientations.
    Gluings come out in increasing binary order of the flip vector.  Only
    identifications forced by shared points are made.
    """
    if len(p.lines) > line_bound:
        raise BoundExceeded(f"{len(p.lines)} lines exceed the gluing bound {line_bound}")
    copies = {x: [] for x in p.points}
    for k, l in enumerate(p.lines):
        a, b, c = l
        copies[a].append(((k, 0), (k, 1)))
        copies[b].append(((k, 1), (k, 2)))
        copies[c].append(((k, 2), (k, 0)))
    order = [x for x in _glue_order(p) if len(copies[x]) > 1]
    stats = stats if stats is not None else {}
    stats.setdefault("explored", 0)

    def find(par, v):
        while par.get(v, v) != v:
            v = par[v]
        return v

    def dud(par):
        seen = {}
        for x, cs in copies.items():
            for u, v in cs:
                ru, rv = find(par, u), find(par, v)
                if ru == rv:
                    return True
                key = frozenset((ru, rv))
                if seen.setdefault(key, x) != x:
                    return True
        return False

    def rec(i, par, flips):
        if i == len(order):
            stats["explored"] += 1
            yield flips, _glued_model(p, copies, par, find)
            return
        cs = copies[order[i]]
        # every copy after the first may be glued straight or flipped
        for mask in range(1 << (len(cs) - 1)):
            new = dict(par)
            for j, (u, v) in enumerate(cs[1:]):
                u0, v0 = cs[0]
                a, b = (v, u) if mask >> j & 1 else (u, v)
                for s, t in ((u0, a), (v0, b)):
                    rs, rt = find(new, s), find(new, t)
                    if rs != rt:
                        new[max(rs, rt)] = min(rs, rt)
            if dud(new):
                continue
            bits = tuple(mask >> j & 1 for j in range(len(cs) - 1))
            yield from rec(i + 1, new, flips + bits)

    yield from rec(0, {}, ())


def _glued_model(p, copies, par, find):
    names = {}
    triples = []
    for x in p.points:
        if copies[x]:
            u, v = copies[x][0]
            ru, rv = find(par, u), find(par, v)
            for r in (ru, rv):
                names.setdefault(r, None)
            triples.append((ru, rv, x))
    # vertices renamed 0.. in order of their least triangle corner
    ren = {r: i for i, r in enumerate(sorted(names))}
    out = [(ren[u], ren[v], x) for u, v, x in triples]
    nxt = len(ren)
    for x in p.points:
        if not copies[x]:
            out.append((nxt, nxt + 1, x))
            nxt += 2
    g = labeled_graph(out)
    return graph_model(p, g)


def naive_glue_search(p, require_rank=False, line_bound=DEFAULT_GLUE_LINE_BOUND):
    """First line-preserving graph model found by gluing (lowest flip vector),
    optionally restricted to rank-models."""
    stats = {}
    for flips, m in iter_glue_models(p, line_bound, stats):
        if not require_rank or m.graph.mrk == p.rank:
            return GlueResult(m, flips, stats["explored"])
    return GlueResult(None, (), stats["explored"])


# ------------------------------------------------------------- standard graphs

def standard_graph_qimp(p, tag=None):
    """Single-hub graph of a QIMP: unplotted points become spokes at the hub,
    plotted points the rims between their line's other two points."""
    if not is_qimp(p):
        raise NotAQimp("some line has no quasi-isolated point")
    hub = "0" if tag is None else f"0@{tag}"

    def vx(x):
        return x if tag is None else (x, tag)
    plot = plotted_points(p)
    plotted = set(plot.values())
    triples = [(hub, vx(x), x) for x in p.points if x not in plotted]
    for l, m in plot.items():
        a, b = (x for x in l if x != m)
        triples.append((vx(a), vx(b), m))
    return graph_model(p, labeled_graph(triples))


@dataclass(frozen=True)
class UmpModel:
    model: Model
    part_ranks: tuple       # rk of each decomposition part
    part_vertices: tuple    # |V| of each part's standard graph


def _merge_edge(g_edges, old, new):
    """Rename the endpoints of edge ``new`` onto those of edge ``old``."""
    a, b = sort_labels(old)
    c, d = sort_labels(new)
    return {c: a, d: b}


def standard_graph_ump(p):
    """Standard graphs of the tree-decomposition parts, merged along the
    edges of the glue points.  Rank bookkeeping and cycle / circuit checks
    are re-done on the result."""
    td = tree_decomposition(p)
    edges = {}
    ranks, sizes = [], []
    n_trees = 0
    for k, (part, glue) in enumerate(zip(td.parts, td.glue_points)):
        sub = standard_graph_qimp(part, tag=k).graph
        ranks.append(part.rank)
        sizes.append(len(sub.vertices))
        ren = {}
        if glue is None:
            n_trees += 1
        else:
            ren = _merge_edge(edges, edges[glue], sub.edge_of[glue])
        for lab, (u, v) in sub.edges:
            if lab == glue:
                continue
            edges[lab] = (ren.get(u, u), ren.get(v, v))
    g = labeled_graph([(u, v, lab) for lab, (u, v) in edges.items()])
    model = graph_model(p, g)
    t = len(td.parts)
    # ranks and vertex counts drop by one per glued edge
    merges = t - n_trees
    if p.rank != sum(ranks) - merges:
        raise TheoremViolation("PLS rank is not additive over the tree decomposition")
    if len(g.vertices) != sum(sizes) - 2 * merges:
        raise TheoremViolation("vertex count of the merged graph is off")
    if g.mrk != sum(s - 1 for s in sizes) - merges or g.mrk != p.rank:
        raise TheoremViolation(f"standard graph has mrk {g.mrk}, PLS rank {p.rank}")
    if not check_cycle_preserving(model).ok:
        raise TheoremViolation("standard graph of a UMP is not cycle-preserving")
    if not check_circuit_friendly(model).ok:
        raise TheoremViolation("standard graph of a UMP is not circuit-friendly")
    return UmpModel(model, tuple(ranks), tuple(sizes))


# ------------------------------------------------------------- adding paths

@dataclass(frozen=True)
class Extension:
    model: Model
    rho: int                # PLS rank increase
    mu: int                 # matroid rank increase
    circuit_friendly: bool | None   # re-checked only when it is guaranteed


def _shared_vertex(g, a, b):
    common = set(g.edge_of[a]) & set(g.edge_of[b])
    return next(iter(common)) if len(common) == 1 else None


def extend_graph_with_path(model, path, midpoints=None, check_friendly=True):
    """Add the path [p_1, ..., p_n] to the PLS and a dented wheel to the graph.

    p_1 and p_n must already be points whose edges meet in a vertex 0.  The
    inner points become new spokes at 0 and the midpoints rims between
    consecutive spoke ends.
    """
    path = list(path)
    if len(path) < 2:
        raise InputError("a path needs at least two points")
    p, g = model.pls, model.graph
    x, y = path[0], path[-1]
    ex, ey = model.psi[x], model.psi[y]
    hub = _shared_vertex(g, ex, ey)
    if hub is None:
        raise EdgesNotIncident(f"edges of {x!r} and {y!r} are not incident")
    res = add_path(p, x, y, inner=path[1:-1], midpoints=midpoints)
    new_pts = list(res.path[1:-1]) + list(res.midpoints)
    if set(new_pts) & set(g.labels):
        raise PathCollision("new point names clash with edge labels")
    (bx,) = set(g.edge_of[ex]) - {hub}
    (by,) = set(g.edge_of[ey]) - {hub}
    if len(path) == 2 and frozenset((bx, by)) in g.label_of:
        raise PathCollision("the closing edge already exists")
    beta = [bx] + [("b", z) for z in res.path[1:-1]] + [by]
    if set(beta[1:-1]) & set(g.vertices):
        raise PathCollision("new vertex names clash")
    triples = [(u, v, lab) for lab, (u, v) in g.edges]
    triples += [(hub, b, z) for b, z in zip(beta[1:-1], res.path[1:-1])]
    triples += [(beta[i], beta[i + 1], q) for i, q in enumerate(res.midpoints)]
    g2 = labeled_graph(triples)
    psi = dict(model.psi)
    psi.update({z: z for z in new_pts})
    m2 = graph_model(res.pls, g2, psi)
    rho = res.pls.rank - p.rank
    mu = g2.mrk - g.mrk
    if rho != len(path) - 2 or mu != rho:
        raise TheoremViolation(f"rank bookkeeping failed: rho={rho}, mu={mu}")
    if not check_line_pres(m2):
        raise TheoremViolation("extended graph is not line-preserving")
    friendly = None
    if check_friendly and len(path) >= 3 and p.line_of(x, y) is not None:
        if check_circuit_friendly(model).ok:
            friendly = check_circuit_friendly(m2).ok
            if not friendly:
                raise TheoremViolation("path extension lost circuit-friendliness")
    return Extension(m2, rho, mu, friendly)


# ------------------------------------------------------------- augmented UMPs

def strip_history(p, history):
    """Base PLS obtained by deleting the history's links, newest first."""
    cur = p
    for st in reversed(history):
        drop = set(st.link[1:-1]) | set(st.midpoints)
        lines = [l for l in cur.lines if not set(l) & drop]
        cur = cur.restrict_lines(lines, points=[x for x in cur.points if x not in drop])
    return cur


@dataclass(frozen=True)
class AugmentedModel:
    model: Model
    base: PLS
    history: tuple
    mode: str


def model_augmented_ump(p, history=None, mode="type1"):
    """Line-preserving rank-modeling graph of an augmented UMP, built from the
    standard graph of its base by one path extension per link.

    mode "type1": every link must be of type 1; the result is circuit-friendly.
    mode "small_girth": a type-2 link is allowed when its cycle has at most 4
    lines; the cycle's edges are then checked to form a wheel, which makes the
    two midpoint edges incident rims.
    """
    if mode not in ("type1", "small_girth"):
        raise InputError(f"unknown mode {mode!r}")
    if history is None:
        rec = recognize_augmented_ump(p, type1_only=(mode == "type1"))
        if not rec.yes:
            raise ModeViolation("not an augmented UMP in the requested mode")
        base, history = rec.base, rec.history
    else:
        history = tuple(history)
        base = strip_history(p, history)
        if replay_history(base, history) != p:
            raise InputError("history does not rebuild the PLS")
    if mode == "type1" and any(st.kind != 1 for st in history):
        raise ModeViolation("type1 mode accepts only type-1 links")
    model = standard_graph_ump(base).model
    for st in history:
        cur = model.pls
        if st.kind == 2:
            c = make_cycle(cur, st.cycle)
            if c is None:
                raise InputError(f"{st.cycle!r} is not a cycle")
            if c.n > 4:
                raise ModeViolation(f"type-2 link on a cycle with {c.n} lines")
            edges = model.image(c.support)
            if not is_wheel(model.graph, edges):
                raise TheoremViolation("a short cycle of a line-preserving model is not a wheel")
            a, b = st.link[0], st.link[-1]
            if _shared_vertex(model.graph, model.psi[a], model.psi[b]) is None:
                raise EdgesNotIncident(f"midpoint edges of {a!r} and {b!r} do not meet")
        model = extend_graph_with_path(model, st.link, st.midpoints,
                                       check_friendly=(mode == "type1")).model
    if model.graph.mrk != p.rank:
        raise TheoremViolation("augmented model is not a rank-model")
    if mode == "type1" and not check_circuit_friendly(model).ok:
        raise TheoremViolation("type-1 augmentation is not circuit-friendly")
    return AugmentedModel(model, base, history, mode)


def cycle_rank_gap(model, c):
    """rk(C*, C-lines) - mrk(psi(C*)) for a cycle c of the model's PLS."""
    return cycle_pls_rank(c) - model.matroid.rank(model.image(c.support))


def is_line_pres_rank_model(model):
    return check_line_pres(model) and model.matroid.mrk == model.pls.rank


def find_rank_modeling_graph(p):
    """Try the constructive routes first, then the gluing search."""
    prof = classify_pls(p)
    if prof.ump:
        return standard_graph_ump(p).model
    for mode in ("type1", "small_girth"):
        try:
            return model_augmented_ump(p, mode=mode).model
        except (ModeViolation, EdgesNotIncident):
            pass
    return naive_glue_search(p, require_rank=True).model
