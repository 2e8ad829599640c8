"""Random generators shared by the property suites."""
import random
from functools import lru_cache

import networkx as nx
from hypothesis import strategies as st

from tightembed.lattice import (boolean_lattice, chain, dual, interval, m_n, product,
                                subspace_lattice)
from tightembed.matroid import labeled_graph
from tightembed.pls import build_pls, plot_graph


def relabel_pls(p, mapping):
    return build_pls([mapping[x] for x in p.points],
                     [tuple(mapping[x] for x in l) for l in p.lines])


def ints_pls(p, start=1):
    """Same PLS on the integers start, start+1, ..."""
    return relabel_pls(p, {x: start + k for k, x in enumerate(p.points)})


def _add_line(lines, t):
    s = frozenset(t)
    if len(s) == 3 and all(len(s & l) <= 1 for l in lines):
        lines.append(s)
        return True
    return False


@st.composite
def random_pls(draw, max_points=10, max_lines=8):
    n = draw(st.integers(3, max_points))
    k = draw(st.integers(0, max_lines))
    lines = []
    for _ in range(k):
        _add_line(lines, draw(st.lists(st.integers(1, n), min_size=3, max_size=3, unique=True)))
    return build_pls(range(1, n + 1), [tuple(sorted(l)) for l in lines])


def cycle_pls(n, start=1):
    js = list(range(start, start + n))
    ms = list(range(start + n, start + 2 * n))
    return build_pls(js + ms, [(js[i], ms[i], js[(i + 1) % n]) for i in range(n)])


@st.composite
def cyclic_pls(draw, max_extra=4, max_points=12):
    """A cycle of 3 to 5 lines plus random extra lines on old or new points."""
    n = draw(st.integers(3, 5))
    p = cycle_pls(n)
    lines = [frozenset(l) for l in p.lines]
    top = max(2 * n, draw(st.integers(2 * n, max_points)))
    for _ in range(draw(st.integers(0, max_extra))):
        _add_line(lines, draw(st.lists(st.integers(1, top), min_size=3, max_size=3, unique=True)))
    pts = set(range(1, 2 * n + 1)) | {x for l in lines for x in l}
    return build_pls(pts, [tuple(sorted(l)) for l in lines])


@st.composite
def sparse_pls(draw, max_lines=7):
    """Every line brings at least one point not seen before."""
    lines = []
    seen = []
    nxt = 1
    for _ in range(draw(st.integers(1, max_lines))):
        old = draw(st.integers(0, min(2, len(seen))))
        pick = draw(st.lists(st.sampled_from(seen), min_size=old, max_size=old,
                             unique=True)) if old else []
        new = list(range(nxt, nxt + 3 - len(pick)))
        if _add_line(lines, pick + new):
            nxt += len(new)
            seen += new
    return build_pls(range(1, nxt), [tuple(sorted(l)) for l in lines])


@st.composite
def acyclic_pls(draw, max_points=10):
    """Each line meets the earlier lines in at most one point."""
    lines = []
    seen = []
    nxt = 1
    while nxt + 2 <= max_points and draw(st.booleans()) or not lines:
        old = draw(st.sampled_from(seen)) if seen and draw(st.booleans()) else None
        new = list(range(nxt, nxt + (2 if old is not None else 3)))
        if nxt + len(new) - 1 > max_points:
            break
        lines.append(tuple(sorted(([old] if old is not None else []) + new)))
        nxt += len(new)
        seen += new
    extra = draw(st.integers(0, max(0, max_points + 1 - nxt)))
    return build_pls(range(1, nxt + extra), lines)


@st.composite
def small_graph(draw, min_vertices=3, max_vertices=6, max_edges=12, connected=False):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    es = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges))
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(es)
    if connected:
        for a in range(1, n):
            if not nx.has_path(g, 0, a) and g.number_of_edges() < max_edges:
                g.add_edge(draw(st.sampled_from([v for v in range(a) if nx.has_path(g, 0, v)])), a)
        g = g.subgraph(nx.node_connected_component(g, 0)).copy()
    return g


def to_labeled(g):
    return labeled_graph([(u, v, k + 1) for k, (u, v) in enumerate(sorted(g.edges))],
                         vertices=sorted(g.nodes))


@st.composite
def qimp_pls(draw, max_vertices=5, max_edges=7):
    """Plot a point on every edge of a random graph with at least one edge."""
    g = draw(small_graph(min_vertices=2, max_vertices=max_vertices, max_edges=max_edges))
    if g.number_of_edges() == 0:
        g.add_edge(0, 1)
    g.remove_nodes_from([v for v in list(g.nodes) if g.degree(v) == 0])
    return ints_pls(plot_graph(g))


@st.composite
def ump_pls(draw):
    """QIMPs glued tree-wise, each new part sharing one point with the union."""
    p = draw(qimp_pls(4, 5))
    for _ in range(draw(st.integers(0, 2))):
        q = ints_pls(draw(qimp_pls(4, 4)), start=len(p.points) + 1)
        a = draw(st.sampled_from(p.points))
        b = draw(st.sampled_from(q.points))
        q = relabel_pls(q, {x: (a if x == b else x) for x in q.points})
        p = build_pls(set(p.points) | set(q.points), list(p.lines) + list(q.lines))
        p = ints_pls(p)
    return p


def any_pls():
    return st.one_of(random_pls(), random_pls(max_points=8, max_lines=12), cyclic_pls(),
                     sparse_pls(), qimp_pls(), ump_pls())


@st.composite
def wheely_graph(draw):
    """Clique-sums (on a vertex or an edge) of wheels and triangles."""
    def piece():
        k = draw(st.integers(2, 5))
        g = nx.wheel_graph(k + 1) if k >= 3 else nx.complete_graph(3)
        return g
    g = piece()
    for _ in range(draw(st.integers(0, 2))):
        h = piece()
        off = g.number_of_nodes()
        h = nx.relabel_nodes(h, {v: v + off for v in h.nodes})
        if draw(st.booleans()):
            a = draw(st.sampled_from(sorted(g.nodes)))
            b = draw(st.sampled_from(sorted(h.nodes)))
            h = nx.relabel_nodes(h, {b: a})
        else:
            ge = draw(st.sampled_from(sorted(g.edges)))
            he = draw(st.sampled_from(sorted(h.edges)))
            h = nx.relabel_nodes(h, {he[0]: ge[0], he[1]: ge[1]})
        g = nx.compose(g, h)
        g = nx.convert_node_labels_to_integers(g, ordering="sorted")
    return g


# ------------------------------------------------------------- lattices

_POOL = {
    "c2": lambda: chain(2), "c3": lambda: chain(3), "c4": lambda: chain(4),
    "m3": lambda: m_n(3), "m4": lambda: m_n(4), "b2": lambda: boolean_lattice(2),
    "lm2": lambda: subspace_lattice(2), "lm3": lambda: subspace_lattice(3),
}
THIN_POOL = ("c2", "c3", "c4", "m3", "b2", "lm2")


@lru_cache(maxsize=None)
def lattice_from_recipe(recipe):
    """recipe = (names, op, pick): product of pool lattices, then optionally
    an interval or the dual."""
    names, op, pick = recipe
    L = _POOL[names[0]]()
    for nm in names[1:]:
        L = product(L, _POOL[nm]())
    if op == "dual":
        L = dual(L)
    elif op == "interval":
        rng = random.Random(pick)
        a = rng.choice(L.labels)
        ups = [b for b in L.labels if L.leq(a, b)]
        L = interval(L, a, rng.choice(ups))
    return L


@st.composite
def modular_recipe(draw, pool=tuple(_POOL), max_factors=3, max_size=64):
    names = [draw(st.sampled_from(pool))]
    size = len(_POOL[names[0]]().labels)
    for _ in range(draw(st.integers(0, max_factors - 1))):
        nm = draw(st.sampled_from(pool))
        s = len(_POOL[nm]().labels)
        if size * s > max_size:
            break
        names.append(nm)
        size *= s
    op = draw(st.sampled_from(["none", "dual", "interval"]))
    return (tuple(names), op, draw(st.integers(0, 10 ** 6)) if op == "interval" else 0)


# ------------------------------------------------------------- oracles

def oracle_cycles(p):
    """Cycles straight from the definition, as (frozenset of lines, frozenset of junctions)."""
    lines = [frozenset(l) for l in p.lines]

    def line(a, b):
        for l in lines:
            if a in l and b in l:
                return l
        return None

    def path_ok(seq):
        ls = [line(a, b) for a, b in zip(seq, seq[1:])]
        if any(l is None for l in ls) or len(set(ls)) != len(ls):
            return None
        for i in range(len(ls)):
            for j in range(i + 1, len(ls)):
                if bool(ls[i] & ls[j]) != (j == i + 1):
                    return None
        return ls

    found = set()

    def dfs(seq):
        ls = path_ok(seq)
        if ls is None:
            return
        if len(seq) >= 3:
            cl = line(seq[-1], seq[0])
            if cl is not None and cl not in ls:
                star = set().union(*ls)
                (q,) = cl - {seq[-1], seq[0]}
                if q not in star and len(star | {q}) == 2 * len(seq):
                    found.add((frozenset(ls + [cl]), frozenset(seq)))
        for l in lines:
            if seq[-1] in l:
                for b in l:
                    if b not in seq:
                        dfs(seq + [b])

    for a in p.points:
        dfs([a])
    return found


def oracle_circuits(m):
    """Minimal subsets whose columns XOR to zero, by brute force."""
    import itertools
    dep = []
    g = list(m.ground)
    for r in range(1, len(g) + 1):
        for S in itertools.combinations(g, r):
            x = 0
            for e in S:
                x ^= m.col[e]
            if x == 0 and not any(d <= set(S) for d in dep):
                dep.append(set(S))
    return {frozenset(d) for d in dep}


def oracle_rank(m, X):
    """Size of the largest subset with no zero XOR sub-combination."""
    import itertools
    X = list(X)
    for r in range(len(X), -1, -1):
        for S in itertools.combinations(X, r):
            vecs = [m.col[e] for e in S]
            ok = True
            for k in range(1, r + 1):
                for T in itertools.combinations(vecs, k):
                    x = 0
                    for v in T:
                        x ^= v
                    if x == 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return r
    return 0
