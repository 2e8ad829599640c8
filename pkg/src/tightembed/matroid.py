"""Binary and graphic matroids, modeling predicates, wheels and graphicness."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from . import _kernels as K
from .errors import (BoundExceeded, GroundOverlap, InputError, NotABijection,
                     NotLinePreserving, NotSimple, TheoremViolation)
from .lattice import label_key, sort_labels
from .pls import classify_pls, enumerate_cycles

DEFAULT_GROUND_BOUND = 16
DEFAULT_GRAPHIC_BOUND = 12


def popcount(v):
    return bin(v).count("1")


def _reduce(basis, v):
    """Reduce v against an echelon basis {pivot_bit: row}."""
    for bit, row in basis.items():
        if v >> bit & 1:
            v ^= row
    return v


def _insert(basis, v):
    v = _reduce(basis, v)
    if not v:
        return False
    bit = v.bit_length() - 1
    for b, row in list(basis.items()):
        if row >> bit & 1:
            basis[b] = row ^ v
    basis[bit] = v
    return True


def gf2_rank(vectors):
    return K.gf2_rank(list(vectors))


# ------------------------------------------------------------- binary matroids

@dataclass(frozen=True)
class BinaryMatroid:
    """Ground elements with nonzero GF(2) columns stored as int bitmasks."""
    ground: tuple
    columns: tuple        # columns[i] belongs to ground[i]

    @cached_property
    def col(self):
        return dict(zip(self.ground, self.columns))

    @property
    def dim(self):
        return max((c.bit_length() for c in self.columns), default=0)

    def rank(self, X=None):
        X = self.ground if X is None else X
        return gf2_rank(self.col[x] for x in X)

    @property
    def mrk(self):
        return self.rank()

    def is_simple(self):
        return all(self.columns) and len(set(self.columns)) == len(self.columns)

    def closure(self, X):
        X = list(X)
        basis = {}
        for x in X:
            _insert(basis, self.col[x])
        return frozenset(e for e in self.ground if _reduce(basis, self.col[e]) == 0)

    def is_independent(self, X):
        X = list(X)
        return self.rank(X) == len(X)

    def is_circuit(self, X):
        X = list(X)
        acc = 0
        for x in X:
            acc ^= self.col[x]
        return bool(X) and acc == 0 and self.rank(X) == len(X) - 1

    def restrict(self, X):
        keep = set(X)
        g = [e for e in self.ground if e in keep]
        return BinaryMatroid(tuple(g), tuple(self.col[e] for e in g))

    def circuits(self, X=None, bound=DEFAULT_GROUND_BOUND):
        """All circuits inside X as frozensets, found as minimal supports of
        the GF(2) kernel."""
        X = list(self.ground if X is None else X)
        if len(X) > bound:
            raise BoundExceeded(f"ground of size {len(X)} exceeds circuit bound {bound}")
        basis = {}
        owners = {}
        fund = []
        for x in X:
            v = self.col[x]
            # track which elements combine to each reduced vector
            comb = {x}
            for bit, row in sorted(basis.items(), reverse=True):
                if v >> bit & 1:
                    v ^= row
                    comb ^= owners[bit]
            if v:
                bit = v.bit_length() - 1
                for b in list(basis):
                    if basis[b] >> bit & 1:
                        basis[b] ^= v
                        owners[b] = owners[b] ^ comb
                basis[bit] = v
                owners[bit] = comb
            else:
                fund.append(frozenset(comb))
        out = set()
        for r in range(1, len(fund) + 1):
            for combo in itertools.combinations(fund, r):
                s = frozenset()
                for f in combo:
                    s = s ^ f
                if s and self.rank(s) == len(s) - 1:
                    out.add(s)
        return sorted(out, key=lambda c: (len(c), label_key(sort_labels(c))))

    def components(self):
        """Connected components (elements sharing a circuit)."""
        uf = {e: e for e in self.ground}

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x
        basis = {}
        owners = {}
        for x in self.ground:
            v = self.col[x]
            comb = {x}
            for bit, row in sorted(basis.items(), reverse=True):
                if v >> bit & 1:
                    v ^= row
                    comb ^= owners[bit]
            if v:
                bit = v.bit_length() - 1
                for b in list(basis):
                    if basis[b] >> bit & 1:
                        basis[b] ^= v
                        owners[b] = owners[b] ^ comb
                basis[bit] = v
                owners[bit] = comb
            else:
                comb = list(comb)
                for y in comb[1:]:
                    uf[find(y)] = find(comb[0])
        groups = {}
        for e in self.ground:
            groups.setdefault(find(e), []).append(e)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: self.ground.index(g[0]))

    def coordinates(self, first=None):
        """Equivalent matroid re-expressed in a basis chosen among its own
        elements (``first`` goes to bit 0 when given)."""
        order = list(self.ground)
        if first is not None:
            order.remove(first)
            order.insert(0, first)
        basis_elems = []
        vecs = []
        for e in order:
            if gf2_rank(vecs + [self.col[e]]) > len(vecs):
                vecs.append(self.col[e])
                basis_elems.append(e)
        # solve each column in terms of the chosen basis
        cols = []
        for e in self.ground:
            cols.append(_solve(vecs, self.col[e]))
        return BinaryMatroid(self.ground, tuple(cols)), tuple(basis_elems)


def _solve(vecs, target):
    """Bitmask of coefficients c with XOR_i c_i vecs[i] == target."""
    basis = {}
    owners = {}
    for i, v in enumerate(vecs):
        comb = 1 << i
        for bit, row in sorted(basis.items(), reverse=True):
            if v >> bit & 1:
                v ^= row
                comb ^= owners[bit]
        bit = v.bit_length() - 1
        for b in list(basis):
            if basis[b] >> bit & 1:
                basis[b] ^= v
                owners[b] ^= comb
        basis[bit] = v
        owners[bit] = comb
    comb = 0
    t = target
    for bit, row in sorted(basis.items(), reverse=True):
        if t >> bit & 1:
            t ^= row
            comb ^= owners[bit]
    if t:
        raise InputError("target not in span")
    return comb


def binary_matroid(columns):
    """From a mapping element -> int bitmask or bit string (bit 0 first)."""
    g = sort_labels(columns)
    cols = []
    for e in g:
        v = columns[e]
        if isinstance(v, str):
            v = sum(1 << i for i, ch in enumerate(v) if ch == "1")
        cols.append(int(v))
    if not all(cols):
        raise NotSimple("zero column (loop)")
    return BinaryMatroid(tuple(g), tuple(cols))


def fano_matroid(labels=None):
    labels = list(labels) if labels is not None else list(range(1, 8))
    return BinaryMatroid(tuple(labels), tuple(range(1, 8)))


@dataclass(frozen=True)
class RankClosure:
    rank: int
    closure: frozenset
    circuits: tuple


def matroid_rank_closure(m, X, bound=DEFAULT_GROUND_BOUND):
    if isinstance(m, LabeledGraph):
        m = m.matroid()
    X = list(X)
    return RankClosure(m.rank(X), m.closure(X), tuple(m.circuits(X, bound=bound)))


def parallel_connection(m1, m2, z):
    if z not in m1.col or z not in m2.col:
        raise InputError(f"{z!r} must lie in both grounds")
    if (set(m1.ground) & set(m2.ground)) != {z}:
        raise GroundOverlap("grounds may share only the connecting element")
    a, _ = m1.coordinates(first=z)
    b, _ = m2.coordinates(first=z)
    r1 = a.rank()
    cols = dict(a.col)
    for e, v in b.col.items():
        if e == z:
            continue
        cols[e] = (v & 1) | ((v >> 1) << r1)
    g = list(m1.ground) + [e for e in m2.ground if e != z]
    return BinaryMatroid(tuple(g), tuple(cols[e] for e in g))


# ------------------------------------------------------------- graphs

@dataclass(frozen=True)
class LabeledGraph:
    """Simple graph whose edges carry distinct labels."""
    vertices: tuple
    edges: tuple          # (label, (u, v)) pairs sorted by label

    @cached_property
    def edge_of(self):
        return {lab: e for lab, e in self.edges}

    @cached_property
    def label_of(self):
        return {frozenset(e): lab for lab, e in self.edges}

    @property
    def labels(self):
        return tuple(lab for lab, _ in self.edges)

    @cached_property
    def vindex(self):
        return {v: i for i, v in enumerate(self.vertices)}

    def nx(self):
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for lab, (u, v) in self.edges:
            g.add_edge(u, v, label=lab)
        return g

    def matroid(self):
        vi = self.vindex
        return BinaryMatroid(self.labels,
                             tuple((1 << vi[u]) ^ (1 << vi[v]) for _, (u, v) in self.edges))

    def rank(self, X=None):
        X = self.labels if X is None else list(X)
        g = nx.Graph()
        used = set()
        for lab in X:
            u, v = self.edge_of[lab]
            g.add_edge(u, v)
            used.update((u, v))
        return len(used) - nx.number_connected_components(g) if used else 0

    @property
    def mrk(self):
        return len(self.vertices) - nx.number_connected_components(self.nx())

    def relabel(self, mapping):
        return labeled_graph([(u, v, mapping[lab]) for lab, (u, v) in self.edges],
                             vertices=self.vertices)


def labeled_graph(triples, vertices=()):
    """Graph from (u, v, label) triples; rejects loops, multi-edges, repeated labels."""
    vs = set(vertices)
    edges = {}
    pairs = set()
    for u, v, lab in triples:
        if u == v:
            raise NotSimple(f"loop at {u!r}")
        key = frozenset((u, v))
        if key in pairs:
            raise NotSimple(f"parallel edges between {u!r} and {v!r}")
        if lab in edges:
            raise NotABijection(f"label {lab!r} used twice")
        pairs.add(key)
        a, b = sort_labels((u, v))
        edges[lab] = (a, b)
        vs.update((u, v))
    ordered = sorted(edges.items(), key=lambda t: label_key(t[0]))
    return LabeledGraph(tuple(sort_labels(vs)), tuple(ordered))


def graph_from_nx(g, label="label"):
    return labeled_graph([(u, v, d[label]) for u, v, d in g.edges(data=True)], vertices=g.nodes)


def complete_graph(m):
    return labeled_graph([(i, j, (i, j)) for i, j in itertools.combinations(range(m), 2)])


def wheel_graph(k, hub="h"):
    """Wheel with k spokes; spoke labels ("s", i), rim labels ("r", i)."""
    tr = [(hub, i, ("s", i)) for i in range(k)]
    tr += [(i, (i + 1) % k, ("r", i)) for i in range(k)]
    return labeled_graph(tr)


# ------------------------------------------------------------- chordless circuits, wheels

def chordless_circuits(g, bound=64):
    """Chordless circuits as frozensets of edge labels, canonically ordered."""
    if len(g.edges) > bound:
        raise BoundExceeded(f"{len(g.edges)} edges exceed the bound {bound}")
    G = g.nx()
    out = set()
    for cyc in nx.chordless_cycles(G):
        if len(cyc) < 3:
            continue
        labs = frozenset(g.label_of[frozenset((cyc[i], cyc[(i + 1) % len(cyc)]))]
                         for i in range(len(cyc)))
        out.add(labs)
    return sorted(out, key=lambda c: (len(c), label_key(sort_labels(c))))


@dataclass(frozen=True)
class Wheel:
    hub: object
    spokes: frozenset     # edge labels
    rims: frozenset

    @property
    def degenerate(self):
        return len(self.spokes) == 2


def wheels(g, bound=64):
    """All wheels (hub, spokes, rims); a triangle appears once per hub choice."""
    if len(g.edges) > bound:
        raise BoundExceeded(f"{len(g.edges)} edges exceed the bound {bound}")
    G = g.nx()
    out = []
    for h in g.vertices:
        nb = list(G.neighbors(h))
        H = G.subgraph(nb)
        # degenerate wheels: every triangle once per choice of hub corner
        cycles = [list(e) for e in H.edges] + [c for c in nx.simple_cycles(H) if len(c) >= 3]
        for cyc in cycles:
            if len(cyc) == 2:
                rims = frozenset([g.label_of[frozenset(cyc)]])
                spokes = frozenset(g.label_of[frozenset((h, v))] for v in cyc)
                out.append(Wheel(h, spokes, rims))
                continue
            rims = frozenset(g.label_of[frozenset((cyc[i], cyc[(i + 1) % len(cyc)]))]
                             for i in range(len(cyc)))
            spokes = frozenset(g.label_of[frozenset((h, v))] for v in cyc)
            out.append(Wheel(h, spokes, rims))
    out.sort(key=lambda w: (label_key(w.hub), len(w.spokes), label_key(sort_labels(w.rims))))
    return out


def _endpoints(g, labs):
    return {v for lab in labs for v in g.edge_of[lab]}


def is_wheel_rim(g, labs):
    """True when the edges form the rim of a nondegenerate wheel."""
    vs = _endpoints(g, labs)
    if len(vs) < 3:
        return False
    G = g.nx()
    return any(all(G.has_edge(h, v) for v in vs) for h in g.vertices if h not in vs)


def is_wheely(g):
    return all(len(c) == 3 or is_wheel_rim(g, c) for c in chordless_circuits(g))


def triangles(g):
    G = g.nx()
    out = []
    for a, b, c in itertools.combinations(g.vertices, 3):
        if G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(a, c):
            out.append(frozenset(g.label_of[frozenset(e)] for e in ((a, b), (b, c), (a, c))))
    return out


def is_extendible(g, tri):
    """A triangle is extendible when it lies in a wheel with at least 3 spokes."""
    G = g.nx()
    vs = _endpoints(g, tri)
    # the triangle as rim: some outside vertex sees all three corners
    if any(all(G.has_edge(h, v) for v in vs) for h in g.vertices if h not in vs):
        return True
    # a corner as hub: the opposite edge extends to a longer rim circuit
    for h in vs:
        b, c = (v for v in vs if v != h)
        H = nx.Graph(G.subgraph(G.neighbors(h)))
        H.remove_edge(b, c)
        if nx.has_path(H, b, c):
            return True
    return False


def extendible_triangles(g):
    return [t for t in triangles(g) if is_extendible(g, t)]


# ------------------------------------------------------------- models

@dataclass(frozen=True)
class Model:
    """A PLS with a bijection psi from its points onto a matroid ground set.

    For graph models ``graph`` is set and the matroid is its cycle matroid.
    """
    pls: object
    matroid: BinaryMatroid
    psi: dict
    graph: LabeledGraph | None = field(default=None)

    def image(self, X):
        return [self.psi[x] for x in X]

    @cached_property
    def inverse(self):
        return {v: k for k, v in self.psi.items()}


def graph_model(pls, graph, psi=None):
    """Model on a graph; by default edges are labelled by the points themselves."""
    psi = dict(psi) if psi is not None else {p: p for p in pls.points}
    return Model(pls, graph.matroid(), psi, graph)


def matroid_model(pls, matroid, psi=None):
    psi = dict(psi) if psi is not None else {p: p for p in pls.points}
    return Model(pls, matroid, psi, None)


def _check_bijection(model):
    psi = model.psi
    if set(psi) != set(model.pls.points):
        raise NotABijection("psi must be defined exactly on the points")
    img = list(psi.values())
    if len(set(img)) != len(img) or set(img) != set(model.matroid.ground):
        raise NotABijection("psi must be a bijection onto the ground set")


def check_line_pres(model):
    _check_bijection(model)
    if not model.matroid.is_simple():
        raise NotSimple("the modeling matroid must be simple")
    return all(not model.matroid.is_independent(model.image(l)) for l in model.pls.lines)


@dataclass(frozen=True)
class RankModelCheck:
    ok: bool
    mrk: int
    rk: int


def check_rank_model(model):
    lp = check_line_pres(model)
    mrk = model.matroid.mrk
    rk = model.pls.rank
    if lp and mrk > rk and classify_pls(model.pls).sparse:
        raise TheoremViolation(f"line-preserving model of a sparse PLS has mrk {mrk} > rk {rk}")
    return RankModelCheck(mrk == rk, mrk, rk)


def cycle_pls_rank(c):
    """rk(C*, C-lines): 2n points and n lines."""
    return len(c.support) - len(c.lines)


@dataclass(frozen=True)
class CyclePresCheck:
    ok: bool
    rank_form_ok: bool
    failing_cycles: tuple
    form_mismatches: tuple = ()     # cycles where the two forms disagree


def junction_hub(model, c):
    """Common vertex of the junction edges of a cycle, or None."""
    common = None
    for x in c.junctions:
        ends = set(model.graph.edge_of[model.psi[x]])
        common = ends if common is None else common & ends
    return next(iter(common)) if common and len(common) == 1 else None


def check_cycle_preserving(model):
    """Midpoints of every cycle map to a circuit.

    The rank form rk(C*, C-lines) == mrk(psi(C*)) is evaluated alongside.
    It agrees with the circuit form whenever the junction edges meet in a
    hub; odd cycles whose junction edges close up into a circuit (the
    pentagon/pentagram split of K5) satisfy the circuit form only, and are
    listed in ``form_mismatches``.
    """
    if not check_line_pres(model):
        raise NotLinePreserving("cycle preservation presupposes line preservation")
    m = model.matroid
    bad, mism = [], []
    rank_ok = True
    for c in enumerate_cycles(model.pls):
        circ = m.is_circuit(model.image(c.midpoints))
        rform = cycle_pls_rank(c) == m.rank(model.image(c.support))
        if rform and not circ:
            raise TheoremViolation(f"rank form holds but midpoints of {c.junctions!r} are no circuit")
        if circ != rform:
            mism.append(c.junctions)
        if not circ:
            bad.append(c.junctions)
        rank_ok &= rform
    return CyclePresCheck(not bad, rank_ok, tuple(bad), tuple(mism))


@dataclass(frozen=True)
class CircuitFriendlyCheck:
    ok: bool
    offending_circuits: tuple


def check_circuit_friendly(model, bound=64):
    """Every chordless circuit pulls back to a line or to a cycle's midpoints."""
    _check_bijection(model)
    if model.graph is None:
        raise InputError("circuit-friendliness is defined for graph models")
    p = model.pls
    lines = {frozenset(l) for l in p.lines}
    mids = {frozenset(c.midpoints) for c in enumerate_cycles(p)}
    inv = model.inverse
    bad = []
    for circ in chordless_circuits(model.graph, bound=bound):
        X = frozenset(inv[e] for e in circ)
        if X not in lines and X not in mids:
            bad.append(tuple(sort_labels(X)))
    return CircuitFriendlyCheck(not bad, tuple(bad))


def check_triangle_friendly(model):
    _check_bijection(model)
    lines = {frozenset(l) for l in model.pls.lines}
    inv = model.inverse
    return all(frozenset(inv[e] for e in t) in lines for t in extendible_triangles(model.graph))


# ------------------------------------------------------------- binary model search

def _static_order(p):
    """Breadth-first point order along lines, starting at the busiest point."""
    idx = p.order_index
    left = set(p.points)
    order = []
    while left:
        start = max(left, key=lambda x: (p.degree(x), -idx[x]))
        queue = [start]
        left.discard(start)
        while queue:
            x = queue.pop(0)
            order.append(x)
            nb = sorted({y for l in p.lines_through(x) for y in l if y in left},
                        key=lambda y: idx[y])
            for y in nb:
                left.discard(y)
                queue.append(y)
    return order


def iter_binary_models(p, rank_target=None, limit=None):
    """Yield line-preserving simple GF(2) labelings (dicts point -> int).

    Each labeling is in reduced form along a fixed point order: a point either
    lies in the span of earlier ones or receives the next unit vector.  So
    each model appears once up to a change of coordinates.  With
    ``rank_target`` set, only labelings of exactly that rank are produced.
    """
    order = _static_order(p)
    n = len(order)
    pos = {x: i for i, x in enumerate(order)}
    # lines checked or forced when their last point (in order) is placed
    forced_by = {x: [] for x in order}
    for l in p.lines:
        a, b, c = sorted(l, key=pos.get)
        forced_by[c].append((a, b))
    cap = rank_target if rank_target is not None else n
    lab = {}
    used = set()
    count = [0]

    def rec(i, dim, span):
        if rank_target is not None and dim + (n - i) < rank_target:
            return
        if i == n:
            if rank_target is None or dim == rank_target:
                count[0] += 1
                yield dict(lab)
            return
        x = order[i]
        cands = None
        for a, b in forced_by[x]:
            v = lab[a] ^ lab[b]
            if cands is None:
                cands = {v}
            elif v not in cands:
                return
        if cands is not None:
            opts = [(v, dim, span) for v in cands]
        else:
            opts = [(v, dim, span) for v in span]
            if dim < cap:
                e = 1 << dim
                opts.append((e, dim + 1, span + [s ^ e for s in span] + [e]))
        for v, d2, sp2 in opts:
            if v == 0 or v in used:
                continue
            lab[x] = v
            used.add(v)
            yield from rec(i + 1, d2, sp2)
            used.discard(v)
            del lab[x]
            if limit is not None and count[0] >= limit:
                return

    yield from rec(0, 0, [])


def binary_model_search(p, rank_target=None):
    """First line-preserving simple binary labeling, or None if none exists."""
    for lab in iter_binary_models(p, rank_target):
        return matroid_model(p, BinaryMatroid(tuple(p.points), tuple(lab[x] for x in p.points)))
    return None


def rref_key(p, lab):
    """Canonical form of a labeling under coordinate changes."""
    basis = {}
    for x in p.points:
        _insert(basis, lab[x])
    rows = [basis[b] for b in sorted(basis, reverse=True)]
    out = []
    for x in p.points:
        v = lab[x]
        coeff = 0
        for i, r in enumerate(rows):
            if v >> (r.bit_length() - 1) & 1:
                v ^= r
                coeff |= 1 << i
        out.append(coeff)
    return tuple(out)


# ------------------------------------------------------------- graphicness

def _fundamental(m, basis_elems):
    vecs = [m.col[b] for b in basis_elems]
    out = {}
    for e in m.ground:
        if e in basis_elems:
            continue
        comb = _solve(vecs, m.col[e])
        out[e] = [basis_elems[i] for i in range(len(basis_elems)) if comb >> i & 1]
    return out


def _realize_connected(m):
    """Graph (dict element -> vertex pair) on rank+1 vertices, or None."""
    _, basis = m.coordinates()
    basis = list(basis)
    r = len(basis)
    fund = _fundamental(m, basis)
    # order basis elements so that consecutive ones tend to share circuits
    order = []
    pending = list(basis)
    while pending:
        best = max(pending, key=lambda b: sum(1 for f in fund.values()
                                                if b in f and any(o in f for o in order)))
        order.append(best)
        pending.remove(best)
    checks = {b: [] for b in order}
    pos = {b: i for i, b in enumerate(order)}
    for e, f in fund.items():
        last = max(f, key=pos.get)
        checks[last].append(e)
    touching = {b: [e for e, f in fund.items() if b in f] for b in order}
    assign = {}

    def forest_ok(edges):
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x
        for u, v in edges:
            a, b = find(u), find(v)
            if a == b:
                return False
            parent[a] = b
        return True

    def linear_forest(es):
        deg = {}
        for u, v in es:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
            if deg[u] > 2 or deg[v] > 2:
                return False
        return True

    def path_ends(es):
        acc = 0
        for u, v in es:
            acc ^= (1 << u) ^ (1 << v)
        if popcount(acc) != 2:
            return None
        ends = [i for i in range(r + 1) if acc >> i & 1]
        # a linear forest with exactly two odd vertices is a single path
        g = nx.Graph(es)
        return tuple(ends) if nx.is_connected(g) else None

    def rec(i, nverts):
        if i == r:
            return True
        b = order[i]
        for u in range(min(nverts + 1, r + 1)):
            for v in range(u + 1, min(nverts + 2, r + 1)):
                if u >= nverts and v > nverts + 1:
                    continue
                nv = max(nverts, v + 1)
                if v >= nverts and u >= nverts and v != u + 1:
                    continue
                assign[b] = (u, v)
                if not forest_ok(assign.values()):
                    del assign[b]
                    continue
                good = True
                for e in touching[b]:
                    es = [assign[x] for x in fund[e] if x in assign]
                    if not linear_forest(es):
                        good = False
                        break
                if good:
                    for e in checks[b]:
                        if path_ends([assign[x] for x in fund[e]]) is None:
                            good = False
                            break
                if good and rec(i + 1, nv):
                    return True
                del assign[b]
        return False

    if not rec(0, 0):
        return None
    out = dict(assign)
    for e, f in fund.items():
        out[e] = path_ends([assign[x] for x in f])
    return out


@dataclass(frozen=True)
class GraphicResult:
    yes: bool
    graph: LabeledGraph | None


def is_graphic(m, bound=DEFAULT_GRAPHIC_BOUND):
    """Search a graph whose cycle matroid equals m, one component at a time."""
    if len(m.ground) > bound:
        raise BoundExceeded(f"ground of size {len(m.ground)} exceeds graphicness bound {bound}")
    if not m.is_simple():
        raise NotSimple("graphicness is tested for simple binary matroids")
    triples = []
    offset = 0
    for comp in m.components():
        sub = m.restrict(comp)
        if len(comp) == 1:
            triples.append((offset, offset + 1, comp[0]))
            offset += 2
            continue
        real = _realize_connected(sub)
        if real is None:
            return GraphicResult(False, None)
        r = sub.rank()
        for e, (u, v) in real.items():
            triples.append((offset + u, offset + v, e))
        offset += r + 1
    g = labeled_graph(triples)
    if not same_matroid(g.matroid(), m):
        raise TheoremViolation("graph realization does not reproduce the matroid")
    return GraphicResult(True, g)


def same_matroid(a, b):
    """Equal ground sets with identical GF(2) dependencies."""
    if set(a.ground) != set(b.ground):
        return False
    g = list(a.ground)
    ra = a.rank()
    if ra != b.rank():
        return False
    # same linear relations iff stacking both columns keeps the rank
    width = a.dim
    stacked = [a.col[e] | (b.col[e] << width) for e in g]
    return gf2_rank(stacked) == ra


# ------------------------------------------------------------- graph triggers

@dataclass(frozen=True)
class TriggerCheck:
    is_trigger: bool
    counterexample: BinaryMatroid | None
    vacuous: bool
    n_models: int


def graph_trigger_check(p, model_limit=10000, bound=DEFAULT_GRAPHIC_BOUND):
    """Are all binary line-preserving rank-models of p graphic?"""
    seen = set()
    count = 0
    for lab in iter_binary_models(p, p.rank):
        key = rref_key(p, lab)
        if key in seen:
            continue
        seen.add(key)
        count += 1
        if count > model_limit:
            raise BoundExceeded(f"more than {model_limit} models")
        m = BinaryMatroid(tuple(p.points), tuple(lab[x] for x in p.points))
        if not is_graphic(m, bound=bound).yes:
            return TriggerCheck(False, m, False, count)
    return TriggerCheck(True, None, count == 0, count)


def is_wheel(g, labels=None):
    """Do the given edges (default: all) form a wheel, degenerate ones included?"""
    labels = g.labels if labels is None else list(labels)
    G = nx.Graph()
    for lab in labels:
        G.add_edge(*g.edge_of[lab])
    n = G.number_of_nodes()
    if n < 3 or G.number_of_edges() != 2 * (n - 1) and n > 3:
        return False
    if n == 3:
        return G.number_of_edges() == 3
    for h in G.nodes:
        if G.degree(h) != n - 1:
            continue
        rim = G.subgraph(v for v in G.nodes if v != h)
        if all(d == 2 for _, d in rim.degree()) and nx.is_connected(rim):
            return True
    return False
