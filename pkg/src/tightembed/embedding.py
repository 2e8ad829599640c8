"""Set partitions, lattice models and tight embeddings into partition lattices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import (BoundExceeded, FactorNotTight, GraphDisconnected, InputError,
                     ModelCheckFailed, NotABijection, NotDistributive, NotSimple,
                     NotTight, TheoremViolation)
from .lattice import (Lattice, join_irreducibles, label_key, lattice_from_sets,
                      maximal_congruences, sort_labels, extract_mopls)
from .matroid import (BinaryMatroid, LabeledGraph, check_circuit_friendly,
                      chordless_circuits, graph_model, labeled_graph)
from .modeling import (iter_glue_models, model_augmented_ump, standard_graph_ump)
from .errors import ModeViolation, EdgesNotIncident, NotAUmp
from .pls import classify_pls

DEFAULT_PART_BOUND = 7
DEFAULT_SEARCH_JI_BOUND = 10


# ------------------------------------------------------------- partitions

@dataclass(frozen=True, order=True)
class Partition:
    """Set partition of {1..n}; blocks are sorted tuples ordered by least element."""
    n: int
    blocks: tuple

    @staticmethod
    def of(n, blocks):
        seen = sorted(x for b in blocks for x in b)
        if seen != list(range(1, n + 1)):
            raise InputError(f"blocks do not partition 1..{n}")
        return Partition(n, tuple(sorted(tuple(sorted(b)) for b in blocks if b)))

    @staticmethod
    def discrete(n):
        return Partition(n, tuple((i,) for i in range(1, n + 1)))

    @staticmethod
    def indiscrete(n):
        return Partition(n, (tuple(range(1, n + 1)),) if n else ())

    @property
    def block_of(self):
        return {x: b for b in self.blocks for x in b}

    def labels(self):
        """Array of block indices for 1..n."""
        lab = np.empty(self.n + 1, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            lab[list(b)] = k
        return lab[1:]

    def leq(self, other):
        bo = other.block_of
        return all(set(b) <= set(bo[b[0]]) for b in self.blocks)

    def meet(self, other):
        bo = other.block_of
        out = []
        for b in self.blocks:
            groups = {}
            for x in b:
                groups.setdefault(bo[x], []).append(x)
            out.extend(groups.values())
        return Partition.of(self.n, out)

    def join(self, other):
        return comp(self.n, [(b[0], x) for p in (self, other) for b in p.blocks for x in b[1:]])

    def rank(self):
        return self.n - len(self.blocks)

    def covers(self, other):
        """Is self a cover of other (other < self with one merge)?"""
        return other.leq(self) and len(other.blocks) == len(self.blocks) + 1

    def pairs(self):
        return {(a, b) for blk in self.blocks for a, b in itertools.combinations(blk, 2)}

    def __str__(self):
        sep = "" if self.n < 10 else ","
        return "|".join(sep.join(str(x) for x in b) for b in self.blocks)

    @staticmethod
    def parse(text, n=None):
        text = text.strip()
        parts = [part.strip() for part in text.split("|")]
        # digit-per-point shorthand only below 10 points
        wide = n >= 10 if n is not None else any("," in s or " " in s for s in parts)
        blocks = []
        for part in parts:
            if wide or "," in part or " " in part:
                blocks.append([int(t) for t in part.replace(",", " ").split()])
            else:
                blocks.append([int(ch) for ch in part])
        n = n if n is not None else max(x for b in blocks for x in b)
        return Partition.of(n, blocks)


def comp(n, edges):
    """Partition of {1..n} into the vertex sets of connected components."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    return Partition(n, tuple(tuple(g) for g in sorted(groups.values())))


def all_partitions(n):
    def rec(i, blocks):
        if i > n:
            yield Partition.of(n, blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()
    if n == 0:
        yield Partition(0, ())
        return
    yield from rec(1, [])


def part_lattice(n, bound=DEFAULT_PART_BOUND):
    """Part(n) as a Lattice whose labels are Partition objects."""
    if n > bound:
        raise BoundExceeded(f"Part({n}) exceeds the materialization bound {bound}")
    parts = sorted(all_partitions(n), key=lambda p: (-len(p.blocks), p.blocks))
    m = len(parts)
    leq = np.zeros((m, m), dtype=np.bool_)
    for i, a in enumerate(parts):
        for j in range(i, m):
            leq[i, j] = a.leq(parts[j])
    return Lattice(parts, leq)


# ------------------------------------------------------------- certificates

@dataclass(frozen=True)
class Certificate:
    is_homomorphism: bool
    is_cover_preserving: bool
    maps_bottom_to_bottom: bool
    injective: bool
    witness: str = field(default="", compare=False)

    @property
    def tight(self):
        return self.is_homomorphism and self.is_cover_preserving and self.maps_bottom_to_bottom


def certify(L, n, mapping):
    """Check every pair and every cover directly."""
    witness = ""
    hom = True
    for a, b in itertools.combinations_with_replacement(L.labels, 2):
        fa, fb = mapping[a], mapping[b]
        if mapping[L.meet(a, b)] != fa.meet(fb) or mapping[L.join(a, b)] != fa.join(fb):
            hom = False
            witness = witness or f"operations not preserved on {a!r}, {b!r}"
            break
    cov = True
    for i, j in L.cover_pairs:
        a, b = L.labels[i], L.labels[j]
        if not mapping[b].covers(mapping[a]):
            cov = False
            witness = witness or f"cover {a!r} < {b!r} not preserved"
            break
    bot = mapping[L.bottom] == Partition.discrete(n)
    inj = len(set(mapping.values())) == L.n
    return Certificate(hom, cov, bot, inj, witness)


@dataclass(frozen=True)
class PartitionEmbedding:
    lattice: Lattice
    n: int
    map: dict
    certificate: Certificate

    @property
    def tight(self):
        return self.certificate.tight


def make_embedding(L, n, mapping, require_tight=True):
    mapping = dict(mapping)
    cert = certify(L, n, mapping)
    emb = PartitionEmbedding(L, n, mapping, cert)
    if cert.tight and n < L.height + 1:
        raise TheoremViolation(f"tight embedding into Part({n}) of a lattice of height {L.height}")
    if require_tight and not cert.tight:
        raise NotTight(cert.witness)
    return emb


# ------------------------------------------------------------- lattice models

@dataclass(frozen=True)
class LatticeModelCheck:
    ok: bool
    failed_condition: str | None     # "join", "closure" or "rank"
    witness: object = None


def _check_phi(J, phi, ground):
    if set(phi) != set(J):
        raise NotABijection("phi must be defined exactly on the join-irreducibles")
    img = list(phi.values())
    if len(set(img)) != len(img) or not set(img) <= set(ground):
        raise NotABijection("phi must be injective into the ground set")


def check_lattice_model(L, carrier, phi=None):
    """Do graph (or binary matroid) plus phi: J(L) -> edges model L?

    Graph case: for every chordless circuit with preimage X, each q in X lies
    below the join of the rest, and the rank of phi(J) equals the height.
    Matroid case: phi(J(a)) is closed in the restriction to phi(J) for every
    a, plus the same rank condition.
    """
    ji = join_irreducibles(L)
    J = ji.J
    phi = dict(phi) if phi is not None else {p: p for p in J}
    if isinstance(carrier, LabeledGraph):
        _check_phi(J, phi, carrier.labels)
        img = set(phi.values())
        sub = labeled_graph([(u, v, lab) for lab, (u, v) in carrier.edges if lab in img])
        inv = {v: k for k, v in phi.items()}
        for circ in chordless_circuits(sub):
            X = [inv[e] for e in circ]
            for q in X:
                rest = [x for x in X if x != q]
                if not L.leq(q, L.join_all(rest)):
                    return LatticeModelCheck(False, "join", (q, tuple(sort_labels(rest))))
        mrk = sub.rank()
    elif isinstance(carrier, BinaryMatroid):
        _check_phi(J, phi, carrier.ground)
        sub = carrier.restrict(phi.values())
        if not sub.is_simple():
            raise NotSimple("the induced submatroid is not simple")
        for a in L.labels:
            X = {phi[p] for p in ji.J_of[a]}
            cl = sub.closure(X)
            if cl != X:
                extra = sorted(cl - X, key=label_key)
                return LatticeModelCheck(False, "closure", (a, tuple(extra)))
        mrk = sub.rank()
    else:
        raise InputError("carrier must be a LabeledGraph or a BinaryMatroid")
    if mrk != L.height:
        return LatticeModelCheck(False, "rank", (mrk, L.height))
    return LatticeModelCheck(True, None)


def connect_components(g):
    """Glue one vertex of each component onto the first component.

    The cycle matroid is unchanged."""
    G = g.nx()
    comps = sorted((sort_labels(c) for c in nx.connected_components(G)),
                   key=lambda c: label_key(c[0]))
    if len(comps) <= 1:
        return g
    target = comps[0][0]
    ren = {c[0]: target for c in comps[1:]}
    return labeled_graph([(ren.get(u, u), ren.get(v, v), lab) for lab, (u, v) in g.edges])


def build_partition_embedding(L, graph, phi=None):
    """Phi(a) = components of phi(J(a)) on the d(L)+1 vertices of the graph."""
    ji = join_irreducibles(L)
    phi = dict(phi) if phi is not None else {p: p for p in ji.J}
    chk = check_lattice_model(L, graph, phi)
    if not chk.ok:
        raise ModelCheckFailed(f"{chk.failed_condition} condition fails: {chk.witness!r}")
    img = set(phi.values())
    used = [v for v in graph.vertices
            if any(v in graph.edge_of[e] for e in img)] if img else list(graph.vertices[:1])
    if not used:
        used = [0]
    G = nx.Graph()
    G.add_nodes_from(used)
    G.add_edges_from(graph.edge_of[e] for e in img)
    if not nx.is_connected(G) or len(used) != L.height + 1:
        raise GraphDisconnected("the modeling graph must be connected on d(L)+1 vertices")
    num = {v: i + 1 for i, v in enumerate(used)}
    n = len(used)
    mapping = {}
    for a in L.labels:
        mapping[a] = comp(n, [tuple(num[v] for v in graph.edge_of[phi[p]]) for p in ji.J_of[a]])
    return make_embedding(L, n, mapping)


@dataclass(frozen=True)
class ExtractedModel:
    graph: LabeledGraph
    phi: dict
    embedding: PartitionEmbedding


def extract_model_from_embedding(L, mapping, n=None):
    """Graph model read off a tight embedding: each join-irreducible p gets
    an edge joining the two blocks of Phi(p_*) that Phi(p) merges."""
    n = n if n is not None else next(iter(mapping.values())).n
    cert = certify(L, n, mapping)
    if not cert.tight:
        raise NotTight(cert.witness or "embedding is not tight")
    ji = join_irreducibles(L)
    triples = []
    for p in ji.J:
        lo, hi = mapping[ji.lower_star[p]], mapping[p]
        merged = [b for b in lo.blocks if b not in hi.blocks]
        if len(merged) != 2:
            raise NotTight(f"image of {p!r} does not merge exactly two blocks")
        triples.append((merged[0][0], merged[1][0], p))
    # a one-element lattice still needs its single vertex
    g = connect_components(labeled_graph(triples, vertices=() if triples else [1]))
    ren = {v: i for i, v in enumerate(g.vertices)}
    g = labeled_graph([(ren[u], ren[v], lab) for lab, (u, v) in g.edges], vertices=ren.values())
    phi = {p: p for p in ji.J}
    emb = build_partition_embedding(L, g, phi)
    return ExtractedModel(g, phi, emb)


# ------------------------------------------------------------- geometric embeddings

def flats(m, bound=16):
    """All closed sets of a binary matroid."""
    if len(m.ground) > bound:
        raise BoundExceeded(f"ground of size {len(m.ground)} exceeds the flats bound {bound}")
    start = m.closure(())
    seen = {start}
    stack = [start]
    while stack:
        F = stack.pop()
        for e in m.ground:
            if e not in F:
                G = m.closure(F | {e})
                if G not in seen:
                    seen.add(G)
                    stack.append(G)
    return sorted(seen, key=lambda F: (len(F), label_key(sort_labels(F))))


def flats_lattice(m, bound=16):
    return lattice_from_sets([tuple(sort_labels(F)) for F in flats(m, bound)])


@dataclass(frozen=True)
class GeometricEmbedding:
    lattice: Lattice
    matroid: BinaryMatroid
    map: dict               # element -> frozenset (a flat)
    tight: bool


def build_geometric_embedding(L, m, phi=None):
    """Phi(a) = closure of phi(J(a)) in the whole matroid, checked tight
    into the lattice of flats."""
    ji = join_irreducibles(L)
    phi = dict(phi) if phi is not None else {p: p for p in ji.J}
    chk = check_lattice_model(L, m, phi)
    if not chk.ok:
        raise ModelCheckFailed(f"{chk.failed_condition} condition fails: {chk.witness!r}")
    mapping = {a: m.closure({phi[p] for p in ji.J_of[a]}) for a in L.labels}
    ok = mapping[L.bottom] == m.closure(())
    for a, b in itertools.combinations_with_replacement(L.labels, 2):
        if mapping[L.meet(a, b)] != mapping[a] & mapping[b]:
            ok = False
        if mapping[L.join(a, b)] != m.closure(mapping[a] | mapping[b]):
            ok = False
    for i, j in L.cover_pairs:
        a, b = L.labels[i], L.labels[j]
        if m.rank(mapping[b]) != m.rank(mapping[a]) + 1 or not mapping[a] < mapping[b]:
            ok = False
    if not ok:
        raise NotTight("closure map is not a tight embedding")
    return GeometricEmbedding(L, m, mapping, ok)


# ------------------------------------------------------------- distributive and subdirect

def distributive_embedding(L):
    """Ideal of join-irreducibles J(a) -> one block J(a) plus an anchor point,
    all else singletons, inside Part(|J|+1).  The anchor is point 1."""
    if not L.profile.distributive:
        raise NotDistributive("lattice is not distributive")
    ji = join_irreducibles(L)
    num = {p: k + 2 for k, p in enumerate(ji.J)}
    n = len(ji.J) + 1
    mapping = {}
    for a in L.labels:
        blk = [1] + [num[p] for p in ji.J_of[a]]
        mapping[a] = Partition.of(n, [blk] + [[num[p]] for p in ji.J if p not in ji.J_of[a]])
    return make_embedding(L, n, mapping)


def subdirect_embedding(L, factor_embeddings=None):
    """Juxtapose embeddings of the factors by the maximal congruences.

    ``factor_embeddings`` is a list aligned with maximal_congruences(L).factors;
    missing entries are computed with embed_lattice.
    """
    mc = maximal_congruences(L)
    if factor_embeddings is None:
        factor_embeddings = [None] * mc.s
    embs = []
    for k, (fac, f) in enumerate(zip(mc.factors, factor_embeddings)):
        if f is None:
            f = embed_lattice(fac)
            if f is None:
                raise FactorNotTight(f"no tight embedding found for factor {k}")
        cert = certify(fac, f.n, f.map)
        if not cert.tight:
            raise FactorNotTight(f"factor {k}: {cert.witness}")
        embs.append(f)
    offsets = np.cumsum([0] + [f.n for f in embs])
    n = int(offsets[-1])
    mapping = {}
    for a in L.labels:
        blocks = []
        for k, (cong, fac, f) in enumerate(zip(mc.congruences, mc.factors, embs)):
            cls = cong.class_of(a)
            rep = min(cls, key=lambda x: L.index[x])
            part = f.map[rep]
            blocks += [[x + int(offsets[k]) for x in b] for b in part.blocks]
        mapping[a] = Partition.of(n, blocks)
    return make_embedding(L, n, mapping)


# ------------------------------------------------------------- brute force

def brute_force_embedding_search(L, n=None, ji_bound=DEFAULT_SEARCH_JI_BOUND):
    """Search connected graphs on d(L)+1 vertices with one edge per
    join-irreducible; a model yields a tight embedding, and exhausting the
    search proves there is none into any Part(m).

    Join-irreducibles are placed in a linear extension order.  Partial
    assignments are pruned by two monotone necessary conditions: the edges
    of J(p) have rank exactly h(p) once p is placed, and no placed edge
    outside J(a) lies in the closure of the placed edges of J(a).
    """
    ji = join_irreducibles(L)
    J = sorted(ji.J, key=lambda p: L.index[p])
    if len(J) > ji_bound:
        raise BoundExceeded(f"{len(J)} join-irreducibles exceed the search bound {ji_bound}")
    d = L.height
    if n is not None and n < d + 1:
        return None
    V = d + 1
    if len(J) > V * (V - 1) // 2:
        return None
    below = {p: [q for q in J if q != p and L.leq(q, p)] for p in J}
    ideals = [(a, ji.J_of[a]) for a in L.labels]
    assign = {}

    def rank_of(edges):
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x
        r = 0
        for u, v in edges:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r

    def in_closure(edges, e):
        return rank_of(list(edges) + [e]) == rank_of(edges)

    def ok(p):
        if rank_of([assign[q] for q in below[p]] + [assign[p]]) != L.height_of(p):
            return False
        for a, Ja in ideals:
            inside = [assign[q] for q in Ja if q in assign]
            for q, e in assign.items():
                if q not in Ja and in_closure(inside, e):
                    return False
        return True

    used = set()

    def rec(i, nv):
        if i == len(J):
            return True
        p = J[i]
        for u in range(min(nv + 1, V)):
            for v in range(u + 1, min(nv + 2, V)):
                if u == nv and v != nv + 1:
                    continue
                e = (u, v)
                if e in used:
                    continue
                assign[p] = e
                used.add(e)
                if ok(p) and rec(i + 1, max(nv, v + 1)):
                    return True
                used.discard(e)
                del assign[p]
        return False

    if not rec(0, 0):
        return None
    g = labeled_graph([(u, v, p) for p, (u, v) in assign.items()], vertices=range(V))
    emb = build_partition_embedding(L, g)
    if n is not None and n > emb.n:
        emb = pad_embedding(emb, n)
    return emb


def pad_embedding(emb, n):
    """Same embedding into Part(n) with the extra points as singletons."""
    extra = [[x] for x in range(emb.n + 1, n + 1)]
    mapping = {a: Partition.of(n, list(map(list, p.blocks)) + extra) for a, p in emb.map.items()}
    return make_embedding(emb.lattice, n, mapping)


def direct_embedding_search(L, n, bound=5):
    """Secondary oracle: search maps into Part(n) directly, element by element."""
    if n > bound:
        raise BoundExceeded(f"direct search is limited to Part({bound})")
    ji = join_irreducibles(L)
    order = list(L.labels)
    mapping = {L.bottom: Partition.discrete(n)}
    parts = list(all_partitions(n))

    def rec(i):
        if i == len(order):
            return certify(L, n, mapping).tight
        a = order[i]
        lows = [L.labels[j] for j in L.lower_covers_idx[L.index[a]]]
        if len(lows) >= 2:
            cands = [mapping[lows[0]].join(mapping[lows[1]])]
        else:
            base = mapping[lows[0]]
            cands = [q for q in parts if q.covers(base)]
        for q in cands:
            if any(not q.covers(mapping[b]) for b in lows):
                continue
            mapping[a] = q
            if rec(i + 1):
                return True
            del mapping[a]
        return False

    if L.n == 1:
        return make_embedding(L, n, mapping)
    if rec(1):
        return make_embedding(L, n, mapping)
    return None


def embed_lattice(L):
    """Tight embedding by the cheapest applicable route, or None."""
    if L.n == 1:
        return make_embedding(L, 1, {L.bottom: Partition.discrete(1)})
    if L.profile.distributive:
        return distributive_embedding(L)
    rep = pipeline_embed_thin(L)
    if rep.embedding is not None:
        return rep.embedding
    return brute_force_embedding_search(L)


# ------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class PipelineReport:
    embedding: PartitionEmbedding | None
    branch: str | None        # "ump", "augmented_type1" or "glue"
    reason: str
    attempts: tuple = ()


def circuit_friendly_rank_model(p):
    """(branch, model, attempts) for the first route giving a circuit-friendly
    rank-modeling graph of the PLS; branch and model are None if all fail."""
    attempts = []
    prof = classify_pls(p)
    if prof.ump:
        attempts.append("ump: standard graph")
        return "ump", standard_graph_ump(p).model, tuple(attempts)
    attempts.append("ump: not a UMP")
    try:
        m = model_augmented_ump(p, mode="type1").model
        attempts.append("augmented_type1: built")
        return "augmented_type1", m, tuple(attempts)
    except (ModeViolation, EdgesNotIncident, NotAUmp) as exc:
        attempts.append(f"augmented_type1: {exc}")
    for _, m in iter_glue_models(p):
        if m.graph.mrk == p.rank and check_circuit_friendly(m).ok:
            attempts.append("glue: found")
            return "glue", m, tuple(attempts)
    attempts.append("glue: search exhausted without a circuit-friendly rank-model")
    return None, None, tuple(attempts)


def pipeline_embed_thin(L):
    prof = L.profile
    if not prof.thin:
        why = "not modular" if not prof.modular else (
            "not 2-distributive" if not prof.two_distributive else "has a covering M4")
        return PipelineReport(None, None, f"fails thinness precondition ({why})")
    mop = extract_mopls(L)
    p = mop.pls()
    if p.rank != L.height:
        raise TheoremViolation(f"MoPLS rank {p.rank} differs from height {L.height} of a thin lattice")
    branch, model, attempts = circuit_friendly_rank_model(p)
    if model is None:
        return PipelineReport(None, None, "no circuit-friendly rank-modeling graph found", attempts)
    g = connect_components(model.graph)
    chk = check_lattice_model(L, g)
    if not chk.ok:
        raise TheoremViolation(
            f"circuit-friendly rank-model of the MoPLS fails the lattice check "
            f"({chk.failed_condition}: {chk.witness!r})")
    emb = build_partition_embedding(L, g)
    return PipelineReport(emb, branch, f"embedded via {branch}", attempts)
