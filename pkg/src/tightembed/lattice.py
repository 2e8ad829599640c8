"""Finite lattices given by their cover relation.

Elements carry arbitrary hashable labels.  Internally they are indexed
0..n-1 along a linear extension, so 0 is the bottom and n-1 the top.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from . import _kernels as K
from .errors import (InvalidPLS, LineTooLarge, NotACoatom, NotALattice,
                     NotAPoset, NotCovers, NotModular, InputError)


def label_key(x):
    """Total sort key for mixed labels (ints before strings before tuples)."""
    if isinstance(x, (bool, np.bool_)):
        return (0, int(x))
    if isinstance(x, (int, np.integer)):
        return (0, int(x))
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, (tuple, list)):
        return (2, tuple(label_key(t) for t in x))
    if isinstance(x, (frozenset, set)):
        return (3, tuple(sorted(label_key(t) for t in x)))
    return (4, repr(x))


def sort_labels(xs):
    return sorted(xs, key=label_key)


class Lattice:
    """Immutable finite lattice.  Build with :func:`build_lattice`."""

    def __init__(self, labels, leq, cover_pairs=None):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.index = {x: i for i, x in enumerate(self.labels)}
        self.leq_matrix = np.ascontiguousarray(leq, dtype=np.bool_)
        if np.tril(self.leq_matrix, -1).any():
            raise InputError("labels must follow a linear extension of the order")
        self.leq_matrix.flags.writeable = False
        if cover_pairs is None:
            cover_pairs = _transitive_reduction(self.leq_matrix)
        self.cover_pairs = tuple(sorted(cover_pairs))
        self.join_table = K.join_table(self.leq_matrix)
        self.meet_table = K.meet_table(self.leq_matrix)
        bad = np.argwhere(self.join_table < 0)
        if bad.size:
            i, j = bad[0]
            raise NotALattice(f"{self.labels[i]!r} and {self.labels[j]!r} have no join")
        bad = np.argwhere(self.meet_table < 0)
        if bad.size:
            i, j = bad[0]
            raise NotALattice(f"{self.labels[i]!r} and {self.labels[j]!r} have no meet")
        for t in (self.join_table, self.meet_table):
            t.flags.writeable = False

    # -- basic structure
    @property
    def bottom(self):
        return self.labels[0]

    @property
    def top(self):
        return self.labels[-1]

    @cached_property
    def upper_covers_idx(self):
        up = [[] for _ in range(self.n)]
        for i, j in self.cover_pairs:
            up[i].append(j)
        return up

    @cached_property
    def lower_covers_idx(self):
        lo = [[] for _ in range(self.n)]
        for i, j in self.cover_pairs:
            lo[j].append(i)
        return lo

    @cached_property
    def height_array(self):
        h = np.zeros(self.n, dtype=np.int64)
        for i in range(self.n):
            for j in self.upper_covers_idx[i]:
                h[j] = max(h[j], h[i] + 1)
        h.flags.writeable = False
        return h

    @property
    def height(self):
        """Length d(L) of the longest chain."""
        return int(self.height_array[-1]) if self.n else 0

    def height_of(self, a):
        return int(self.height_array[self.index[a]])

    def covers(self):
        return [(self.labels[i], self.labels[j]) for i, j in self.cover_pairs]

    def leq(self, a, b):
        return bool(self.leq_matrix[self.index[a], self.index[b]])

    def meet(self, a, b):
        return self.labels[self.meet_table[self.index[a], self.index[b]]]

    def join(self, a, b):
        return self.labels[self.join_table[self.index[a], self.index[b]]]

    def join_all(self, xs):
        r = 0
        for x in xs:
            r = int(self.join_table[r, self.index[x]])
        return self.labels[r]

    def is_cover(self, a, b):
        return (self.index[a], self.index[b]) in self._cover_set

    @cached_property
    def _cover_set(self):
        return frozenset(self.cover_pairs)

    def coatoms(self):
        return [self.labels[i] for i in self.lower_covers_idx[self.n - 1]]

    def atoms(self):
        return [self.labels[j] for j in self.upper_covers_idx[0]]

    @cached_property
    def profile(self):
        return _classify(self)

    def canonical_covers(self):
        return sorted(self.covers(), key=lambda p: (label_key(p[0]), label_key(p[1])))

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (set(self.labels) == set(other.labels)
                and set(self.covers()) == set(other.covers()))

    def __hash__(self):
        return hash((frozenset(self.labels), frozenset(self.covers())))

    def __repr__(self):
        return f"Lattice(n={self.n}, height={self.height})"


def _transitive_reduction(leq):
    strict = leq.copy()
    np.fill_diagonal(strict, False)
    s = strict.astype(np.int32)
    two_step = (s @ s) > 0
    cov = strict & ~two_step
    return [tuple(int(t) for t in p) for p in np.argwhere(cov)]


def build_lattice(covers, elements=None):
    """Build a lattice from cover pairs ``(lower, upper)`` over any labels.

    ``elements`` may list labels explicitly (needed for the one-element
    lattice).  Raises NotAPoset on cycles, NotCovers when a listed pair is
    implied by transitivity and NotALattice when some meet or join is missing.
    """
    pairs = []
    for p in covers:
        if len(p) != 2:
            raise InputError(f"cover pair {p!r} must have two entries")
        a, b = p
        if a == b:
            raise NotAPoset(f"self-loop on {a!r}")
        pairs.append((a, b))
    pairs = list(dict.fromkeys(pairs))
    names = set(elements or ())
    for a, b in pairs:
        names.update((a, b))
    if not names:
        raise NotALattice("empty element set")
    names = sort_labels(names)
    succ = {x: [] for x in names}
    indeg = {x: 0 for x in names}
    for a, b in pairs:
        succ[a].append(b)
        indeg[b] += 1
    heap = [(label_key(x), x) for x in names if indeg[x] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, x = heapq.heappop(heap)
        order.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, (label_key(y), y))
    if len(order) != len(names):
        raise NotAPoset("cover relation contains a cycle")
    idx = {x: i for i, x in enumerate(order)}
    n = len(order)
    leq = np.eye(n, dtype=np.bool_)
    for x in reversed(order):
        i = idx[x]
        for y in succ[x]:
            leq[i] |= leq[idx[y]]
    cover_idx = []
    for a, b in pairs:
        i, j = idx[a], idx[b]
        between = leq[i] & leq[:, j]
        between[i] = between[j] = False
        if between.any():
            c = order[int(np.argmax(between))]
            raise NotCovers(f"{a!r} < {c!r} < {b!r}, so ({a!r}, {b!r}) is not a cover")
        cover_idx.append((i, j))
    return Lattice(order, leq, cover_idx)


def lattice_from_order(labels, leq):
    """Lattice from labels (in a linear extension) and a full order matrix."""
    return Lattice(labels, leq)


def lattice_from_sets(sets):
    """Lattice of a family of sets ordered by inclusion (labels: sorted tuples)."""
    fam = sorted({frozenset(s) for s in sets}, key=lambda s: (len(s), label_key(s)))
    labels = [tuple(sort_labels(s)) for s in fam]
    n = len(fam)
    leq = np.zeros((n, n), dtype=np.bool_)
    for i, a in enumerate(fam):
        for j in range(i, n):
            leq[i, j] = a <= fam[j]
    return Lattice(labels, leq)


# ------------------------------------------------------------- constructors

def chain(k):
    """Chain with k elements 0 < 1 < ... < k-1 (D2 is chain(2))."""
    if k == 1:
        return build_lattice([], elements=[0])
    return build_lattice([(i, i + 1) for i in range(k - 1)])


def m_n(n, atoms=None, bottom=0, top=1):
    atoms = list(atoms) if atoms is not None else [f"a{i}" for i in range(1, n + 1)]
    if len(atoms) != n:
        raise InputError("atom count mismatch")
    return build_lattice([(bottom, a) for a in atoms] + [(a, top) for a in atoms])


def pentagon():
    return build_lattice([(0, "a"), ("a", "b"), ("b", 1), (0, "c"), ("c", 1)])


def product(A, B):
    """Direct product; labels are pairs."""
    labels = [(a, b) for a in A.labels for b in B.labels]
    pairs = []
    for a in A.labels:
        for b1, b2 in B.covers():
            pairs.append(((a, b1), (a, b2)))
    for b in B.labels:
        for a1, a2 in A.covers():
            pairs.append(((a1, b), (a2, b)))
    return build_lattice(pairs, elements=labels)


def boolean_lattice(k):
    """Subsets of {0..k-1}, labelled by sorted tuples."""
    return lattice_from_sets(
        s for r in range(k + 1) for s in itertools.combinations(range(k), r))


def subspace_lattice(k):
    """Subspaces of GF(2)^k; a subspace is labelled by its sorted nonzero vectors."""
    vecs = range(1, 2 ** k)
    spaces = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for S in frontier:
            for v in vecs:
                if v in S:
                    continue
                T = frozenset(S | {v} | {v ^ s for s in S})
                if T not in spaces:
                    spaces.add(T)
                    nxt.append(T)
        frontier = nxt
    return lattice_from_sets(spaces)


def interval(L, a, b):
    i, j = L.index[a], L.index[b]
    keep = np.nonzero(L.leq_matrix[i] & L.leq_matrix[:, j])[0]
    return Lattice([L.labels[k] for k in keep], L.leq_matrix[np.ix_(keep, keep)])


def dual(L):
    order = list(reversed(range(L.n)))
    return Lattice([L.labels[i] for i in order], L.leq_matrix.T[np.ix_(order, order)])


def relabel(L, mapping):
    return Lattice([mapping[x] for x in L.labels], L.leq_matrix)


def find_isomorphism(A, B):
    """Label map A -> B preserving covers, or None."""
    if A.n != B.n or len(A.cover_pairs) != len(B.cover_pairs):
        return None
    ga = nx.DiGraph(A.cover_pairs)
    ga.add_nodes_from(range(A.n))
    gb = nx.DiGraph(B.cover_pairs)
    gb.add_nodes_from(range(B.n))
    gm = nx.algorithms.isomorphism.DiGraphMatcher(ga, gb)
    for m in gm.isomorphisms_iter():
        return {A.labels[i]: B.labels[j] for i, j in m.items()}
    return None


def is_isomorphic(A, B):
    return find_isomorphism(A, B) is not None


# ------------------------------------------------------------- classification

@dataclass(frozen=True)
class LatticeProfile:
    graded: bool
    height: int
    modular: bool
    semimodular: bool
    distributive: bool
    two_distributive: bool
    has_covering_M4: bool
    thin: bool
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)


def _classify(L):
    meet, join, leq = L.meet_table, L.join_table, L.leq_matrix
    h = L.height_array
    graded = all(h[j] == h[i] + 1 for i, j in L.cover_pairs)
    wit = {}
    mv = K.modular_violation(leq, meet, join)
    modular = mv is None
    if mv:
        wit["modular"] = tuple(L.labels[t] for t in mv)
    cov = L._cover_set
    semimodular = True
    for a in range(L.n):
        for b in range(L.n):
            if (int(meet[a, b]), a) in cov and (b, int(join[a, b])) not in cov:
                semimodular = False
                wit["semimodular"] = (L.labels[a], L.labels[b])
                break
        if not semimodular:
            break
    dv = K.distributive_violation(meet, join)
    distributive = dv is None
    if dv:
        wit["distributive"] = tuple(L.labels[t] for t in dv)
    tv = K.two_distributive_violation(meet, join)
    if tv is None and not modular:
        tv = K.two_distributive_violation(join, meet)   # dual identity
    two_dist = tv is None
    if tv:
        wit["two_distributive"] = tuple(L.labels[t] for t in tv)
    c = np.zeros((L.n, L.n), dtype=np.int64)
    for i, j in L.cover_pairs:
        c[i, j] = 1
    through = c @ c
    m4 = np.argwhere(through >= 4)
    has_m4 = bool(m4.size)
    if has_m4:
        b, a = m4[0]
        mids = [L.labels[k] for k in np.nonzero(c[b] & c[:, a])[0]]
        wit["covering_M4"] = (L.labels[b], tuple(mids[:4]), L.labels[a])
    return LatticeProfile(graded=bool(graded), height=L.height, modular=modular,
                          semimodular=semimodular, distributive=distributive,
                          two_distributive=two_dist, has_covering_M4=has_m4,
                          thin=modular and two_dist and not has_m4, witnesses=wit)


def classify(L):
    return L.profile


def format_profile_dict(prof):
    """Plain dict of the boolean and integer profile fields."""
    return {"graded": prof.graded, "height": prof.height, "modular": prof.modular,
            "semimodular": prof.semimodular, "distributive": prof.distributive,
            "two_distributive": prof.two_distributive,
            "has_covering_M4": prof.has_covering_M4, "thin": prof.thin}


def _require_modular(L):
    if not L.profile.modular:
        raise NotModular(f"modular law fails at {L.profile.witnesses['modular']!r}")


# ------------------------------------------------------------- join-irreducibles

@dataclass(frozen=True)
class JoinIrreducibles:
    J: tuple
    lower_star: dict
    J_of: dict


def join_irreducibles(L):
    J_idx = [i for i in range(L.n) if len(L.lower_covers_idx[i]) == 1]
    J = tuple(L.labels[i] for i in J_idx)
    lower_star = {L.labels[i]: L.labels[L.lower_covers_idx[i][0]] for i in J_idx}
    ja = np.asarray(J_idx, dtype=np.int64)
    J_of = {}
    for a in range(L.n):
        below = ja[L.leq_matrix[ja, a]] if ja.size else ja
        J_of[L.labels[a]] = frozenset(L.labels[i] for i in below)
    return JoinIrreducibles(J, lower_star, J_of)


# ------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Congruence:
    classes: tuple     # tuple of frozensets of labels, sorted by least member

    def class_of(self, x):
        for c in self.classes:
            if x in c:
                return c
        raise KeyError(x)


def _classes_from_labels(L, lab):
    groups = {}
    for i, r in enumerate(lab):
        groups.setdefault(int(r), []).append(L.labels[i])
    return Congruence(tuple(frozenset(groups[k]) for k in sorted(groups)))


def principal_congruence(L, a, b):
    lab = K.principal_congruence(L.meet_table, L.join_table, L.index[a], L.index[b])
    return _classes_from_labels(L, lab)


def _join_partitions(n, labelings):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for lab in labelings:
        for i, r in enumerate(lab):
            ra, rb = find(i), find(int(r))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(i) for i in range(n)], dtype=np.int64)


def quotient(L, cong):
    """Quotient lattice; each class is named by the label of its least member."""
    reps = []
    cls_of = np.empty(L.n, dtype=np.int64)
    for k, c in enumerate(cong.classes):
        idx = sorted(L.index[x] for x in c)
        reps.append(idx[0])
        for i in idx:
            cls_of[i] = k
    order = sorted(range(len(reps)), key=lambda k: reps[k])
    reps = [reps[k] for k in order]
    pos = {k: t for t, k in enumerate(order)}
    m = len(reps)
    leq = np.zeros((m, m), dtype=np.bool_)
    for s, i in enumerate(reps):
        for t, j in enumerate(reps):
            leq[s, t] = pos[cls_of[L.join_table[i, j]]] == t
    return Lattice([L.labels[i] for i in reps], leq)


@dataclass(frozen=True)
class MaximalCongruences:
    congruences: tuple
    s: int
    factors: tuple


def _atom_congruences(L):
    seen = {}
    for i, j in L.cover_pairs:
        lab = K.principal_congruence(L.meet_table, L.join_table, i, j)
        seen.setdefault(lab.tobytes(), lab)
    return list(seen.values())


def maximal_congruences(L):
    """Maximal congruences of a modular lattice and the quotient factors.

    The congruence lattice of a finite modular lattice is Boolean with the
    prime-quotient congruences as atoms, so the coatoms are the joins of all
    atoms but one.
    """
    _require_modular(L)
    atoms = _atom_congruences(L)
    if not atoms:   # one-element lattice
        return MaximalCongruences((), 0, ())
    congs, factors = [], []
    for k in range(len(atoms)):
        rest = atoms[:k] + atoms[k + 1:]
        lab = _join_partitions(L.n, rest) if rest else np.arange(L.n)
        c = _classes_from_labels(L, lab)
        congs.append(c)
        factors.append(quotient(L, c))
    order = sorted(range(len(congs)),
                   key=lambda k: tuple(label_key(tuple(sort_labels(c))) for c in congs[k].classes))
    return MaximalCongruences(tuple(congs[k] for k in order), len(congs),
                              tuple(factors[k] for k in order))


def is_subdirectly_irreducible(L):
    if L.n <= 1:
        return False
    atoms = {K.principal_congruence(L.meet_table, L.join_table, i, j).tobytes()
             for i, j in L.cover_pairs}
    if L.profile.modular:
        return len(atoms) == 1
    # general case: a unique minimal nontrivial principal congruence
    parts = [np.frombuffer(b, dtype=np.int64) for b in atoms]
    sizes = [len(set(p.tolist())) for p in parts]
    mono = [p for p, s in zip(parts, sizes) if s == max(sizes)]
    return len(mono) == 1 and all(_refines(mono[0], p) for p in parts)


def _refines(a, b):
    return all(b[i] == b[int(a[i])] for i in range(len(a)))


@dataclass(frozen=True)
class JIBound:
    lhs: int
    rhs: int
    sharp: bool


def ji_bound(L):
    _require_modular(L)
    J = join_irreducibles(L).J
    s = maximal_congruences(L).s
    rhs = 2 * L.height - s
    return JIBound(len(J), rhs, len(J) == rhs)


# ------------------------------------------------------------- MoPLS

@dataclass(frozen=True)
class MoPLS:
    parent: Lattice
    points: tuple
    order: frozenset         # strict pairs (p, q) with p < q
    lines: frozenset         # frozensets of three points
    line_join: dict          # line -> lattice element

    def pls(self):
        from .pls import build_pls
        return build_pls(self.points, self.lines)

    def sorted_lines(self):
        return sorted((tuple(sort_labels(l)) for l in self.lines), key=label_key)


def _constant_join_classes(L, J):
    """Map join value -> list of maximal cliques (as index tuples) of size >= 3."""
    pos = {L.index[p]: k for k, p in enumerate(J)}
    jidx = sorted(pos)
    by_join = {}
    for a, b in itertools.combinations(jidx, 2):
        by_join.setdefault(int(L.join_table[a, b]), []).append((a, b))
    out = {}
    for v, edges in by_join.items():
        if len(edges) < 3:
            continue
        g = nx.Graph(edges)
        cl = [tuple(sorted(c)) for c in nx.find_cliques(g) if len(c) >= 3]
        if cl:
            out[v] = sorted(cl)
    return out


def all_line_classes(L):
    """Join value -> all 3-point lines with that join (lexicographic)."""
    _require_modular(L)
    J = join_irreducibles(L).J
    res = {}
    for v, cl in _constant_join_classes(L, J).items():
        big = [c for c in cl if len(c) > 3]
        if big:
            pts = [L.labels[i] for i in big[0]]
            raise LineTooLarge(f"points {pts!r} have constant pairwise join {L.labels[v]!r}")
        res[L.labels[v]] = [tuple(L.labels[i] for i in c) for c in cl]
    return res


def extract_mopls(L):
    """MoPLS with the lexicographically least line for each join value."""
    classes = all_line_classes(L)
    return _mopls_from_choice(L, {v: cl[0] for v, cl in classes.items()})


def all_mopls(L, limit=1000):
    """Every maximal family of mutually inequivalent lines (small inputs)."""
    from .errors import BoundExceeded
    classes = all_line_classes(L)
    keys = sort_labels(classes)
    total = 1
    for k in keys:
        total *= len(classes[k])
    if total > limit:
        raise BoundExceeded(f"{total} MoPLS families exceed limit {limit}")
    return [_mopls_from_choice(L, dict(zip(keys, pick)))
            for pick in itertools.product(*(classes[k] for k in keys))]


def _mopls_from_choice(L, choice):
    J = join_irreducibles(L).J
    order = frozenset((p, q) for p in J for q in J if p != q and L.leq(p, q))
    lines = {frozenset(l): v for v, l in choice.items()}
    return MoPLS(L, J, order, frozenset(lines), lines)


def reconstruct_from_mopls(points, order, lines):
    """Lattice of all order ideals X with |l & X| >= 2 => l <= X for every line.

    ``order`` lists pairs (p, q) meaning p <= q; the transitive closure is
    taken.  Elements are labelled by the sorted tuple of their points.
    """
    points = sort_labels(set(points))
    pset = set(points)
    lines = [frozenset(l) for l in lines]
    for l in lines:
        if len(l) != 3:
            raise InvalidPLS(f"line {sort_labels(l)!r} does not have 3 points")
        if not l <= pset:
            raise InvalidPLS(f"line {sort_labels(l)!r} uses unknown points")
    for a, b in itertools.combinations(lines, 2):
        if len(a & b) > 1:
            raise InvalidPLS("two lines share two points")
    down = {p: {p} for p in points}
    g = nx.DiGraph()
    g.add_nodes_from(points)
    for p, q in order:
        if p not in pset or q not in pset:
            raise InvalidPLS(f"order pair ({p!r}, {q!r}) uses unknown points")
        if p != q:
            g.add_edge(p, q)
    if not nx.is_directed_acyclic_graph(g):
        raise InvalidPLS("order relation has a cycle")
    for q in points:
        down[q] = set(nx.ancestors(g, q)) | {q}

    def close(X):
        X = set(X)
        changed = True
        while changed:
            changed = False
            for p in list(X):
                if not down[p] <= X:
                    X |= down[p]
                    changed = True
            for l in lines:
                if len(l & X) == 2:
                    X |= l
                    changed = True
        return frozenset(X)

    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for X in frontier:
            for p in points:
                if p not in X:
                    Y = close(X | {p})
                    if Y not in seen:
                        seen.add(Y)
                        nxt.append(Y)
        frontier = nxt
    return lattice_from_sets(seen)


# ------------------------------------------------------------- localization

@dataclass(frozen=True)
class LocalizedPLS:
    points: tuple
    lines: tuple        # sorted tuples of 2 or 3 points
    acyclic: bool


def incidence_acyclic(points, lines):
    """True when the point/line incidence graph is a forest."""
    g = nx.Graph()
    g.add_nodes_from(("p", p) for p in points)
    for k, l in enumerate(lines):
        for p in l:
            g.add_edge(("l", k), ("p", p))
    return nx.is_forest(g) if g.number_of_nodes() else True


def localize_at_coatom(L, mopls, a):
    if a not in L.index or a not in L.coatoms():
        raise NotACoatom(f"{a!r} is not a coatom")
    Ja = join_irreducibles(L).J_of[a]
    pts = tuple(p for p in mopls.points if p not in Ja)
    keep = set(pts)
    lines = []
    for l in mopls.lines:
        r = l & keep
        if len(r) >= 2:
            lines.append(tuple(sort_labels(r)))
    lines.sort(key=label_key)
    return LocalizedPLS(pts, tuple(lines), incidence_acyclic(pts, lines))


def is_locally_acyclic(L, mopls=None):
    mopls = mopls or extract_mopls(L)
    return all(localize_at_coatom(L, mopls, a).acyclic for a in L.coatoms())
