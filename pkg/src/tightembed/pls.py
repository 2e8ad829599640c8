"""Partial linear spaces whose lines all have three points.

Covers paths and cycles, the QIMP / UMP / NMPL / BMPL hierarchy, sparsity,
rank, adding paths, recognizing augmented UMPs and point splitting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from .errors import (BoundExceeded, LinesShareTwoPoints, LineSizeNot3,
                     NotAQimp, NotAUmp, PathCollision, UnknownPoint, InputError)
from .lattice import label_key, sort_labels

DEFAULT_POINT_BOUND = 40
DEFAULT_AUGMENT_LINE_BOUND = 16
DEFAULT_SPLIT_LINE_BOUND = 12


def _line(xs):
    return tuple(sort_labels(xs))


@dataclass(frozen=True)
class PLS:
    """Points plus 3-point lines, any two lines sharing at most one point.

    Build with :func:`build_pls`; ``points`` and ``lines`` are kept sorted.
    """
    points: tuple
    lines: tuple

    @cached_property
    def point_set(self):
        return frozenset(self.points)

    @cached_property
    def line_sets(self):
        return tuple(frozenset(l) for l in self.lines)

    @cached_property
    def _through(self):
        d = {p: [] for p in self.points}
        for l in self.lines:
            for p in l:
                d[p].append(l)
        return {p: tuple(v) for p, v in d.items()}

    @cached_property
    def _pair_line(self):
        d = {}
        for l in self.lines:
            for a, b in itertools.combinations(l, 2):
                d[frozenset((a, b))] = l
        return d

    @cached_property
    def order_index(self):
        return {p: i for i, p in enumerate(self.points)}

    def lines_through(self, p):
        return self._through[p]

    def degree(self, p):
        return len(self._through[p])

    def line_of(self, p, q):
        """The line [p, q], or None."""
        return self._pair_line.get(frozenset((p, q)))

    def quasi_isolated(self, line):
        return tuple(p for p in line if self.degree(p) == 1)

    @property
    def rank(self):
        return len(self.points) - len(self.lines)

    def restrict_lines(self, lines, points=None):
        """Sub-PLS on the given lines (points default to their union)."""
        lines = [tuple(l) for l in lines]
        if points is None:
            points = {p for l in lines for p in l}
        return PLS(tuple(sort_labels(points)), tuple(sorted(map(_line, lines), key=label_key)))

    def __repr__(self):
        return f"PLS(points={len(self.points)}, lines={len(self.lines)})"


def build_pls(points, lines):
    pts = set(points)
    ls = []
    for l in lines:
        l = tuple(l)
        if len(set(l)) != 3 or len(l) != 3:
            raise LineSizeNot3(f"line {l!r} does not have exactly 3 points")
        for p in l:
            if p not in pts:
                raise UnknownPoint(f"line {l!r} uses unknown point {p!r}")
        ls.append(_line(l))
    ls = sorted(set(ls), key=label_key)
    seen = {}
    for l in ls:
        for a, b in itertools.combinations(l, 2):
            key = frozenset((a, b))
            if key in seen:
                raise LinesShareTwoPoints(f"lines {seen[key]!r} and {l!r} share {sort_labels(key)!r}")
            seen[key] = l
    return PLS(tuple(sort_labels(pts)), tuple(ls))


def pls_from_lines(lines, extra_points=()):
    lines = [tuple(l) for l in lines]
    return build_pls({p for l in lines for p in l} | set(extra_points), lines)


# ------------------------------------------------------------- components, rank

@dataclass(frozen=True)
class ComponentsRank:
    components: tuple
    c: int
    rk: int
    isolated: tuple


def _incidence_graph(p):
    g = nx.Graph()
    g.add_nodes_from(("p", x) for x in p.points)
    for l in p.lines:
        for x in l:
            g.add_edge(("l", l), ("p", x))
    return g


def components(p):
    g = nx.Graph()
    g.add_nodes_from(p.points)
    for a, b, c in p.lines:
        g.add_edge(a, b)
        g.add_edge(b, c)
    comps = [tuple(sort_labels(c)) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: label_key(c[0]))


def components_and_rank(p):
    comps = components(p)
    iso = tuple(c[0] for c in comps if len(c) == 1)
    return ComponentsRank(tuple(comps), len(comps), p.rank, iso)


# ------------------------------------------------------------- paths and cycles

def is_path(p, seq):
    """Check the path conditions on a junction sequence."""
    if len(seq) < 2:
        return False
    lines = []
    for a, b in zip(seq, seq[1:]):
        l = p.line_of(a, b) if a != b else None
        if l is None:
            return False
        lines.append(frozenset(l))
    if len(set(lines)) != len(lines):
        return False
    for i, j in itertools.combinations(range(len(lines)), 2):
        if bool(lines[i] & lines[j]) != (j == i + 1):
            return False
    return True


def path_support(p, seq):
    return frozenset().union(*(p.line_of(a, b) for a, b in zip(seq, seq[1:])))


@dataclass(frozen=True)
class Cycle:
    junctions: tuple
    lines: tuple          # lines[i] = [p_i, p_{i+1}], the last one closes the cycle
    midpoints: tuple      # midpoints[i] lies on lines[i]

    @property
    def n(self):
        return len(self.junctions)

    @cached_property
    def support(self):
        return frozenset(self.junctions) | frozenset(self.midpoints)

    def midpoint_line(self, m):
        return self.lines[self.midpoints.index(m)]

    def line_index_of_midpoint(self, m):
        return self.midpoints.index(m)


def make_cycle(p, junctions):
    """Cycle object for a junction tuple, or None if it is not a cycle."""
    js = tuple(junctions)
    n = len(js)
    if n < 3 or not is_path(p, js):
        return None
    close = p.line_of(js[-1], js[0])
    if close is None:
        return None
    sup = path_support(p, js)
    (q,) = set(close) - {js[-1], js[0]}
    if q in sup:
        return None
    lines = [p.line_of(a, b) for a, b in zip(js, js[1:])] + [close]
    mids = [next(x for x in l if x not in (a, b))
            for l, (a, b) in zip(lines, zip(js, js[1:] + js[:1]))]
    return Cycle(js, tuple(lines), tuple(mids))


def canonical_junctions(p, js):
    """Least rotation/reflection of a junction tuple under the point order."""
    idx = p.order_index
    n = len(js)
    best = None
    for seq in (list(js), list(reversed(js))):
        for r in range(n):
            cand = tuple(seq[r:] + seq[:r])
            key = tuple(idx[x] for x in cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def enumerate_cycles(p, max_len=None, bound=DEFAULT_POINT_BOUND):
    """All cycles, each once in canonical form, sorted by (length, junctions)."""
    if len(p.points) > bound:
        raise BoundExceeded(f"{len(p.points)} points exceed the cycle-enumeration bound {bound}")
    idx = p.order_index
    found = {}
    limit = max_len if max_len is not None else len(p.lines)

    def extend(js, used, lines):
        k = len(js)
        last = js[-1]
        if k >= 3:
            close = p.line_of(last, js[0])
            if close is not None and close not in lines:
                (q,) = set(close) - {last, js[0]}
                if q not in used:
                    canon = canonical_junctions(p, js)
                    if canon not in found:
                        found[canon] = make_cycle(p, canon)
        if k >= limit:
            return
        for l in p.lines_through(last):
            if l in lines:
                continue
            if any(x in used for x in l if x != last):
                continue
            for r in l:
                if r == last or idx[r] < idx[js[0]]:
                    continue
                extend(js + (r,), used | set(l), lines + (l,))

    for s in p.points:
        extend((s,), {s}, ())
    cyc = [c for c in found.values() if c is not None]
    return sorted(cyc, key=lambda c: (c.n, tuple(idx[x] for x in c.junctions)))


def is_acyclic(p):
    return not enumerate_cycles(p, max_len=None, bound=max(DEFAULT_POINT_BOUND, len(p.points)))


# ------------------------------------------------------------- midpoint-links

@dataclass(frozen=True)
class MidpointLink:
    cycle: Cycle
    kind: int             # 1: midpoint to junction, 2: midpoint to midpoint
    path: tuple
    benign: bool


def _benign(c, x, y, kind):
    if kind == 1:
        return y in c.midpoint_line(x)
    i, j = c.line_index_of_midpoint(x), c.line_index_of_midpoint(y)
    return bool(set(c.lines[i]) & set(c.lines[j]))


def _pair_kind(c, x, y):
    mids = set(c.midpoints)
    if x in mids and y in mids:
        return 2
    if x in mids or y in mids:
        return 1
    return 0


def midpoint_links(p, c):
    """Every path meeting C* exactly in its two ends, one or both of which are
    midpoints.  Type-1 links are oriented midpoint first; type-2 links are
    listed once, starting at the smaller midpoint."""
    sup = c.support
    idx = p.order_index
    mids = set(c.midpoints)
    out = []

    cl = set(c.lines)

    def dfs(path, used, lines):
        last = path[-1]
        for l in p.lines_through(last):
            if l in lines or l in cl:
                continue
            others = [x for x in l if x != last]
            if any(x in used for x in others):
                continue
            inside = [x for x in others if x in sup]
            if len(inside) > 1:
                continue
            if inside:
                (y,) = inside
                kind = _pair_kind(c, path[0], y)
                if kind == 2 and idx[y] < idx[path[0]]:
                    continue
                if kind:
                    out.append(MidpointLink(c, kind, path + (y,), _benign(c, path[0], y, kind)))
                continue
            for r in others:
                dfs(path + (r,), used | set(others), lines + (l,))

    for m in c.midpoints:
        dfs((m,), {m}, ())
    out.sort(key=lambda k: (k.kind, len(k.path), tuple(idx[x] for x in k.path)))
    return out


def _linked_pairs(p, c):
    """Pairs {x, y} of C* joined by a path that meets C* only in x and y."""
    sup = c.support
    outside = [x for x in p.points if x not in sup]
    uf = {x: x for x in outside}

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x
    portals = []
    direct = set()
    cl = set(c.lines)
    for l in p.lines:
        if l in cl:
            continue
        ins = [x for x in l if x in sup]
        outs = [x for x in l if x not in sup]
        if not ins:
            a, b, d = (find(x) for x in l)
            uf[b] = a
            uf[find(d)] = find(a)
        elif len(ins) == 1:
            portals.append((ins[0], outs))
        elif len(ins) == 2:
            direct.add(frozenset(ins))
    reach = {}
    for z, outs in portals:
        reach.setdefault(z, set()).update(find(o) for o in outs)
    pairs = set(direct)
    zs = list(reach)
    for a, b in itertools.combinations(zs, 2):
        if {find(r) for r in reach[a]} & {find(r) for r in reach[b]}:
            pairs.add(frozenset((a, b)))
    return pairs


def link_summary(p, c):
    """(has_link, has_malign_link, has_type2_link) for a cycle, without
    enumerating the link paths themselves."""
    has = bad = t2 = False
    for pair in _linked_pairs(p, c):
        x, y = tuple(pair)
        kind = _pair_kind(c, x, y)
        if not kind:
            continue
        if kind == 1 and x not in c.midpoints:
            x, y = y, x
        has = True
        if kind == 2:
            t2 = True
        if not _benign(c, x, y, kind):
            bad = True
    return has, bad, t2


# ------------------------------------------------------------- classification

@dataclass(frozen=True)
class PLSProfile:
    acyclic: bool
    qimp: bool
    ump: bool
    nmpl: bool
    bmpl: bool
    sparse: bool
    testifying_ordering: tuple
    small_girth: bool
    two_connected_qimp: bool
    n_cycles: int = field(default=0)
    only_type1_links: bool = field(default=True)


def is_qimp(p):
    return all(p.quasi_isolated(l) for l in p.lines)


def testifying_ordering(p):
    """A line order in which every line brings a new point, or None.

    Peels lines with a point of degree one from the back; removability only
    grows as lines disappear, so the greedy peel fails only when no ordering
    exists.
    """
    deg = {x: p.degree(x) for x in p.points}
    remaining = list(p.lines)
    peeled = []
    while remaining:
        pick = None
        for l in reversed(remaining):
            if any(deg[x] == 1 for x in l):
                pick = l
                break
        if pick is None:
            return None
        remaining.remove(pick)
        peeled.append(pick)
        for x in pick:
            deg[x] -= 1
    return tuple(reversed(peeled))


def is_testifying_ordering(order):
    seen = set()
    for i, l in enumerate(order):
        if i and set(l) <= seen:
            return False
        seen |= set(l)
    return True


def cycle_midpoints_by_line(cycles):
    d = {}
    for c in cycles:
        for l, m in zip(c.lines, c.midpoints):
            d.setdefault(l, set()).add(m)
    return d


def classify_pls(p, bound=DEFAULT_POINT_BOUND):
    cycles = enumerate_cycles(p, bound=bound)
    qimp = is_qimp(p)
    mids = cycle_midpoints_by_line(cycles)
    ump = all(len(v) == 1 for v in mids.values())
    nmpl = bmpl = True
    only1 = True
    for c in cycles:
        has, bad, t2 = link_summary(p, c)
        nmpl &= not has
        bmpl &= not bad
        only1 &= not t2
    order = testifying_ordering(p)
    two_conn = False
    if qimp and cycles and len(components(p)) == 1:
        interesting = set(mids)
        covered = set()
        for l in interesting:
            covered |= set(l)
        two_conn = covered == set(p.points) and len(interesting) == len(p.lines)
    return PLSProfile(acyclic=not cycles, qimp=qimp, ump=ump, nmpl=nmpl, bmpl=bmpl,
                      sparse=order is not None, testifying_ordering=order or (),
                      small_girth=all(c.n <= 4 for c in cycles),
                      two_connected_qimp=two_conn, n_cycles=len(cycles),
                      only_type1_links=only1)


# ------------------------------------------------------------- blueprints

def plotted_points(p, cycles=None):
    """For each line of a QIMP the quasi-isolated point plotted on its edge."""
    if not is_qimp(p):
        raise NotAQimp("some line has no quasi-isolated point")
    cycles = enumerate_cycles(p) if cycles is None else cycles
    mids = cycle_midpoints_by_line(cycles)
    idx = p.order_index
    out = {}
    for l in p.lines:
        qi = p.quasi_isolated(l)
        if l in mids:
            (m,) = mids[l]
            if m not in qi:
                raise NotAQimp(f"cycle midpoint {m!r} of {l!r} is not quasi-isolated")
            out[l] = m
        else:
            out[l] = max(qi, key=lambda x: idx[x])
    return out


def blueprint_graph(p):
    """Graph whose edges carry the lines of a connected QIMP.

    Each edge has attributes ``line`` and ``midpoint`` (the plotted point).
    """
    if len(components(p)) != 1:
        raise NotAQimp("blueprint graphs are defined for connected QIMPs")
    plot = plotted_points(p)
    g = nx.Graph()
    plotted = set(plot.values())
    g.add_nodes_from(x for x in p.points if x not in plotted)
    for l, m in plot.items():
        a, b = (x for x in l if x != m)
        g.add_edge(a, b, line=l, midpoint=m)
    return g


def plot_graph(g, fresh=None):
    """QIMP obtained by plotting a new point on each edge of a graph."""
    fresh = fresh or {}
    lines = []
    used = set(g.nodes)
    k = 0
    for a, b in sorted((tuple(sort_labels(e)) for e in g.edges), key=label_key):
        m = fresh.get(frozenset((a, b)))
        if m is None:
            while f"m{k}" in used:
                k += 1
            m = f"m{k}"
        used.add(m)
        lines.append((a, m, b))
    return build_pls(set(g.nodes) | {l[1] for l in lines}, lines)


# ------------------------------------------------------------- trees of QIMPs

@dataclass(frozen=True)
class TreeDecomposition:
    parts: tuple          # PLS components in gluing order
    glue_points: tuple    # glue_points[i]: point shared with earlier parts (None starts a new tree)


def _line_blocks(p):
    g = _incidence_graph(p)
    groups = []
    seen = set()
    for comp in nx.biconnected_components(g):
        ls = sorted({n[1] for n in comp if n[0] == "l"}, key=label_key)
        if len(comp) > 2:     # a genuine 2-connected block
            groups.append(set(ls))
            seen.update(ls)
    for l in p.lines:
        if l not in seen:
            groups.append({l})
    return groups


def tree_decomposition(p):
    prof = classify_pls(p)
    if not prof.ump:
        raise NotAUmp("some interesting line has two different cycle midpoints")
    groups = _line_blocks(p)

    def pts(gr):
        return {x for l in gr for x in l}
    merged = True
    while merged:
        merged = False
        groups.sort(key=lambda gr: label_key(sorted(gr, key=label_key)))
        for i, j in itertools.combinations(range(len(groups)), 2):
            if pts(groups[i]) & pts(groups[j]):
                union = groups[i] | groups[j]
                if is_qimp(p.restrict_lines(union)):
                    groups[i] = union
                    del groups[j]
                    merged = True
                    break
    parts = [p.restrict_lines(gr) for gr in groups]
    covered = {x for gr in groups for l in gr for x in l}
    parts += [PLS((x,), ()) for x in p.points if x not in covered]
    order, glue = [], []
    left = list(range(len(parts)))
    idx = p.order_index
    union = set()
    while left:
        nxt = None
        for k in left:
            shared = union & set(parts[k].points)
            if shared:
                nxt = k
                break
        if nxt is None:
            k = min(left, key=lambda k: idx[parts[k].points[0]])
            glue.append(None)
        else:
            k = nxt
            shared = union & set(parts[k].points)
            if len(shared) != 1:
                raise NotAUmp("decomposition parts overlap in more than one point")
            glue.append(next(iter(shared)))
        order.append(parts[k])
        union |= set(parts[k].points)
        left.remove(k)
    for part in order:
        if not is_qimp(part):
            raise NotAUmp("a decomposition part is not a QIMP")
    return TreeDecomposition(tuple(order), tuple(glue))


# ------------------------------------------------------------- adding paths

def fresh_names(existing, count, prefix="z"):
    existing = set(existing)
    out = []
    if existing and all(isinstance(x, int) for x in existing):
        start = max(existing) + 1
        return list(range(start, start + count))
    k = 0
    while len(out) < count:
        name = f"{prefix}{k}"
        if name not in existing:
            out.append(name)
        k += 1
    return out


@dataclass(frozen=True)
class PathAddition:
    pls: PLS
    path: tuple             # junctions x, z_1, ..., z_s, y
    midpoints: tuple
    new_lines: tuple
    benign_links: tuple     # MidpointLink records of cycles of the old PLS


def add_path(p, x, y, inner_count=0, inner=None, midpoints=None):
    """Add the path [x, z_1, ..., z_s, y] on fresh points."""
    if x == y:
        raise InputError("path ends must differ")
    for e in (x, y):
        if e not in p.point_set:
            raise UnknownPoint(f"{e!r} is not a point")
    if inner is not None:
        inner = list(inner)
        inner_count = len(inner)
    s = inner_count
    names = fresh_names(p.points, 2 * s + 1)
    if inner is None:
        inner = names[:s]
    if midpoints is None:
        midpoints = [m for m in names if m not in inner][: s + 1]
    midpoints = list(midpoints)
    if len(midpoints) != s + 1:
        raise InputError("need one midpoint per new line")
    new = inner + midpoints
    if len(set(new)) != len(new) or set(new) & p.point_set:
        raise PathCollision("new path points must be fresh and distinct")
    js = [x] + inner + [y]
    new_lines = [(a, m, b) for (a, b), m in zip(zip(js, js[1:]), midpoints)]
    if s == 0 and p.line_of(x, y) is not None:
        raise PathCollision(f"{x!r} and {y!r} already share a line")
    q = build_pls(set(p.points) | set(new), list(p.lines) + new_lines)
    links = []
    for c in enumerate_cycles(p):
        if x in c.support and y in c.support:
            kind = _pair_kind(c, x, y)
            if kind:
                a, b = (x, y) if kind == 2 or x in c.midpoints else (y, x)
                if _benign(c, a, b, kind):
                    links.append(MidpointLink(c, kind, tuple(js) if a == x else tuple(reversed(js)), True))
    return PathAddition(q, tuple(js), tuple(midpoints), tuple(_line(l) for l in new_lines), tuple(links))


@dataclass(frozen=True)
class AugmentStep:
    cycle: tuple            # junction tuple of the cycle the link belongs to
    link: tuple             # junctions of the added path, link start first
    kind: int
    midpoints: tuple        # third points of the added lines, in path order


def replay_history(base, history):
    """Rebuild a PLS from a base PLS and augmentation steps (oldest first)."""
    cur = base
    for st in history:
        link = list(st.link)
        res = add_path(cur, link[0], link[-1], inner=link[1:-1], midpoints=st.midpoints)
        if not any(l.kind == st.kind and canonical_junctions(cur, l.cycle.junctions)
                   == canonical_junctions(cur, st.cycle) for l in res.benign_links):
            raise PathCollision(f"step {st!r} is not a benign midpoint-link of type {st.kind}")
        cur = res.pls
    return cur


def _removable_paths(p):
    """Paths whose inner junctions lie on exactly two lines and whose
    midpoints lie on one line, so that deleting them leaves the ends."""
    out = []
    for x in p.points:
        stack = [((x,), (), ())]
        while stack:
            js, lines, mids = stack.pop()
            last = js[-1]
            for l in p.lines_through(last):
                if l in lines:
                    continue
                for m in l:
                    if m == last or p.degree(m) != 1:
                        continue
                    (z,) = [t for t in l if t not in (last, m)]
                    if z in js:
                        continue
                    nj, nl, nm = js + (z,), lines + (l,), mids + (m,)
                    out.append((nj, nl, nm))
                    if p.degree(z) == 2:
                        stack.append((nj, nl, nm))
    seen = set()
    res = []
    for js, ls, ms in out:
        key = frozenset(ls)
        if key in seen:
            continue
        seen.add(key)
        res.append((js, ls, ms))
    return res


@dataclass(frozen=True)
class AugmentedRecognition:
    yes: bool
    base: PLS | None
    history: tuple          # AugmentStep records, oldest first


def recognize_augmented_ump(p, type1_only=False, line_bound=DEFAULT_AUGMENT_LINE_BOUND):
    if len(p.lines) > line_bound:
        raise BoundExceeded(f"{len(p.lines)} lines exceed the recognition bound {line_bound}")
    failed = set()

    def search(q):
        key = q.lines
        if key in failed:
            return None
        if classify_pls(q).ump:
            return []
        for js, ls, ms in _removable_paths(q):
            inner = set(js[1:-1]) | set(ms)
            rest = q.restrict_lines([l for l in q.lines if l not in ls],
                                    points=[t for t in q.points if t not in inner])
            x, y = js[0], js[-1]
            step = None
            for c in enumerate_cycles(rest):
                if x in c.support and y in c.support:
                    kind = _pair_kind(c, x, y)
                    if not kind or (type1_only and kind == 2):
                        continue
                    a, b = (x, y) if kind == 2 or x in c.midpoints else (y, x)
                    if _benign(c, a, b, kind):
                        link = js if a == x else tuple(reversed(js))
                        mids = ms if a == x else tuple(reversed(ms))
                        step = AugmentStep(c.junctions, link, kind, mids)
                        if kind == 1:
                            break
            if step is None:
                continue
            sub = search(rest)
            if sub is not None:
                return [(rest, step)] + sub
        failed.add(key)
        return None

    res = search(p)
    if res is None:
        return AugmentedRecognition(False, None, ())
    base = res[-1][0] if res else p
    history = tuple(step for _, step in reversed(res))
    return AugmentedRecognition(True, base, history)


# ------------------------------------------------------------- point splitting

@dataclass(frozen=True)
class SplitRank:
    r_star: int
    acyclic_witness: PLS
    splits: tuple           # (point, lines moved to the new copy)
    identity_holds: bool


def _cyclomatic(p):
    # cycle rank of the point/line incidence graph
    c = len(components(p))
    return 3 * len(p.lines) - len(p.points) - len(p.lines) + c


def split_rank(p, line_bound=DEFAULT_SPLIT_LINE_BOUND):
    """Fewest point splittings (keeping the component count) that make p
    acyclic, by depth-first iterative deepening.

    A split moves a nonempty proper part of a point's line pencil onto a new
    copy of the point.  The cycle rank of the incidence graph bounds the
    remaining depth from below, which keeps the deepening search short.
    """
    if len(p.lines) > line_bound:
        raise BoundExceeded(f"{len(p.lines)} lines exceed the split bound {line_bound}")
    c0 = len(components(p))
    counter = itertools.count()

    def splits(q):
        for x in q.points:
            pencil = q.lines_through(x)
            if len(pencil) < 2:
                continue
            rest = pencil[1:]
            for r in range(0, len(rest)):
                for moved in itertools.combinations(rest, r + 1):
                    if len(moved) == len(pencil):
                        continue
                    yield x, moved

    def apply(q, x, moved):
        new = ("split", x, next(counter))
        lines = [tuple(new if t == x else t for t in l) if l in moved else l for l in q.lines]
        return PLS(tuple(sort_labels(list(q.points) + [new])),
                   tuple(sorted((_line(l) for l in lines), key=label_key)))

    def dfs(q, depth, trail):
        if not enumerate_cycles(q, bound=10 ** 6):
            return q, trail
        if depth == 0 or _cyclomatic(q) > depth:
            return None
        for x, moved in splits(q):
            q2 = apply(q, x, moved)
            if len(components(q2)) != c0:
                continue
            r = dfs(q2, depth - 1, trail + ((x, moved),))
            if r is not None:
                return r
        return None

    depth = 0
    while True:
        r = dfs(p, depth, ())
        if r is not None:
            q, trail = r
            ident = p.rank == len(p.lines) - depth + c0
            return SplitRank(depth, q, trail, ident)
        depth += 1
        if depth > len(p.points) + 2 * len(p.lines):
            raise BoundExceeded("no acyclic splitting found")


# ------------------------------------------------------------- triangle configurations

def find_triangle_configurations(p):
    """Four lines meeting pairwise in six distinct points, with no further
    line of p inside those six points.  Returned as sorted 4-tuples of lines."""
    g = nx.Graph()
    g.add_nodes_from(p.lines)
    for a, b in itertools.combinations(p.lines, 2):
        if set(a) & set(b):
            g.add_edge(a, b)
    out = []
    for clique in nx.enumerate_all_cliques(g):
        if len(clique) < 4:
            continue
        if len(clique) > 4:
            break
        meets = [frozenset(set(a) & set(b)) for a, b in itertools.combinations(clique, 2)]
        six = set().union(*meets)
        if len(six) != 6 or set().union(*map(set, clique)) != six:
            continue
        if any(set(l) <= six for l in p.lines if l not in clique):
            continue
        out.append(tuple(sorted(clique, key=label_key)))
    return sorted(out, key=label_key)
