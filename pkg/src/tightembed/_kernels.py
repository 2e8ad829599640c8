"""Dense lattice and GF(2) kernels.

Every kernel exists twice: a numba-compiled loop version and a vectorized
numpy version.  The dispatch table at the bottom picks one based on the
TIGHTEMBED_DISABLE_NUMBA environment variable (any non-empty value other
than "0" disables numba).  Tests compare both backends directly.

Conventions: elements are 0..n-1 in a linear extension of the order, so
index 0 is the bottom and n-1 the top.  ``leq[i, j]`` is a boolean matrix.
Kernels that search for a counterexample return an int64 array holding the
offending tuple, or all -1 when none exists.
"""
import os

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


def numba_disabled():
    flag = os.environ.get("TIGHTEMBED_DISABLE_NUMBA", "")
    return flag not in ("", "0") or not HAVE_NUMBA


# ---------------------------------------------------------------- numba

@njit(cache=True)
def _bound_table_nb(leq, upper):
    # upper=True computes joins (least upper bound), else meets
    n = leq.shape[0]
    out = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            cand = -1
            if upper:
                for k in range(n):
                    if leq[i, k] and leq[j, k]:
                        cand = k
                        break
            else:
                for k in range(n - 1, -1, -1):
                    if leq[k, i] and leq[k, j]:
                        cand = k
                        break
            if cand < 0:
                continue
            ok = True
            for k in range(n):
                if upper:
                    if leq[i, k] and leq[j, k] and not leq[cand, k]:
                        ok = False
                        break
                else:
                    if leq[k, i] and leq[k, j] and not leq[k, cand]:
                        ok = False
                        break
            if ok:
                out[i, j] = cand
                out[j, i] = cand
    return out


@njit(cache=True)
def _modular_violation_nb(leq, meet, join):
    n = leq.shape[0]
    res = np.full(3, -1, dtype=np.int64)
    for x in range(n):
        for z in range(n):
            if not leq[x, z] or x == z:
                continue
            for y in range(n):
                if join[x, meet[y, z]] != meet[join[x, y], z]:
                    res[0] = x
                    res[1] = y
                    res[2] = z
                    return res
    return res


@njit(cache=True)
def _distributive_violation_nb(meet, join):
    n = meet.shape[0]
    res = np.full(3, -1, dtype=np.int64)
    for x in range(n):
        for y in range(n):
            for z in range(y + 1, n):
                if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                    res[0] = x
                    res[1] = y
                    res[2] = z
                    return res
    return res


@njit(cache=True)
def _two_distributive_violation_nb(meet, join):
    # a ^ (b v c v d) == (a ^ (b v c)) v (a ^ (b v d)) v (a ^ (c v d))
    n = meet.shape[0]
    res = np.full(4, -1, dtype=np.int64)
    for b in range(n):
        for c in range(b + 1, n):
            bc = join[b, c]
            for d in range(c + 1, n):
                bd = join[b, d]
                cd = join[c, d]
                bcd = join[bc, d]
                for a in range(n):
                    lhs = meet[a, bcd]
                    rhs = join[join[meet[a, bc], meet[a, bd]], meet[a, cd]]
                    if lhs != rhs:
                        res[0] = a
                        res[1] = b
                        res[2] = c
                        res[3] = d
                        return res
    return res


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _principal_congruence_nb(meet, join, a, b):
    n = meet.shape[0]
    parent = np.arange(n)
    qa = np.empty(n + 1, dtype=np.int64)
    qb = np.empty(n + 1, dtype=np.int64)
    head = 0
    tail = 0
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra != rb:
        parent[rb] = ra
        qa[tail] = a
        qb[tail] = b
        tail += 1
    while head < tail:
        x = qa[head]
        y = qb[head]
        head += 1
        for z in range(n):
            for k in range(2):
                if k == 0:
                    u = join[x, z]
                    v = join[y, z]
                else:
                    u = meet[x, z]
                    v = meet[y, z]
                ru = _find(parent, u)
                rv = _find(parent, v)
                if ru != rv:
                    parent[rv] = ru
                    qa[tail] = u
                    qb[tail] = v
                    tail += 1
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = _find(parent, i)
    return out


@njit(cache=True)
def _gf2_rank_nb(vecs):
    rows = vecs.copy()
    rank = 0
    m = rows.shape[0]
    for bit in range(64):
        mask = np.uint64(1) << np.uint64(bit)
        piv = -1
        for i in range(rank, m):
            if rows[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        tmp = rows[piv]
        rows[piv] = rows[rank]
        rows[rank] = tmp
        for i in range(m):
            if i != rank and (rows[i] & mask):
                rows[i] ^= rows[rank]
        rank += 1
        if rank == m:
            break
    return rank


# ---------------------------------------------------------------- numpy

def _bound_table_np(leq, upper):
    n = leq.shape[0]
    rel = leq if upper else leq.T
    out = np.full((n, n), -1, dtype=np.int64)
    idx = np.arange(n)
    for i in range(n):
        common = rel[i][None, :] & rel            # row j: bounds of {i, j}
        has = common.any(axis=1)
        if upper:
            cand = np.argmax(common, axis=1)
        else:
            cand = n - 1 - np.argmax(common[:, ::-1], axis=1)
        # candidate must lie below (above) every common bound
        ok = has & ~(common & ~rel[cand]).any(axis=1)
        out[i, idx[ok]] = cand[ok]
    return out


def _modular_violation_np(leq, meet, join):
    n = leq.shape[0]
    ys = np.arange(n)
    for x in range(n):
        zs = np.nonzero(leq[x])[0]
        zs = zs[zs != x]
        if zs.size == 0:
            continue
        # lhs[y, z] = x v (y ^ z), rhs[y, z] = (x v y) ^ z
        lhs = join[x][meet[:, zs]]
        rhs = meet[join[x, ys][:, None], zs[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            y, k = bad[0]
            return np.array([x, y, zs[k]], dtype=np.int64)
    return np.full(3, -1, dtype=np.int64)


def _distributive_violation_np(meet, join):
    n = meet.shape[0]
    for x in range(n):
        lhs = meet[x][join]
        rhs = join[meet[x][:, None], meet[x][None, :]]
        bad = np.argwhere(np.triu(lhs != rhs, 1))
        if bad.size:
            return np.array([x, bad[0][0], bad[0][1]], dtype=np.int64)
    return np.full(3, -1, dtype=np.int64)


def _two_distributive_violation_np(meet, join):
    n = meet.shape[0]
    for b in range(n):
        for c in range(b + 1, n):
            ds = np.arange(c + 1, n)
            if ds.size == 0:
                continue
            bc = join[b, c]
            bd = join[b, ds]
            cd = join[c, ds]
            bcd = join[bc, ds]
            # rows: a, columns: d
            lhs = meet[:, bcd]
            rhs = join[join[meet[:, bc][:, None], meet[:, bd]], meet[:, cd]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                a, k = bad[np.lexsort((bad[:, 0], bad[:, 1]))[0]]
                return np.array([a, b, c, ds[k]], dtype=np.int64)
    return np.full(4, -1, dtype=np.int64)


def _principal_congruence_np(meet, join, a, b):
    n = meet.shape[0]
    labels = np.arange(n)
    labels[b] = labels[a] = min(a, b)
    ncomp = n - (a != b)
    while True:
        r = labels   # each class is named by its least member
        src = [np.arange(n), join.ravel(), meet.ravel()]
        dst = [r, join[r].ravel(), meet[r].ravel()]
        src = np.concatenate(src)
        dst = np.concatenate(dst)
        g = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        k, comp = connected_components(g, directed=False)
        # relabel each class by its smallest element
        first = np.full(k, n, dtype=np.int64)
        np.minimum.at(first, comp, np.arange(n))
        labels = first[comp]
        if k == ncomp:
            return labels
        ncomp = k


def _gf2_rank_np(vecs):
    rows = [int(v) for v in vecs if v]
    rank = 0
    while rows:
        piv = max(rows)
        top = 1 << (piv.bit_length() - 1)
        rows = [r ^ piv if r & top else r for r in rows if r != piv]
        rows = [r for r in rows if r]
        rank += 1
    return rank


# ---------------------------------------------------------------- dispatch

def _normalize_classes(roots):
    """Relabel union-find roots so each class is named by its least member."""
    roots = np.asarray(roots, dtype=np.int64)
    first = {}
    out = np.empty_like(roots)
    for i, r in enumerate(roots):
        out[i] = first.setdefault(int(r), i)
    return out


_NUMBA = {
    "join_table": lambda leq: _bound_table_nb(leq, True),
    "meet_table": lambda leq: _bound_table_nb(leq, False),
    "modular_violation": _modular_violation_nb,
    "distributive_violation": _distributive_violation_nb,
    "two_distributive_violation": _two_distributive_violation_nb,
    "principal_congruence": lambda m, j, a, b: _normalize_classes(
        _principal_congruence_nb(m, j, a, b)),
    "gf2_rank": lambda v: int(_gf2_rank_nb(np.asarray(v, dtype=np.uint64))),
}

_NUMPY = {
    "join_table": lambda leq: _bound_table_np(leq, True),
    "meet_table": lambda leq: _bound_table_np(leq, False),
    "modular_violation": _modular_violation_np,
    "distributive_violation": _distributive_violation_np,
    "two_distributive_violation": _two_distributive_violation_np,
    "principal_congruence": _principal_congruence_np,
    "gf2_rank": _gf2_rank_np,
}

BACKENDS = {"numba": _NUMBA, "numpy": _NUMPY}


def backend_name():
    return "numpy" if numba_disabled() else "numba"


def kernel(name, backend=None):
    return BACKENDS[backend or backend_name()][name]


def join_table(leq, backend=None):
    return kernel("join_table", backend)(np.ascontiguousarray(leq, dtype=np.bool_))


def meet_table(leq, backend=None):
    return kernel("meet_table", backend)(np.ascontiguousarray(leq, dtype=np.bool_))


def modular_violation(leq, meet, join, backend=None):
    v = kernel("modular_violation", backend)(leq, meet, join)
    return None if v[0] < 0 else tuple(int(t) for t in v)


def distributive_violation(meet, join, backend=None):
    v = kernel("distributive_violation", backend)(meet, join)
    return None if v[0] < 0 else tuple(int(t) for t in v)


def two_distributive_violation(meet, join, backend=None):
    v = kernel("two_distributive_violation", backend)(meet, join)
    return None if v[0] < 0 else tuple(int(t) for t in v)


def principal_congruence(meet, join, a, b, backend=None):
    """Class labels (least member of each class) of con(a, b)."""
    return np.asarray(kernel("principal_congruence", backend)(meet, join, int(a), int(b)),
                      dtype=np.int64)


def gf2_rank(vectors, backend=None):
    """Rank over GF(2) of integer bitmask vectors (at most 64 bits wide)."""
    vecs = [int(v) for v in vectors]
    if not vecs:
        return 0
    if max(vecs).bit_length() > 64:
        return _gf2_rank_np(vecs)
    return kernel("gf2_rank", backend)(np.array(vecs, dtype=np.uint64))
