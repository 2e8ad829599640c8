"""Text and JSON formats for lattices, PLSes, graphs, matroids, partitions,
embeddings and augmentation histories.

Labels are ints, plain strings without whitespace or ``(),|:#``, or tuples
of labels written ``(a,b)``.  Every printer emits a canonical form, so
``parse(print(x)) == x``.
"""
from __future__ import annotations

import json
import re

from .embedding import Partition, certify
from .errors import ParseError, TightEmbedError
from .lattice import build_lattice, label_key, sort_labels
from .matroid import BinaryMatroid, labeled_graph
from .pls import AugmentStep, build_pls

_PLAIN = re.compile(r"^[^\s(),|:#\[\]]+$")


# ------------------------------------------------------------- labels

def format_label(x):
    if isinstance(x, bool):
        raise ParseError("booleans are not labels")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        if not _PLAIN.match(x) or re.fullmatch(r"-?\d+", x):
            raise ParseError(f"label {x!r} cannot be written in text form")
        return x
    if isinstance(x, (tuple, frozenset)):
        items = sort_labels(x) if isinstance(x, frozenset) else x
        return "(" + ",".join(format_label(t) for t in items) + ")"
    raise ParseError(f"unsupported label type {type(x).__name__}")


def parse_label(tok):
    tok = tok.strip()
    if re.search(r"\s", tok):
        raise ParseError(f"whitespace inside label {tok!r}")
    val, rest = _parse_label(tok, 0)
    if rest != len(tok):
        raise ParseError(f"trailing characters in label {tok!r}")
    return val


def _parse_label(s, i):
    if i < len(s) and s[i] == "(":
        items = []
        i += 1
        if i < len(s) and s[i] == ")":
            return (), i + 1
        while True:
            v, i = _parse_label(s, i)
            items.append(v)
            if i >= len(s):
                raise ParseError(f"unclosed tuple in {s!r}")
            if s[i] == ",":
                i += 1
            elif s[i] == ")":
                return tuple(items), i + 1
            else:
                raise ParseError(f"unexpected {s[i]!r} in {s!r}")
    j = i
    while j < len(s) and s[j] not in "(),":
        j += 1
    tok = s[i:j]
    if not tok:
        raise ParseError(f"empty label in {s!r}")
    if re.fullmatch(r"-?\d+", tok):
        return int(tok), j
    return tok, j


def _to_json_label(x):
    if isinstance(x, (tuple, frozenset)):
        items = sort_labels(x) if isinstance(x, frozenset) else x
        return [_to_json_label(t) for t in items]
    return x


def _from_json_label(x):
    if isinstance(x, list):
        return tuple(_from_json_label(t) for t in x)
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return x
    raise ParseError(f"bad JSON label {x!r}")


def _lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _header(line, key):
    if line.startswith(key + ":"):
        return [parse_label(t) for t in line[len(key) + 1:].split()]
    return None


def dumps_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _loads_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _guard(fn):
    """Turn stray errors from malformed data into ParseError."""
    def wrapped(text):
        try:
            return fn(text)
        except TightEmbedError:
            raise
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            raise ParseError(f"malformed input: {exc}") from None
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


# ------------------------------------------------------------- lattices

def _elements(L):
    # by height, then label, so the printed form does not depend on storage order
    return sorted(L.labels, key=lambda x: (L.height_of(x), label_key(x)))


def format_lattice(L):
    """``elements:`` header, then one cover pair ``a b`` (a below b) per line."""
    out = ["elements: " + " ".join(format_label(x) for x in _elements(L))]
    for a, b in L.canonical_covers():
        out.append(f"{format_label(a)} {format_label(b)}")
    return "\n".join(out) + "\n"


@_guard
def parse_lattice(text):
    elements = None
    covers = []
    for line in _lines(text):
        h = _header(line, "elements")
        if h is not None:
            elements = h
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"cover line needs two labels: {line!r}")
        covers.append((parse_label(toks[0]), parse_label(toks[1])))
    return build_lattice(covers, elements)


def lattice_to_json(L):
    return {"elements": [_to_json_label(x) for x in _elements(L)],
            "covers": [[_to_json_label(a), _to_json_label(b)] for a, b in L.canonical_covers()]}


@_guard
def lattice_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    els = [_from_json_label(x) for x in d.get("elements", [])] or None
    return build_lattice([(_from_json_label(a), _from_json_label(b)) for a, b in d["covers"]], els)


# ------------------------------------------------------------- PLS

def format_pls(p):
    out = ["points: " + " ".join(format_label(x) for x in p.points)]
    out += [" ".join(format_label(x) for x in l) for l in p.lines]
    return "\n".join(out) + "\n"


@_guard
def parse_pls(text):
    points = None
    lines = []
    for line in _lines(text):
        h = _header(line, "points")
        if h is not None:
            points = h
            continue
        lines.append(tuple(parse_label(t) for t in line.split()))
    if points is None:
        points = {x for l in lines for x in l}
    return build_pls(points, lines)


def pls_to_json(p):
    return {"points": [_to_json_label(x) for x in p.points],
            "lines": [[_to_json_label(x) for x in l] for l in p.lines]}


@_guard
def pls_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    return build_pls([_from_json_label(x) for x in d["points"]],
                     [tuple(_from_json_label(x) for x in l) for l in d["lines"]])


# ------------------------------------------------------------- graphs

def format_graph(g):
    """Edge list ``u v label``; a ``vertices:`` header keeps isolated vertices."""
    out = ["vertices: " + " ".join(format_label(v) for v in g.vertices)]
    out += [f"{format_label(u)} {format_label(v)} {format_label(lab)}" for lab, (u, v) in g.edges]
    return "\n".join(out) + "\n"


@_guard
def parse_graph(text):
    vertices = ()
    triples = []
    for line in _lines(text):
        h = _header(line, "vertices")
        if h is not None:
            vertices = h
            continue
        toks = line.split()
        if len(toks) != 3:
            raise ParseError(f"edge line needs 'u v label': {line!r}")
        triples.append(tuple(parse_label(t) for t in toks))
    return labeled_graph(triples, vertices=vertices)


def graph_to_json(g):
    return {"vertices": [_to_json_label(v) for v in g.vertices],
            "edges": [[_to_json_label(u), _to_json_label(v), _to_json_label(lab)]
                      for lab, (u, v) in g.edges]}


@_guard
def graph_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    return labeled_graph([tuple(_from_json_label(t) for t in e) for e in d["edges"]],
                         vertices=[_from_json_label(v) for v in d.get("vertices", [])])


# ------------------------------------------------------------- binary matroids

def _bits(v, dim):
    return "".join("1" if v >> i & 1 else "0" for i in range(dim))


def format_matroid(m):
    """One line per element: label and its column as a bit string, bit 0 first."""
    dim = max(m.dim, 1)
    return "".join(f"{format_label(e)} {_bits(c, dim)}\n" for e, c in zip(m.ground, m.columns))


def _parse_bits(s):
    if not s or set(s) - {"0", "1"}:
        raise ParseError(f"bad bit string {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1"), len(s)


@_guard
def parse_matroid(text):
    ground, cols, dims = [], [], set()
    for line in _lines(text):
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"matroid line needs 'label bits': {line!r}")
        v, d = _parse_bits(toks[1])
        ground.append(parse_label(toks[0]))
        cols.append(v)
        dims.add(d)
    if len(dims) > 1:
        raise ParseError("columns have different lengths")
    if len(set(ground)) != len(ground):
        raise ParseError("repeated ground element")
    return BinaryMatroid(tuple(ground), tuple(cols))


def matroid_to_json(m):
    dim = max(m.dim, 1)
    return {"columns": [[_to_json_label(e), _bits(c, dim)] for e, c in zip(m.ground, m.columns)]}


@_guard
def matroid_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    ground, cols = [], []
    for e, bits in d["columns"]:
        ground.append(_from_json_label(e))
        cols.append(_parse_bits(bits)[0])
    return BinaryMatroid(tuple(ground), tuple(cols))


# ------------------------------------------------------------- partitions and embeddings

def format_partition(p):
    return str(p)


def parse_partition(text, n=None):
    try:
        return Partition.parse(text, n)
    except (ValueError, TightEmbedError) as exc:
        raise ParseError(f"bad partition {text!r}: {exc}") from None


def format_embedding(emb):
    out = [f"n: {emb.n}"]
    for a in emb.lattice.labels:
        out.append(f"{format_label(a)}: {format_partition(emb.map[a])}")
    return "\n".join(out) + "\n"


@_guard
def parse_embedding(text):
    """Returns (n, {element: Partition})."""
    n = None
    mapping = {}
    for line in _lines(text):
        key, _, val = line.rpartition(":")
        key = key.strip()
        if key == "n":
            n = int(val)
            continue
        if not key:
            raise ParseError(f"expected 'element: partition', got {line!r}")
        mapping[parse_label(key)] = val.strip()
    if n is None:
        raise ParseError("missing 'n:' header")
    return n, {k: parse_partition(v, n) for k, v in mapping.items()}


def embedding_to_json(emb):
    c = emb.certificate
    return {"n": emb.n,
            "map": [[_to_json_label(a), str(emb.map[a])] for a in emb.lattice.labels],
            "certificate": {"is_homomorphism": c.is_homomorphism,
                            "is_cover_preserving": c.is_cover_preserving,
                            "maps_bottom_to_bottom": c.maps_bottom_to_bottom,
                            "injective": c.injective}}


@_guard
def embedding_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    n = int(d["n"])
    return n, {_from_json_label(a): parse_partition(s, n) for a, s in d["map"]}


def recertify(L, n, mapping):
    missing = set(L.labels) - set(mapping)
    if missing:
        raise ParseError(f"embedding misses elements {sorted(missing, key=label_key)!r}")
    return certify(L, n, mapping)


# ------------------------------------------------------------- histories

def format_history(history):
    """One step per line: ``type | cycle junctions | link | midpoints``."""
    out = []
    for st in history:
        f = lambda xs: " ".join(format_label(x) for x in xs)  # noqa: E731
        out.append(f"{st.kind} | {f(st.cycle)} | {f(st.link)} | {f(st.midpoints)}")
    return "\n".join(out) + ("\n" if out else "")


@_guard
def parse_history(text):
    steps = []
    for line in _lines(text):
        parts = [s.strip() for s in line.split("|")]
        if len(parts) != 4:
            raise ParseError(f"history line needs 4 fields: {line!r}")
        kind = int(parts[0])
        if kind not in (1, 2):
            raise ParseError(f"link type must be 1 or 2, got {kind}")
        cyc, link, mids = (tuple(parse_label(t) for t in s.split()) for s in parts[1:])
        steps.append(AugmentStep(cyc, link, kind, mids))
    return tuple(steps)


def history_to_json(history):
    return [{"cycle": [_to_json_label(x) for x in st.cycle],
             "link": [_to_json_label(x) for x in st.link],
             "type": st.kind,
             "midpoints": [_to_json_label(x) for x in st.midpoints]} for st in history]


@_guard
def history_from_json(text):
    d = _loads_json(text) if isinstance(text, str) else text
    return tuple(AugmentStep(tuple(_from_json_label(x) for x in r["cycle"]),
                             tuple(_from_json_label(x) for x in r["link"]),
                             int(r["type"]),
                             tuple(_from_json_label(x) for x in r["midpoints"])) for r in d)


# ------------------------------------------------------------- file dispatch

_TEXT = {"lattice": parse_lattice, "pls": parse_pls, "graph": parse_graph,
         "matroid": parse_matroid, "embedding": parse_embedding, "history": parse_history}
_JSON = {"lattice": lattice_from_json, "pls": pls_from_json, "graph": graph_from_json,
         "matroid": matroid_from_json, "embedding": embedding_from_json,
         "history": history_from_json}


def load(kind, text):
    """Parse text of the given kind, JSON when it starts with { or [."""
    s = text.lstrip()
    if s.startswith("{") or s.startswith("["):
        return _JSON[kind](s)
    return _TEXT[kind](text)
