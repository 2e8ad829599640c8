"""Named corpus of small lattices, PLSes, graphs and matroids.

Set TIGHTEMBED_FIXTURE_DIR to a directory of fixture files to add to (or
override) the built-in corpus; files are named ``<name>.<ext>`` with ext one
of lat, pls, graph, mat, emb, hist (optionally followed by .json).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from . import io
from .lattice import boolean_lattice, chain, m_n, pentagon, product, subspace_lattice
from .matroid import BinaryMatroid, fano_matroid, labeled_graph, wheel_graph, complete_graph
from .pls import AugmentStep, build_pls

FIXTURE_ENV = "TIGHTEMBED_FIXTURE_DIR"

EXTENSIONS = {"lat": "lattice", "pls": "pls", "graph": "graph", "mat": "matroid",
              "emb": "embedding", "hist": "history"}
KIND_EXT = {v: k for k, v in EXTENSIONS.items()}


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str               # lattice, pls, graph, matroid, history
    value: object
    note: str
    reconstructed: bool = False


# GF(2) labels for the nine points of lambda1: four unit vectors at the
# junctions, sums of neighbours at the midpoints, and the extra point 9.
LAMBDA1_LABELS = {1: 0b0001, 3: 0b0010, 5: 0b0100, 7: 0b1000,
                  2: 0b0011, 4: 0b0110, 6: 0b1100, 8: 0b1001, 9: 0b0111}

LAMBDA1_LINES = [(1, 2, 3), (3, 4, 5), (5, 6, 7), (7, 8, 1), (2, 9, 5)]
J2_LINES = [(1, 2, 3), (3, 4, 5), (5, 6, 1), (6, 7, 8), (8, 9, 10), (10, 11, 5),
            (1, 12, 13), (13, 14, 7)]
J3_LINES = [(1, 2, 3), (3, 4, 5), (5, 6, 1), (2, 8, 9), (4, 9, 10), (6, 7, 10)]
FANO_LINES = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]


def _cycle_pls(n):
    return build_pls(list(range(n)) + [f"m{i}" for i in range(n)],
                     [(i, f"m{i}", (i + 1) % n) for i in range(n)])


def _builtin():
    fx = {}

    def add(name, kind, value, note, reconstructed=False):
        fx[name] = Fixture(name, kind, value, note, reconstructed)

    add("m3", "lattice", m_n(3), "diamond with three atoms")
    add("m4", "lattice", m_n(4), "diamond with four atoms; contains a covering M4")
    add("d2", "lattice", chain(2), "two-element chain")
    add("chain3", "lattice", chain(3), "three-element chain")
    add("chain4", "lattice", chain(4), "four-element chain")
    add("boolean2", "lattice", boolean_lattice(2), "square 2^2")
    add("boolean3", "lattice", boolean_lattice(3), "cube 2^3")
    add("l2", "lattice", product(m_n(3, atoms=["p", "q", "r"]), chain(2)),
        "M3 x D2; product labels (x, i)")
    add("lm_gf2_3", "lattice", subspace_lattice(3), "subspaces of GF(2)^3")
    add("pentagon", "lattice", pentagon(), "five-element non-modular lattice")

    add("lambda1", "pls", build_pls(range(1, 10), LAMBDA1_LINES),
        "4-cycle 1,3,5,7 plus the line {2,9,5} joining a midpoint to a junction")
    add("j2", "pls", build_pls(range(1, 15), J2_LINES),
        "triangle 1,3,5 grown by a type-1 link and then a type-2 link", True)
    add("j3", "pls", build_pls(range(1, 11), J3_LINES),
        "triangle whose three midpoints are tied by a second triangle of paths", True)
    add("fano", "pls", build_pls(range(1, 8), FANO_LINES), "Fano plane")
    add("qimp_j1", "pls", build_pls(["p1", "p2", "p3", "q", "q2", "q3"],
                                    [("p1", "q", "p2"), ("p2", "q2", "p3"), ("p3", "q3", "p1")]),
        "cycle of three lines; q is the midpoint used for gluing", True)
    add("qimp_j2", "pls", build_pls(["p1'", "p2'", "p3'", "q1'", "q2'"],
                                    [("p1'", "q1'", "p2'"), ("p2'", "q2'", "p3'")]),
        "two lines sharing a point", True)
    add("ump_j5", "pls", build_pls(["p1", "p2", "p3", "q", "q2", "q3", "p2'", "p3'", "q1'", "q2'"],
                                   [("p1", "q", "p2"), ("p2", "q2", "p3"), ("p3", "q3", "p1"),
                                    ("q", "q1'", "p2'"), ("p2'", "q2'", "p3'")]),
        "qimp_j1 and qimp_j2 glued by identifying q with p1'", True)
    add("fig12a", "pls", build_pls("abcdef", [("a", "b", "c"), ("a", "e", "f"), ("c", "e", "d")]),
        "two triangles sharing a, closed by the line {c,e,d}")
    add("fig7a", "pls", build_pls(["p", "q", "r", "x", "y", "z", 2, 3, "s", "t"],
                                  [("p", "q", "x"), ("q", "r", "z"), ("p", "r", "y"),
                                   ("x", 3, "t"), ("y", 2, "s"), ("p", 2, 3)]),
        "triangle p,q,r with two type-1 links through the line {p,2,3}", True)
    add("fig7a_dashed", "pls",
        build_pls(["p", "q", "r", "x", "y", "z", 2, 3, "s", "t", "w"],
                  [("p", "q", "x"), ("q", "r", "z"), ("p", "r", "y"), ("x", 3, "t"),
                   ("y", 2, "s"), ("p", 2, 3), ("x", "w", "y")]),
        "fig7a plus the line {x,w,y} joining two midpoints of the triangle", True)
    add("fig3c", "pls", build_pls(range(1, 11), [(1, 2, 3), (3, 4, 5), (5, 6, 1),
                                                 (5, 7, 8), (8, 9, 10)]),
        "triangle with a pendant path of two lines", True)
    add("acyclic_tree", "pls", build_pls(range(1, 10), [(1, 2, 3), (3, 4, 5), (3, 6, 7),
                                                        (5, 8, 9)]),
        "tree of four lines")
    add("hexagon", "pls", _cycle_pls(6), "cycle of six lines")
    add("single_line", "pls", build_pls([1, 2, 3], [(1, 2, 3)]), "one line")

    add("k4", "graph", complete_graph(4), "complete graph on four vertices")
    add("wheel6", "graph", wheel_graph(6), "wheel with six spokes")
    add("triangle", "graph", labeled_graph([(0, 1, 1), (1, 2, 2), (0, 2, 3)]),
        "triangle labelled 1, 2, 3")
    add("fano_matroid", "matroid", fano_matroid(), "all seven nonzero vectors of GF(2)^3")
    add("lambda1_binary", "matroid",
        BinaryMatroid(tuple(range(1, 10)), tuple(LAMBDA1_LABELS[x] for x in range(1, 10))),
        "GF(2) labelling of lambda1 propagated from the four junctions")
    add("j2_history", "history",
        (AugmentStep((1, 3, 5), (6, 8, 10, 5), 1, (7, 9, 11)),
         AugmentStep((5, 6, 8, 10), (1, 13, 7), 2, (12, 14))),
        "replays j2 from the triangle 1,3,5 (lines {1,2,3},{3,4,5},{5,6,1})")
    add("j2_base", "pls", build_pls(range(1, 7), [(1, 2, 3), (3, 4, 5), (5, 6, 1)]),
        "triangle 1,3,5 with midpoints 2,4,6")
    return fx


def fixture_dir():
    d = os.environ.get(FIXTURE_ENV)
    return Path(d) if d else None


def _load_dir(d):
    out = {}
    for path in sorted(Path(d).iterdir()):
        parts = path.name.split(".")
        if len(parts) < 2:
            continue
        ext = parts[1]
        if ext not in EXTENSIONS:
            continue
        kind = EXTENSIONS[ext]
        out[parts[0]] = Fixture(parts[0], kind, io.load(kind, path.read_text()),
                                f"loaded from {path.name}")
    return out


@lru_cache(maxsize=None)
def _cached(dirname):
    fx = _builtin()
    if dirname:
        fx.update(_load_dir(dirname))
    return fx


def fixtures():
    """Name -> Fixture; the override directory is re-read when it changes."""
    d = fixture_dir()
    return dict(_cached(str(d) if d else ""))


def get(name):
    return fixtures()[name].value


def export(directory, names=None, json_format=False):
    """Write fixtures as files; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    printers = {"lattice": (io.format_lattice, io.lattice_to_json),
                "pls": (io.format_pls, io.pls_to_json),
                "graph": (io.format_graph, io.graph_to_json),
                "matroid": (io.format_matroid, io.matroid_to_json),
                "history": (io.format_history, io.history_to_json)}
    paths = []
    for name, f in _builtin().items():
        if names is not None and name not in names:
            continue
        text_fn, json_fn = printers[f.kind]
        ext = KIND_EXT[f.kind]
        if json_format:
            path = directory / f"{name}.{ext}.json"
            path.write_text(io.dumps_json(json_fn(f.value)))
        else:
            path = directory / f"{name}.{ext}"
            path.write_text(text_fn(f.value))
        paths.append(path)
    return paths
