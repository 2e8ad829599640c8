"""Command-line interface.

Exit status: 0 positive result, 1 certified negative, 2 bound exceeded,
3 input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .embedding import (brute_force_embedding_search, build_partition_embedding,
                        connect_components, pipeline_embed_thin, DEFAULT_SEARCH_JI_BOUND)
from .errors import BoundExceeded, InputError, LineTooLarge, NotModular, TightEmbedError
from .fixtures import KIND_EXT, fixture_dir, fixtures
from .lattice import (extract_mopls, format_profile_dict, ji_bound, join_irreducibles,
                      maximal_congruences)
from .matroid import (check_circuit_friendly, check_cycle_preserving, check_line_pres,
                      graph_model, graph_trigger_check, matroid_model)
from .modeling import find_rank_modeling_graph, model_augmented_ump
from .pls import DEFAULT_POINT_BOUND, classify_pls, components_and_rank

EXIT_OK, EXIT_NEGATIVE, EXIT_BOUND, EXIT_INPUT = 0, 1, 2, 3


def _resolve(spec, kind):
    """A path, or the name of a fixture (override directory first)."""
    path = Path(spec)
    if path.is_file():
        return io.load(kind, path.read_text())
    d = fixture_dir()
    if d is not None:
        for cand in (d / f"{spec}.{KIND_EXT[kind]}", d / f"{spec}.{KIND_EXT[kind]}.json"):
            if cand.is_file():
                return io.load(kind, cand.read_text())
    fx = fixtures()
    name = path.name.split(".")[0]
    if name in fx and fx[name].kind == kind:
        return fx[name].value
    raise InputError(f"no {kind} file or fixture named {spec!r}")


def _emit(args, data, text):
    if args.json:
        sys.stdout.write(io.dumps_json(data))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _need(args, attr, flag):
    if getattr(args, attr) is None:
        raise InputError(f"{flag} is required")
    return getattr(args, attr)


def _lab(x):
    return io._to_json_label(x)


# ------------------------------------------------------------- commands

def cmd_analyze_lattice(args):
    L = _resolve(_need(args, "lattice", "--lattice"), "lattice")
    prof = L.profile
    ji = join_irreducibles(L)
    data = {"elements": L.n, "height": L.height, "join_irreducibles": len(ji.J),
            "profile": format_profile_dict(prof)}
    lines = [f"elements: {L.n}", f"height: {L.height}", f"join-irreducibles: {len(ji.J)}"]
    lines += [f"{k}: {v}" for k, v in data["profile"].items()]
    if prof.modular:
        mc = maximal_congruences(L)
        b = ji_bound(L)
        data.update({"maximal_congruences": mc.s, "factor_sizes": [f.n for f in mc.factors],
                     "ji_bound": {"lhs": b.lhs, "rhs": b.rhs, "sharp": b.sharp}})
        lines += [f"maximal congruences: {mc.s}",
                  f"factor sizes: {' '.join(str(f.n) for f in mc.factors)}",
                  f"join-irreducible bound: {b.lhs} <= {b.rhs} (sharp: {b.sharp})"]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_mopls(args):
    L = _resolve(_need(args, "lattice", "--lattice"), "lattice")
    try:
        mop = extract_mopls(L)
    except (LineTooLarge, NotModular) as exc:
        _emit(args, {"mopls": None, "reason": str(exc)}, f"no MoPLS: {exc}")
        return EXIT_NEGATIVE
    p = mop.pls()
    data = io.pls_to_json(p)
    data["rank"] = p.rank
    data["order"] = sorted([[_lab(a), _lab(b)] for a, b in mop.order], key=str)
    _emit(args, data, io.format_pls(p) + f"# rank {p.rank}\n")
    return EXIT_OK


def _profile_data(prof):
    return {"acyclic": prof.acyclic, "qimp": prof.qimp, "ump": prof.ump, "nmpl": prof.nmpl,
            "bmpl": prof.bmpl, "sparse": prof.sparse, "small_girth": prof.small_girth,
            "cycles": prof.n_cycles,
            "testifying_ordering": [[_lab(x) for x in l] for l in prof.testifying_ordering]}


def cmd_classify_pls(args):
    p = _resolve(_need(args, "pls", "--pls"), "pls")
    prof = classify_pls(p, bound=args.bound_cycles)
    cr = components_and_rank(p)
    data = {"points": len(p.points), "lines": len(p.lines), "rank": p.rank,
            "components": cr.c}
    data.update(_profile_data(prof))
    lines = [f"{k}: {v}" for k, v in data.items() if k != "testifying_ordering"]
    if prof.sparse:
        lines.append("testifying ordering: " + " ".join(
            "{" + ",".join(io.format_label(x) for x in l) + "}" for l in prof.testifying_ordering))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_model(args):
    p = _resolve(_need(args, "pls", "--pls"), "pls")
    if args.graph is not None or args.matroid is not None:
        if args.graph is not None:
            g = _resolve(args.graph, "graph")
            m = graph_model(p, g)
        else:
            m = matroid_model(p, _resolve(args.matroid, "matroid"))
        lp = check_line_pres(m)
        data = {"line_preserving": lp, "mrk": m.matroid.mrk, "rk": p.rank,
                "rank_model": lp and m.matroid.mrk == p.rank}
        if lp and m.graph is not None:
            data["cycle_preserving"] = check_cycle_preserving(m).ok
        if m.graph is not None:
            cf = check_circuit_friendly(m)
            data["circuit_friendly"] = cf.ok
            data["offending_circuits"] = [[_lab(x) for x in c] for c in cf.offending_circuits]
        _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
        return EXIT_OK if data["rank_model"] else EXIT_NEGATIVE
    if args.history is not None:
        hist = _resolve(args.history, "history")
        model = model_augmented_ump(p, hist, mode=args.mode).model
    else:
        model = find_rank_modeling_graph(p)
    if model is None:
        _emit(args, {"graph": None}, "no line-preserving rank-modeling graph found")
        return EXIT_NEGATIVE
    _emit(args, {"graph": io.graph_to_json(model.graph)}, io.format_graph(model.graph))
    return EXIT_OK


def cmd_embed(args):
    L = _resolve(_need(args, "lattice", "--lattice"), "lattice")
    if args.graph is not None:
        g = connect_components(_resolve(args.graph, "graph"))
        emb = build_partition_embedding(L, g)
        branch, reason = "given graph", "embedded via the given graph"
    else:
        rep = pipeline_embed_thin(L)
        emb, branch, reason = rep.embedding, rep.branch, rep.reason
    if emb is None:
        _emit(args, {"embedding": None, "reason": reason}, f"no embedding: {reason}")
        return EXIT_NEGATIVE
    data = io.embedding_to_json(emb)
    data["branch"] = branch
    _emit(args, data, io.format_embedding(emb))
    return EXIT_OK


def cmd_verify(args):
    L = _resolve(_need(args, "lattice", "--lattice"), "lattice")
    n, mapping = _resolve(_need(args, "embedding", "--embedding"), "embedding")
    cert = io.recertify(L, n, mapping)
    data = {"tight": cert.tight, "is_homomorphism": cert.is_homomorphism,
            "is_cover_preserving": cert.is_cover_preserving,
            "maps_bottom_to_bottom": cert.maps_bottom_to_bottom, "injective": cert.injective}
    text = "\n".join(f"{k}: {v}" for k, v in data.items())
    if cert.witness:
        text += f"\nwitness: {cert.witness}"
    _emit(args, data, text)
    return EXIT_OK if cert.tight else EXIT_NEGATIVE


def cmd_search(args):
    L = _resolve(_need(args, "lattice", "--lattice"), "lattice")
    emb = brute_force_embedding_search(L, n=args.n, ji_bound=args.bound_search)
    if emb is None:
        _emit(args, {"embedding": None}, "search exhausted: no tight partition embedding")
        return EXIT_NEGATIVE
    _emit(args, io.embedding_to_json(emb), io.format_embedding(emb))
    return EXIT_OK


def cmd_trigger_check(args):
    p = _resolve(_need(args, "pls", "--pls"), "pls")
    res = graph_trigger_check(p, bound=args.bound_search)
    data = {"is_trigger": res.is_trigger, "vacuous": res.vacuous, "models": res.n_models,
            "counterexample": io.matroid_to_json(res.counterexample) if res.counterexample else None}
    text = "\n".join(f"{k}: {v}" for k, v in data.items() if k != "counterexample")
    if res.counterexample is not None:
        text += "\ncounterexample:\n" + io.format_matroid(res.counterexample)
    _emit(args, data, text)
    return EXIT_OK if res.is_trigger else EXIT_NEGATIVE


COMMANDS = {
    "analyze-lattice": (cmd_analyze_lattice, "profile, congruences and bounds of a lattice"),
    "mopls": (cmd_mopls, "extract the MoPLS of a modular lattice"),
    "classify-pls": (cmd_classify_pls, "classify a PLS (QIMP, UMP, BMPL, sparse, ...)"),
    "model": (cmd_model, "check or build a graph / matroid model of a PLS"),
    "embed": (cmd_embed, "tight embedding of a thin lattice into a partition lattice"),
    "verify": (cmd_verify, "re-certify an embedding file"),
    "search": (cmd_search, "exhaustive tight-embedding search"),
    "trigger-check": (cmd_trigger_check, "are all binary rank-models of a PLS graphic?"),
}


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="tightembed", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--lattice", help="lattice file or fixture name")
        sp.add_argument("--pls", help="PLS file or fixture name")
        sp.add_argument("--graph", help="graph file (edge list 'u v label')")
        sp.add_argument("--matroid", help="binary matroid file ('label bits')")
        sp.add_argument("--embedding", help="embedding file")
        sp.add_argument("--history", help="augmentation history file")
        sp.add_argument("--mode", choices=["type1", "small_girth"], default="small_girth",
                        help="augmented-UMP construction mode (default small_girth)")
        sp.add_argument("--n", type=int, default=None, help="target Part(n) for search")
        sp.add_argument("--bound-cycles", type=int, default=DEFAULT_POINT_BOUND,
                        help=f"point bound for cycle enumeration (default {DEFAULT_POINT_BOUND})")
        sp.add_argument("--bound-search", type=int, default=DEFAULT_SEARCH_JI_BOUND,
                        help="size bound for exhaustive searches: join-irreducibles for "
                             f"search, ground size for trigger-check (default {DEFAULT_SEARCH_JI_BOUND})")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        return fn(args)
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TightEmbedError as exc:
        print(f"negative: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
