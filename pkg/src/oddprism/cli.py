"""Command-line entry point: every subsystem as a subcommand, JSON/CSV/graph6 out.

Exit status: 0 success, 1 verification failure (a lemma miss, expected
never), 2 usage error. Reports embed the tool version and the full argument
vector so runs are reproducible from the report header alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .formulas import eq_g1_report, ex_formula, ex_extremal_construction, \
    p4_extremal_graph, spex_closed_form
from .graphs import (Graph, Graph6Error, graph6_decode, graph6_encode,
                     make_complete, make_complete_bipartite, make_cycle,
                     make_path, make_turan, odd_prism, spex_candidate)
from .patterns import find_prism
from .search import (brute_force_ex, brute_force_spex, ingest_graph6_stream,
                     verify_theorems)
from .spectral import spectral_radius
from .words import verify_corollary_2_5, verify_lemma_2_4


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("json", "csv", "graph6"), default=None,
                    help="output format (default depends on subcommand)")
    sp.add_argument("--out", metavar="FILE", default=None,
                    help="write output to FILE instead of stdout")
    sp.add_argument("--seedless", action="store_true",
                    help="omit timing fields so identical runs emit identical bytes")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oddprism")
    ap.add_argument("--version", action="version", version=f"oddprism {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="emit a named construction as graph6")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--complete", type=int, metavar="N")
    grp.add_argument("--bipartite", type=int, nargs=2, metavar=("S", "T"))
    grp.add_argument("--cycle", type=int, metavar="N")
    grp.add_argument("--path", type=int, metavar="N")
    grp.add_argument("--turan", type=int, nargs=2, metavar=("N", "R"))
    grp.add_argument("--prism", type=int, metavar="K")
    grp.add_argument("--candidate", type=int, metavar="N")
    grp.add_argument("--p4-extremal", type=int, metavar="M")
    grp.add_argument("--ex-construction", type=int, nargs=2, metavar=("N", "NA"))
    _add_common(sp)

    sp = sub.add_parser("spex", help="spectral radius of graph6 input")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", metavar="G6")
    src.add_argument("--in", dest="infile", metavar="FILE")
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_common(sp)

    sp = sub.add_parser("exformula", help="edge-count formula at n")
    sp.add_argument("--n", type=int, required=True)
    _add_common(sp)

    sp = sub.add_parser("candidate", help="spectral candidate, closed form and gap report")
    sp.add_argument("--n", type=int, required=True)
    _add_common(sp)

    sp = sub.add_parser("checkfree", help="odd-prism freeness of graph6 input")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", metavar="G6")
    src.add_argument("--in", dest="infile", metavar="FILE")
    sp.add_argument("--k", type=int, default=1)
    _add_common(sp)

    sp = sub.add_parser("lemma24", help="exhaustive forbidden-factor check")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--necklaces", action="store_true",
                    help="only check enumeration-least rotations")
    _add_common(sp)

    sp = sub.add_parser("corollary25", help="exhaustive prism-colouring check")
    sp.add_argument("--k", type=int, required=True)
    _add_common(sp)

    for name, help_text in (("bruteex", "brute-force maximum edge count"),
                            ("brutespex", "brute-force maximum spectral radius")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, default=1)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--threads", type=int, default=1)
        _add_common(sp)

    sp = sub.add_parser("ingest", help="certificate from an external graph6 stream")
    sp.add_argument("--in", dest="infile", metavar="FILE", required=True,
                    help="file of graph6 lines, or - for stdin")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--mode", choices=("edges", "spectral"), required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    _add_common(sp)

    sp = sub.add_parser("verify", help="compare brute force against both closed forms")
    sp.add_argument("--n", required=True, metavar="LO..HI",
                    help="order range, e.g. 6..7 or a single order")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--threads", type=int, default=1)
    _add_common(sp)

    return ap


def _strip_elapsed(obj):
    if isinstance(obj, dict):
        return {k: _strip_elapsed(v) for k, v in obj.items()
                if not k.startswith("elapsed")}
    if isinstance(obj, list):
        return [_strip_elapsed(v) for v in obj]
    return obj


def _emit(ns: argparse.Namespace, payload, argv: Sequence[str]) -> None:
    fmt = ns.format or "json"
    if fmt == "graph6":
        text = payload if isinstance(payload, str) else "\n".join(payload)
        if not text.endswith("\n"):
            text += "\n"
    elif fmt == "csv":
        header = f"# oddprism {__version__} :: {' '.join(argv)}\n"
        text = header + payload
    else:
        body = payload if isinstance(payload, dict) else {"result": payload}
        report = {"tool": "oddprism", "version": __version__,
                  "argv": list(argv), **body}
        if ns.seedless:
            report = _strip_elapsed(report)
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _construct_graph(ns: argparse.Namespace) -> Graph:
    if ns.complete is not None:
        return make_complete(ns.complete)
    if ns.bipartite is not None:
        return make_complete_bipartite(*ns.bipartite)
    if ns.cycle is not None:
        return make_cycle(ns.cycle)
    if ns.path is not None:
        return make_path(ns.path)
    if ns.turan is not None:
        return make_turan(*ns.turan)
    if ns.prism is not None:
        return odd_prism(ns.prism)
    if ns.candidate is not None:
        return spex_candidate(ns.candidate)
    if ns.p4_extremal is not None:
        return p4_extremal_graph(ns.p4_extremal)
    return ex_extremal_construction(*ns.ex_construction)


def _read_graphs(ns: argparse.Namespace) -> list[Graph]:
    if ns.graph6 is not None:
        return [graph6_decode(ns.graph6)]
    lines = _read_lines(ns.infile)
    return [graph6_decode(line) for line in lines if line.strip()]


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path) as fh:
        return fh.read().splitlines()


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    n = int(text)
    return n, n


def dispatch(ns: argparse.Namespace, argv: Sequence[str]) -> int:
    if ns.command == "construct":
        g = _construct_graph(ns)
        g6 = graph6_encode(g).decode("ascii")
        if (ns.format or "graph6") == "graph6":
            _emit(ns, g6, argv)
        else:
            _emit(ns, {"n": g.n, "edges": g.edge_count, "graph6": g6}, argv)
        return 0

    if ns.command == "spex":
        results = [spectral_radius(g, tolerance=ns.tol).to_json()
                   for g in _read_graphs(ns)]
        _emit(ns, results[0] if len(results) == 1 else results, argv)
        return 0

    if ns.command == "exformula":
        _emit(ns, ex_formula(ns.n).to_json(), argv)
        return 0

    if ns.command == "candidate":
        g = spex_candidate(ns.n)
        payload = {
            "n": ns.n,
            "graph6": graph6_encode(g).decode("ascii"),
            "closed_form": spex_closed_form(ns.n),
            "eq_g1": eq_g1_report(ns.n).to_json(),
        }
        _emit(ns, payload, argv)
        return 0

    if ns.command == "checkfree":
        out = []
        for g in _read_graphs(ns):
            witness = find_prism(g, ns.k)
            entry = {"n": g.n, "k": ns.k, "prism_free": witness is None}
            if witness is not None:
                entry["witness"] = witness.to_json()
            out.append(entry)
        _emit(ns, out[0] if len(out) == 1 else out, argv)
        return 0

    if ns.command == "lemma24":
        report = verify_lemma_2_4(ns.k, necklaces_only=ns.necklaces)
        _emit(ns, report.to_json(), argv)
        return 0 if report.misses == 0 else 1

    if ns.command == "corollary25":
        report = verify_corollary_2_5(ns.k)
        _emit(ns, report.to_json(), argv)
        return 0 if report.misses == 0 and report.case_split_violations == 0 else 1

    if ns.command == "bruteex":
        _emit(ns, brute_force_ex(ns.n, ns.k, threads=ns.threads).to_json(), argv)
        return 0

    if ns.command == "brutespex":
        cert = brute_force_spex(ns.n, ns.k, ns.tol, threads=ns.threads)
        _emit(ns, cert.to_json(), argv)
        return 0

    if ns.command == "ingest":
        cert = ingest_graph6_stream(_read_lines(ns.infile), ns.k, ns.mode, ns.tol)
        _emit(ns, cert.to_json(), argv)
        return 0

    if ns.command == "verify":
        lo, hi = _parse_range(ns.n)
        summary = verify_theorems(lo, hi, ns.k, ns.tol, threads=ns.threads)
        if ns.format == "csv":
            _emit(ns, summary.to_csv(), argv)
        else:
            _emit(ns, summary.to_json(), argv)
        return 0

    raise AssertionError(f"unhandled command {ns.command}")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        return dispatch(ns, argv)
    except (Graph6Error, ValueError, OSError) as exc:
        parser.exit(2, f"oddprism: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
