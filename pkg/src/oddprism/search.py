"""Exhaustive extremal search over prism-free graphs at small n.

The engine walks edge subsets in lexicographic edge order, branching
include/exclude per edge. Since prism-freeness is closed downward under edge
removal, the free graphs form a downward-closed family and the include branch
is cut exactly when the new edge completes a prism (checked by the
edge-anchored detector). Every free labeled graph appears as one leaf.

Both objectives are monotone nondecreasing under edge addition inside the
free family, so optima are attained at edge-maximal graphs. A leaf is
edge-maximal iff every edge that was excluded while still addable ("debt")
has become blocked by the final graph; edges excluded after the detector
already rejected them stay blocked forever and need no recheck.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .formulas import ASYMPTOTIC_NOTE, ex_formula, spex_closed_form
from .graphs import (Graph, canonical_form, graph6_decode, graph6_encode,
                     isomorphic, make_complete, odd_prism, spex_candidate)
from .graphs import Graph6Error
from .patterns import _prism_using_edge, contains_subgraph
from .spectral import spectral_radius

ENUM_CAP = 8
SPECTRAL_MARGIN = 1e-7
SPECTRAL_TOL = 1e-9
_PREFIX_DEPTH = 6


class EnumerationCapError(ValueError):
    def __init__(self, n: int):
        super().__init__(
            f"built-in enumeration is capped at n <= {ENUM_CAP} (got n={n}); "
            "feed an externally generated graph6 stream through "
            "ingest_graph6_stream instead")


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    maximal: int = 0
    tested: int = 0
    elapsed_s: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.maximal += other.maximal
        self.tested += other.tested

    def to_json(self) -> dict:
        return {"nodes_expanded": self.nodes, "leaves": self.leaves,
                "maximal_leaves": self.maximal, "graphs_tested": self.tested,
                "elapsed_s": self.elapsed_s}


@dataclass
class ExtremalCertificate:
    """Outcome of a brute-force run: optimum, witnesses, formula comparison."""

    n: int
    k: int
    mode: str  # "edges" | "spectral"
    optimum: float | int
    witnesses: tuple[str, ...]  # graph6, deduplicated up to isomorphism
    formula_value: float | int | None
    agrees: bool
    stats: SearchStats
    provenance: str = "enumerated"
    candidate_isomorphic: bool | None = None
    gap: float | None = None
    assumption: str | None = None
    regime_note: str = ASYMPTOTIC_NOTE

    def to_json(self) -> dict:
        out = {
            "n": self.n, "k": self.k, "mode": self.mode,
            "optimum": self.optimum,
            "witnesses": list(self.witnesses),
            "formula_comparison": {"formula_value": self.formula_value,
                                   "agrees": self.agrees},
            "stats": self.stats.to_json(),
            "provenance": self.provenance,
            "regime_note": self.regime_note,
        }
        if self.mode == "spectral":
            out["candidate_isomorphic"] = self.candidate_isomorphic
            out["gap"] = self.gap
        if self.assumption:
            out["assumption"] = self.assumption
        return out


def _edge_list(n: int) -> list[tuple[int, int]]:
    return [(u, v) for v in range(1, n) for u in range(v)]


def _lambda_upper(m: int) -> float:
    # any graph with m edges has radius at most (-1+sqrt(1+8m))/2
    return 0.5 * (math.sqrt(1.0 + 8.0 * m) - 1.0)


def _replay_prefix(n: int, k: int, prefix_mask: int, depth: int,
                   edges: list[tuple[int, int]]) -> tuple[list[int], int, list[int]] | None:
    """Adjacency, edge count and debt list after the first `depth` forced
    decisions; None when the included prefix is not prism-free."""
    adj = [0] * n
    debts: list[int] = []
    count = 0
    for i in range(depth):
        u, v = edges[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        if (prefix_mask >> i) & 1:
            if _prism_using_edge(adj, k, u, v) is not None:
                return None
            count += 1
        else:
            if _prism_using_edge(adj, k, u, v) is None:
                debts.append(i)
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
    return adj, count, debts


def _run_partition(n: int, k: int, mode: str, prefix_mask: int, depth: int,
                   tol: float, best_hint: float) -> dict | None:
    """Walk one prefix-defined subtree; self-contained for process pools."""
    edges = _edge_list(n)
    m_total = len(edges)
    replay = _replay_prefix(n, k, prefix_mask, depth, edges)
    if replay is None:
        return None
    adj, count0, debts = replay
    stats = SearchStats()
    lam_ub = [_lambda_upper(m) for m in range(m_total + 1)]
    best = best_hint
    witnesses: list[tuple[int, float]] = []  # (edge mask, objective)

    def leaf(mask: int, ecount: int) -> None:
        nonlocal best
        stats.leaves += 1
        if mode == "edges":
            # bound prune guarantees ecount >= best here
            if ecount > best:
                best = ecount
                witnesses.clear()
            witnesses.append((mask, float(ecount)))
            return
        for e in debts:
            u, v = edges[e]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            blocked = _prism_using_edge(adj, k, u, v) is not None
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
            if not blocked:
                return  # an edge is still addable: not edge-maximal
        stats.maximal += 1
        lam = spectral_radius(Graph(n, tuple(adj)), tolerance=tol).radius
        stats.tested += 1
        if lam >= best - SPECTRAL_MARGIN:
            if lam > best:
                best = lam
                witnesses[:] = [w for w in witnesses if w[1] >= best - SPECTRAL_MARGIN]
            witnesses.append((mask, lam))

    def walk(i: int, mask: int, ecount: int) -> None:
        stats.nodes += 1
        if mode == "edges":
            if ecount + (m_total - i) < best:
                return
        elif lam_ub[ecount + (m_total - i)] < best - SPECTRAL_MARGIN:
            return
        if i == m_total:
            leaf(mask, ecount)
            return
        u, v = edges[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        addable = _prism_using_edge(adj, k, u, v) is None
        if addable:
            walk(i + 1, mask | (1 << i), ecount + 1)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        if addable:
            debts.append(i)
            walk(i + 1, mask, ecount)
            debts.pop()
        else:
            walk(i + 1, mask, ecount)

    walk(depth, prefix_mask, count0)
    return {"best": best, "witnesses": witnesses, "stats": stats}


def _run_partition_star(args: tuple) -> dict | None:
    return _run_partition(*args)


def _certify_witnesses(n: int, k: int, graphs: Iterable[Graph]) -> tuple[str, ...]:
    """Deduplicate up to isomorphism (first occurrence kept; exact only at
    n <= 10, raw graph6 otherwise) and re-verify freeness with the generic
    oracle before emission."""
    prism = odd_prism(k)
    seen = set()
    out = []
    for g in graphs:
        g6 = graph6_encode(g).decode("ascii")
        key = canonical_form(g) if g.n <= 10 else ("g6", g6)
        if key in seen:
            continue
        seen.add(key)
        if contains_subgraph(g, prism) is not None:
            raise RuntimeError("witness failed generic prism-freeness re-verification")
        out.append(g6)
    return tuple(out)


def _trivial_certificate(n: int, k: int, mode: str, tol: float) -> ExtremalCertificate:
    kn = make_complete(n)
    optimum: float | int
    if mode == "edges":
        optimum = kn.edge_count
    else:
        optimum = spectral_radius(kn, tolerance=tol).radius if n >= 1 else 0.0
    cert = _build_certificate(n, k, mode, optimum, [kn], SearchStats(), tol,
                              provenance="trivial: pattern larger than host")
    return cert


def _build_certificate(n: int, k: int, mode: str, optimum: float | int,
                       graphs: list[Graph], stats: SearchStats, tol: float,
                       provenance: str = "enumerated",
                       assumption: str | None = None) -> ExtremalCertificate:
    witnesses = _certify_witnesses(n, k, graphs)
    candidate_iso: bool | None = None
    gap: float | None = None
    if mode == "edges":
        formula: float | int | None = ex_formula(n).value if n >= 2 else None
        agrees = formula == optimum
    else:
        formula = spex_closed_form(n) if n >= 3 else None
        gap = abs(optimum - formula) if formula is not None else None
        agrees = gap is not None and gap <= 1e-6
        if 2 <= n <= 10:
            candidate = spex_candidate(n)
            candidate_iso = (len(witnesses) == 1
                             and isomorphic(graph6_decode(witnesses[0]), candidate))
    return ExtremalCertificate(
        n=n, k=k, mode=mode, optimum=optimum, witnesses=witnesses,
        formula_value=formula, agrees=agrees, stats=stats,
        provenance=provenance, candidate_isomorphic=candidate_iso, gap=gap,
        assumption=assumption)


def _brute_force(n: int, k: int, mode: str, tol: float, threads: int) -> ExtremalCertificate:
    if n < 1:
        raise ValueError("need n >= 1")
    if k < 1:
        raise ValueError("need k >= 1")
    t0 = time.perf_counter()
    if 2 * (2 * k + 1) > n:
        cert = _trivial_certificate(n, k, mode, tol)
        cert.stats.elapsed_s = time.perf_counter() - t0
        return cert
    if n > ENUM_CAP:
        raise EnumerationCapError(n)

    m_total = n * (n - 1) // 2
    depth = min(_PREFIX_DEPTH, m_total) if threads > 1 else 0
    tasks = [(n, k, mode, pm, depth, tol, -math.inf) for pm in range(1 << depth)]
    stats = SearchStats()
    partials: list[dict] = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_partition_star, tasks, chunksize=4))
    else:
        # sequential walk; carrying the best across partitions only sharpens pruning
        results = []
        carried = -math.inf
        for task in tasks:
            res = _run_partition(*task[:5], tol, carried)
            if res is not None:
                carried = max(carried, res["best"])
            results.append(res)
    for res in results:
        if res is None:
            continue
        partials.append(res)
        stats.merge(res["stats"])

    best = max(p["best"] for p in partials)
    margin = 0.0 if mode == "edges" else SPECTRAL_MARGIN
    chosen: list[Graph] = []
    for p in partials:
        for mask, value in p["witnesses"]:
            if value >= best - margin:
                chosen.append(Graph.from_edge_mask(n, mask))
    optimum: float | int = int(best) if mode == "edges" else best
    cert = _build_certificate(n, k, mode, optimum, chosen, stats, tol)
    cert.stats.elapsed_s = time.perf_counter() - t0
    return cert


def brute_force_ex(n: int, k: int, *, threads: int = 1) -> ExtremalCertificate:
    """Exact maximum edge count over prism-free graphs on n labeled vertices."""
    return _brute_force(n, k, "edges", SPECTRAL_TOL, threads)


def brute_force_spex(n: int, k: int, tolerance: float = SPECTRAL_TOL, *,
                     threads: int = 1) -> ExtremalCertificate:
    """Exact (to tolerance) maximum spectral radius over prism-free graphs."""
    return _brute_force(n, k, "spectral", tolerance, threads)


def enumerate_maximal_free(n: int, k: int, visitor: Callable[[Graph], None], *,
                           maximal_only: bool = True) -> SearchStats:
    """Visit edge-maximal prism-free labeled graphs on n vertices.

    With maximal_only=False every prism-free labeled graph is visited once
    (a superset of the maximal ones).
    """
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    t0 = time.perf_counter()
    stats = SearchStats()
    if 2 * (2 * k + 1) > n:
        visitor(make_complete(n))
        stats.leaves = stats.maximal = stats.tested = 1
        stats.elapsed_s = time.perf_counter() - t0
        return stats
    if n > ENUM_CAP:
        raise EnumerationCapError(n)
    edges = _edge_list(n)
    m_total = len(edges)
    adj = [0] * n
    debts: list[int] = []

    def leaf() -> None:
        stats.leaves += 1
        if maximal_only:
            for e in debts:
                u, v = edges[e]
                adj[u] |= 1 << v
                adj[v] |= 1 << u
                blocked = _prism_using_edge(adj, k, u, v) is not None
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
                if not blocked:
                    return
            stats.maximal += 1
        stats.tested += 1
        visitor(Graph(n, tuple(adj)))

    def walk(i: int) -> None:
        stats.nodes += 1
        if i == m_total:
            leaf()
            return
        u, v = edges[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        addable = _prism_using_edge(adj, k, u, v) is None
        if addable:
            walk(i + 1)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        if addable:
            debts.append(i)
            walk(i + 1)
            debts.pop()
        else:
            walk(i + 1)

    walk(0)
    stats.elapsed_s = time.perf_counter() - t0
    return stats


# ---------------------------------------------------------------------------
# graph6 stream route (for orders beyond the built-in cap)

def ingest_graph6_stream(source: Iterable[str], k: int, mode: str,
                         tolerance: float = SPECTRAL_TOL) -> ExtremalCertificate:
    """Certificate from an externally generated graph6 stream, one graph per line.

    The stream is presumed complete up to isomorphism for its order; that
    assumption is recorded in the certificate, not verified.
    """
    if mode not in ("edges", "spectral"):
        raise ValueError("mode must be 'edges' or 'spectral'")
    if k < 1:
        raise ValueError("need k >= 1")
    t0 = time.perf_counter()
    stats = SearchStats()
    order: int | None = None
    best = -math.inf
    margin = 0.0 if mode == "edges" else SPECTRAL_MARGIN
    kept: list[tuple[Graph, float]] = []
    prism = odd_prism(k)
    for lineno, line in enumerate(source, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            g = graph6_decode(text)
        except Graph6Error as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        if order is None:
            order = g.n
        elif g.n != order:
            raise ValueError(
                f"line {lineno}: order {g.n} differs from {order}; mixed orders rejected")
        stats.leaves += 1
        if contains_subgraph(g, prism) is not None:
            continue
        stats.tested += 1
        value = float(g.edge_count) if mode == "edges" else \
            spectral_radius(g, tolerance=tolerance).radius
        if value >= best - margin:
            if value > best:
                best = value
                kept = [(h, val) for h, val in kept if val >= best - margin]
            kept.append((g, value))
    if order is None:
        raise ValueError("no graphs in stream")
    chosen = [g for g, val in kept if val >= best - margin]
    optimum: float | int = int(best) if mode == "edges" else best
    cert = _build_certificate(
        order, k, mode, optimum, chosen, stats, tolerance, provenance="streamed",
        assumption=f"stream presumed complete up to isomorphism for n={order}; not verified")
    cert.stats.elapsed_s = time.perf_counter() - t0
    return cert


# ---------------------------------------------------------------------------
# theorem comparison

@dataclass
class VerifyRow:
    n: int
    k: int
    ex_brute: int | None = None
    ex_formula: int | None = None
    ex_agrees: bool | None = None
    ex_witnesses: int | None = None
    spex_brute: float | None = None
    spex_closed: float | None = None
    spex_gap: float | None = None
    candidate_isomorphic: bool | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "n": self.n, "k": self.k,
            "ex_brute": self.ex_brute, "ex_formula": self.ex_formula,
            "ex_agrees": self.ex_agrees, "ex_witnesses": self.ex_witnesses,
            "spex_brute": self.spex_brute, "spex_closed": self.spex_closed,
            "spex_gap": self.spex_gap,
            "candidate_isomorphic": self.candidate_isomorphic,
            "note": self.note,
        }


CSV_COLUMNS = ("n", "k", "ex_brute", "ex_formula", "ex_agrees", "ex_witnesses",
               "spex_brute", "spex_closed", "spex_gap", "candidate_isomorphic",
               "note")


@dataclass
class VerifySummary:
    rows: list[VerifyRow] = field(default_factory=list)
    smallest_agreeing_n: int | None = None
    regime_note: str = ASYMPTOTIC_NOTE

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows],
                "smallest_agreeing_n": self.smallest_agreeing_n,
                "regime_note": self.regime_note}

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows:
            d = r.to_json()
            lines.append(",".join("" if d[c] is None else str(d[c]) for c in CSV_COLUMNS))
        return "\n".join(lines) + "\n"


def verify_theorems(n_lo: int, n_hi: int, k: int, tolerance: float = SPECTRAL_TOL,
                    *, threads: int = 1) -> VerifySummary:
    """Per-n comparison of brute-force optima against both closed forms.

    Small-n disagreement is reported as data, never asserted away; the
    summary records the smallest n of the window from which both objectives
    agree through the end of the window.
    """
    summary = VerifySummary()
    for n in range(n_lo, n_hi + 1):
        row = VerifyRow(n=n, k=k)
        if 2 * (2 * k + 1) > n:
            row.note = "pattern larger than host; K_n optimal"
        exc = brute_force_ex(n, k, threads=threads)
        row.ex_brute = int(exc.optimum)
        row.ex_formula = exc.formula_value
        row.ex_agrees = exc.agrees
        row.ex_witnesses = len(exc.witnesses)
        spx = brute_force_spex(n, k, tolerance, threads=threads)
        row.spex_brute = float(spx.optimum)
        row.spex_closed = spx.formula_value
        row.spex_gap = spx.gap
        row.candidate_isomorphic = spx.candidate_isomorphic
        summary.rows.append(row)
    agree_from: int | None = None
    for row in reversed(summary.rows):
        if row.ex_agrees and row.spex_gap is not None and row.spex_gap <= 1e-6:
            agree_from = row.n
        else:
            break
    summary.smallest_agreeing_n = agree_from
    return summary
