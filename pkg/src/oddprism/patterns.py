"""Forbidden-subgraph detection: a generic backtracking embedder, a
specialized odd-prism detector, and the two-block structural patterns."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graphs import Graph, bits, make_cycle, odd_prism
from .spectral import VertexPartition


class NodeBudgetExceeded(RuntimeError):
    """Search spent its node-expansion cap without an answer."""


@dataclass(frozen=True)
class Embedding:
    """Injective map pattern vertex -> host vertex; every pattern edge maps to a host edge."""

    mapping: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.mapping)


def _checked(host: Graph, pattern: Graph, mapping: Sequence[int]) -> Embedding:
    # Self-checking output: never hand back an unverified embedding.
    if len(set(mapping)) != len(mapping):
        raise RuntimeError("embedding is not injective")
    for u, v in pattern.edges():
        if not host.has_edge(mapping[u], mapping[v]):
            raise RuntimeError(f"pattern edge ({u},{v}) not present in host image")
    return Embedding(tuple(mapping))


def _pattern_order(pattern: Graph) -> tuple[list[int], list[list[int]]]:
    """Search order: descending degree, then connectivity to mapped vertices;
    ties break by vertex id. Returns the order and, per position, the earlier
    positions holding pattern neighbours."""
    deg = pattern.degrees()
    order: list[int] = []
    placed = set()
    while len(order) < pattern.n:
        best = None
        for v in range(pattern.n):
            if v in placed:
                continue
            anchored = sum(1 for w in pattern.neighbors(v) if w in placed)
            key = (anchored, deg[v], -v)
            if best is None or key > best[0]:
                best = (key, v)
        order.append(best[1])
        placed.add(best[1])
    pos = {v: i for i, v in enumerate(order)}
    prior = [[pos[w] for w in pattern.neighbors(v) if pos[w] < i]
             for i, v in enumerate(order)]
    return order, prior


def contains_subgraph(host: Graph, pattern: Graph, *,
                      node_cap: int | None = None) -> Embedding | None:
    """Embedding of pattern into host as a (not necessarily induced) subgraph.

    Backtracking with degree-based candidate pruning and neighbourhood-bitset
    filtering; deterministic: candidates are tried ascending, so the returned
    embedding is the least one under the search order.
    """
    if pattern.n == 0:
        return Embedding(())
    if pattern.n > host.n or pattern.edge_count > host.edge_count:
        return None
    order, prior = _pattern_order(pattern)
    pdeg = pattern.degrees()
    hdeg = host.degrees()
    all_hosts = (1 << host.n) - 1
    deg_ok = {}
    for v in order:
        d = pdeg[v]
        if d not in deg_ok:
            mask = 0
            for h in range(host.n):
                if hdeg[h] >= d:
                    mask |= 1 << h
            deg_ok[d] = mask
    if deg_ok[pdeg[order[0]]] == 0:
        return None

    assigned = [0] * pattern.n
    expansions = 0

    def backtrack(depth: int, used: int) -> bool:
        nonlocal expansions
        if depth == pattern.n:
            return True
        cand = deg_ok[pdeg[order[depth]]] & ~used & all_hosts
        for q in prior[depth]:
            cand &= host.adj[assigned[q]]
            if not cand:
                return False
        for h in bits(cand):
            expansions += 1
            if node_cap is not None and expansions > node_cap:
                raise NodeBudgetExceeded(f"cap {node_cap} hit in generic embedder")
            assigned[depth] = h
            if backtrack(depth + 1, used | (1 << h)):
                return True
        return False

    if not backtrack(0, 0):
        return None
    mapping = [0] * pattern.n
    for i, v in enumerate(order):
        mapping[v] = assigned[i]
    return _checked(host, pattern, mapping)


# ---------------------------------------------------------------------------
# specialized odd-prism detector

class _Budget:
    __slots__ = ("left",)

    def __init__(self, cap: int | None):
        self.left = cap

    def spend(self) -> None:
        if self.left is not None:
            self.left -= 1
            if self.left < 0:
                raise NodeBudgetExceeded("node-expansion cap hit in prism detector")


def _three_core(adj: Sequence[int], mask: int) -> int:
    while True:
        drop = 0
        for v in bits(mask):
            if (adj[v] & mask).bit_count() < 3:
                drop |= 1 << v
        if not drop:
            return mask
        mask &= ~drop


def _partner_cycle(adj: Sequence[int], cyc: list[int], allowed: int,
                   budget: _Budget) -> list[int] | None:
    """Second cycle matched position-by-position to cyc inside allowed."""
    length = len(cyc)
    for i in range(length):
        if not adj[cyc[i]] & allowed:
            return None
    partner = [0] * length

    def extend(i: int, used: int) -> bool:
        if i == length:
            return True
        cand = adj[cyc[i]] & allowed & ~used
        if i >= 1:
            cand &= adj[partner[i - 1]]
        if i == length - 1:
            cand &= adj[partner[0]]
        for w in bits(cand):
            budget.spend()
            partner[i] = w
            if extend(i + 1, used | (1 << w)):
                return True
        return False

    return partner if extend(0, 0) else None


def _find_prism_bitsets(adj: Sequence[int], k: int,
                        budget: _Budget) -> tuple[list[int], list[int]] | None:
    """Two vertex-disjoint matched (2k+1)-cycles, or None.

    The prism's automorphisms (dihedral on the cycle, times the layer swap)
    are quotiented out by anchoring the first cycle at its minimum vertex
    with canonical direction, and requiring the partner cycle to live above
    that minimum.
    """
    n = len(adj)
    length = 2 * k + 1
    if n < 2 * length:
        return None
    core = _three_core(adj, (1 << n) - 1)
    if core.bit_count() < 2 * length:
        return None
    adj = [row & core for row in adj]
    path = [0] * length

    for s in bits(core):
        above = core & ~((1 << (s + 1)) - 1)
        path[0] = s
        first = adj[s] & above

        def grow(i: int, used: int) -> tuple[list[int], list[int]] | None:
            cand = adj[path[i - 1]] & above & ~used
            if i == length - 1:
                # close the cycle; direction fixed by path[1] < path[-1]
                cand &= adj[s] & ~((1 << (path[1] + 1)) - 1)
            for v in bits(cand):
                budget.spend()
                path[i] = v
                if i == length - 1:
                    cyc = path[:]
                    cyc_mask = 0
                    for w in cyc:
                        cyc_mask |= 1 << w
                    partner = _partner_cycle(adj, cyc, above & ~cyc_mask, budget)
                    if partner is not None:
                        return cyc, partner
                else:
                    res = grow(i + 1, used | (1 << v))
                    if res is not None:
                        return res
            return None

        for v1 in bits(first):
            budget.spend()
            path[1] = v1
            res = grow(2, (1 << s) | (1 << v1))
            if res is not None:
                return res
    return None


def _prism_using_edge(adj: Sequence[int], k: int, x: int, y: int,
                      budget: _Budget | None = None) -> tuple[list[int], list[int]] | None:
    """Prism whose image uses the (present) edge {x,y}, as rung or cycle edge.

    Used incrementally: if the graph without {x,y} is prism-free, the graph
    with it is prism-free iff this returns None.
    """
    if budget is None:
        budget = _Budget(None)
    length = 2 * k + 1
    core = _three_core(adj, (1 << len(adj)) - 1)
    if core.bit_count() < 2 * length or not ((core >> x) & (core >> y) & 1):
        return None
    adj = [row & core for row in adj]

    # rung case: positions 0 of both cycles are x and y
    us = [0] * length
    vs = [0] * length
    us[0], vs[0] = x, y

    def rung_extend(i: int, used: int) -> bool:
        if i == length:
            return True
        ucand = adj[us[i - 1]] & ~used
        if i == length - 1:
            ucand &= adj[x]
        for u in bits(ucand):
            budget.spend()
            vcand = adj[vs[i - 1]] & adj[u] & ~used & ~(1 << u)
            if i == length - 1:
                vcand &= adj[y]
            us[i] = u
            for v in bits(vcand):
                budget.spend()
                vs[i] = v
                if rung_extend(i + 1, used | (1 << u) | (1 << v)):
                    return True
        return False

    if rung_extend(1, (1 << x) | (1 << y)):
        return us[:], vs[:]

    # cycle-edge case: positions 0 and 1 of the first cycle are x and y
    us[0], us[1] = x, y
    start = (1 << x) | (1 << y)

    def cyc_extend(i: int, used: int) -> bool:
        if i == length:
            return True
        ucand = adj[us[i - 1]] & ~used
        if i == length - 1:
            ucand &= adj[x]
        for u in bits(ucand):
            budget.spend()
            vcand = adj[vs[i - 1]] & adj[u] & ~used & ~(1 << u)
            if i == length - 1:
                vcand &= adj[vs[0]]
            us[i] = u
            for v in bits(vcand):
                budget.spend()
                vs[i] = v
                if cyc_extend(i + 1, used | (1 << u) | (1 << v)):
                    return True
        return False

    for v0 in bits(adj[x] & ~start):
        budget.spend()
        vs[0] = v0
        for v1 in bits(adj[y] & adj[v0] & ~start & ~(1 << v0)):
            budget.spend()
            vs[1] = v1
            if cyc_extend(2, start | (1 << v0) | (1 << v1)):
                return us[:], vs[:]
    return None


def _prism_embedding(host: Graph, k: int, cyc_u: list[int], cyc_v: list[int]) -> Embedding:
    mapping = [0] * (2 * (2 * k + 1))
    for i in range(2 * k + 1):
        mapping[2 * i] = cyc_u[i]
        mapping[2 * i + 1] = cyc_v[i]
    return _checked(host, odd_prism(k), mapping)


def find_prism(g: Graph, k: int, *, node_cap: int | None = None) -> Embedding | None:
    """Witness embedding of the odd prism with parameter k, or None."""
    if k < 1:
        raise ValueError("prism parameter must be >= 1")
    res = _find_prism_bitsets(g.adj, k, _Budget(node_cap))
    if res is None:
        return None
    return _prism_embedding(g, k, *res)


def is_prism_free(g: Graph, k: int, *, node_cap: int | None = None) -> bool:
    """Whether g contains no odd prism with parameter k; agrees with the generic oracle."""
    return find_prism(g, k, node_cap=node_cap) is None


# ---------------------------------------------------------------------------
# two-block structural patterns

def find_crossing_c4(g: Graph, p: VertexPartition) -> Embedding | None:
    """4-cycle with an adjacent pair in one block and the other pair in the
    second block, as an embedding of C4 in cycle order, or None."""
    if p.block_count != 2:
        raise ValueError("partition must have exactly 2 blocks")
    if len(p.assignment) != g.n:
        raise ValueError("partition does not match graph order")
    masks = [0, 0]
    for v, b in enumerate(p.assignment):
        masks[b] |= 1 << v
    c4 = make_cycle(4)
    for side, other in ((0, 1), (1, 0)):
        for a in bits(masks[side]):
            for b in bits(g.adj[a] & masks[side] & ~((1 << (a + 1)) - 1)):
                for c in bits(g.adj[b] & masks[other]):
                    for d in bits(g.adj[c] & g.adj[a] & masks[other] & ~(1 << c)):
                        return _checked(g, c4, (a, b, c, d))
    return None


@lru_cache(maxsize=None)
def _prism_tables(k: int) -> tuple[Graph, tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """The prism plus its 4-vertex paths and 4-cycles, enumerated generically."""
    g = odd_prism(k)
    p4s = set()
    for b, c in g.edges():
        for mb, mc in ((b, c), (c, b)):
            for a in g.neighbors(mb):
                if a == mc:
                    continue
                for d in g.neighbors(mc):
                    if d in (mb, a):
                        continue
                    if a < d:
                        p4s.add((a, mb, mc, d))
    c4s = set()
    for q0 in range(g.n):
        for q1 in g.neighbors(q0):
            if q1 <= q0:
                continue
            for q2 in g.neighbors(q1):
                if q2 <= q0:
                    continue
                for q3 in g.neighbors(q2):
                    if q3 <= q0 or q3 == q1 or not g.has_edge(q3, q0):
                        continue
                    if q1 < q3:
                        c4s.add((q0, q1, q2, q3))
    return g, tuple(sorted(p4s)), tuple(sorted(c4s))


def _check_coloring(k: int, colors: Sequence[int]) -> None:
    need = 2 * (2 * k + 1)
    if len(colors) != need:
        raise ValueError(f"colouring must cover {need} vertices")
    if any(c not in (0, 1) for c in colors):
        raise ValueError("colours must be 0 (red) or 1 (blue)")


def find_mono_p4(k: int, colors: Sequence[int]) -> tuple[int, int, int, int] | None:
    """A single-colour 4-vertex path of the prism under the colouring, or None."""
    _check_coloring(k, colors)
    _, p4s, _ = _prism_tables(k)
    for a, b, c, d in p4s:
        if colors[a] == colors[b] == colors[c] == colors[d]:
            return a, b, c, d
    return None


def find_bicolored_c4(k: int, colors: Sequence[int]) -> tuple[int, int, int, int] | None:
    """A 4-cycle u,v,w,z of the prism with u,v red and w,z blue, or None."""
    _check_coloring(k, colors)
    _, _, c4s = _prism_tables(k)
    for cyc in c4s:
        for r in range(4):
            u, v, w, z = cyc[r], cyc[(r + 1) % 4], cyc[(r + 2) % 4], cyc[(r + 3) % 4]
            if colors[u] == colors[v] == 0 and colors[w] == colors[z] == 1:
                return u, v, w, z
    return None


@dataclass(frozen=True)
class StructureReport:
    """Outcome of the direct prism-colouring search."""

    kind: str  # "mono_p4" | "bicolored_c4" | "none"
    vertices: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "vertices": None if self.vertices is None else list(self.vertices)}


def find_mono_p4_or_bicolored_c4(prism_k: int, coloring: Sequence[int]) -> StructureReport:
    """Search the prism directly for a monochromatic P4 or a red-red-blue-blue
    C4; by exhaustive verification a find always exists."""
    mono = find_mono_p4(prism_k, coloring)
    if mono is not None:
        return StructureReport("mono_p4", mono)
    c4 = find_bicolored_c4(prism_k, coloring)
    if c4 is not None:
        return StructureReport("bicolored_c4", c4)
    return StructureReport("none", None)
