"""Immutable simple graphs on dense integer ids, named constructions, graph6 I/O."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence


class Graph6Error(ValueError):
    """Raised on malformed graph6 input."""


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph; vertices are 0..n-1, adjacency as per-vertex bitsets.

    adj[v] has bit u set iff u~v. Instances are immutable and hashable; safe
    to share across threads.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row >> self.n:
                raise ValueError(f"vertex {v} adjacent to out-of-range id")
            if row & (1 << v):
                raise ValueError(f"self-loop at vertex {v}")
            if row & ~full:
                raise ValueError("adjacency bits out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u},{v}) for order {n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "Graph":
        """Graph from an edge bitmask in column order: bit index of (u,v), u<v, is C(v,2)+u."""
        adj = [0] * n
        i = 0
        for v in range(1, n):
            for u in range(v):
                if (mask >> i) & 1:
                    adj[u] |= 1 << v
                    adj[v] |= 1 << u
                i += 1
        return cls(n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def neighbors(self, v: int) -> Iterator[int]:
        return bits(self.adj[v])

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edge list as (u,v) pairs with u<v, strictly sorted lexicographically."""
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            for d in bits(row):
                out.append((u, u + 1 + d))
        return tuple(out)

    def edge_mask(self) -> int:
        mask = 0
        i = 0
        for v in range(1, self.n):
            for u in range(v):
                if (self.adj[u] >> v) & 1:
                    mask |= 1 << i
                i += 1
        return mask

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"bad edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))


# ---------------------------------------------------------------------------
# named constructions

def make_complete(n: int) -> Graph:
    """K_n."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def make_complete_bipartite(s: int, t: int) -> Graph:
    """K_{s,t}; part ids {0..s-1} and {s..s+t-1}."""
    if s < 0 or t < 0:
        raise ValueError("part sizes must be nonnegative")
    left = (1 << s) - 1
    right = ((1 << t) - 1) << s
    return Graph(s + t, tuple(right for _ in range(s)) + tuple(left for _ in range(t)))


def make_cycle(n: int) -> Graph:
    """C_n, n >= 3; vertex i adjacent to i±1 mod n."""
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def make_path(n: int) -> Graph:
    """P_n, n >= 1."""
    if n < 1:
        raise ValueError("path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def make_empty(n: int) -> Graph:
    if n < 0:
        raise ValueError("order must be nonnegative")
    return Graph(n, (0,) * n)


def turan_part_sizes(n: int, r: int) -> tuple[int, ...]:
    """Part sizes of T_{n,r}, larger parts first."""
    if r < 1:
        raise ValueError("need at least one part")
    q, rem = divmod(n, r)
    return tuple([q + 1] * rem + [q] * (r - rem))


def make_turan(n: int, r: int) -> Graph:
    """Turan graph T_{n,r}: complete r-partite, near-equal parts, ids in part order."""
    sizes = turan_part_sizes(n, r)
    full = (1 << n) - 1
    adj = []
    start = 0
    for size in sizes:
        part = ((1 << size) - 1) << start
        rest = full ^ part
        adj.extend(rest for _ in range(size))
        start += size
    return Graph(n, tuple(adj))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((full ^ row) & ~(1 << v) for v, row in enumerate(g.adj)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """G u H; ids of H shifted by |G|."""
    shifted = tuple(row << g.n for row in h.adj)
    return Graph(g.n + h.n, g.adj + shifted)


def join(g: Graph, h: Graph) -> Graph:
    """G v H: disjoint union plus all edges between the two sides; H ids shifted by |G|."""
    gmask = (1 << g.n) - 1
    hmask = ((1 << h.n) - 1) << g.n
    left = tuple(row | hmask for row in g.adj)
    right = tuple((row << g.n) | gmask for row in h.adj)
    return Graph(g.n + h.n, left + right)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G x H on the id-pair grid flattened row-major: (u,v) -> u*|H|+v."""
    n = g.n * h.n
    adj = [0] * n
    for u in range(g.n):
        for v in range(h.n):
            i = u * h.n + v
            row = 0
            for w in bits(h.adj[v]):
                row |= 1 << (u * h.n + w)
            for w in bits(g.adj[u]):
                row |= 1 << (w * h.n + v)
            adj[i] = row
    return Graph(n, tuple(adj))


def odd_prism(k: int) -> Graph:
    """C_{2k+1} x K_2: two odd cycles joined by a perfect matching; vertex (i, layer) = 2i+layer."""
    if k < 1:
        raise ValueError("odd prism needs k >= 1")
    return cartesian_product(make_cycle(2 * k + 1), make_complete(2))


def spex_candidate(n: int) -> Graph:
    """K_1 joined to T_{n-1,2}; the apex has id 0 and full degree n-1."""
    if n < 2:
        raise ValueError("candidate needs n >= 2")
    return join(make_complete(1), make_turan(n - 1, 2))


# ---------------------------------------------------------------------------
# connectivity / canonical form helpers

def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if (seen >> s) & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(list(bits(comp)))
    return out

def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def canonical_form(g: Graph) -> tuple[int, ...]:
    """Canonical invariant for isomorphism testing at small n (exact, n <= 10).

    Minimizes the upper-triangle bit string over all vertex orderings that
    list an isomorphism-invariant vertex class sequence (classes keyed by
    degree and sorted neighbor-degree multiset). Two graphs are isomorphic
    iff their canonical forms are equal.
    """
    if g.n > 10:
        raise ValueError("canonical form supported only for n <= 10")
    deg = g.degrees()
    key = {}
    for v in range(g.n):
        key[v] = (deg[v], tuple(sorted((deg[w] for w in g.neighbors(v)), reverse=True)))
    classes: dict[tuple, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(key[v], []).append(v)
    ordered = [classes[c] for c in sorted(classes, reverse=True)]

    best: tuple[int, ...] | None = None
    for pieces in _orderings(ordered):
        sig = []
        for j in range(g.n):
            vj = pieces[j]
            row = 0
            for i in range(j):
                if g.has_edge(pieces[i], vj):
                    row |= 1 << i
            sig.append(row)
        cand = tuple(sig)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return (g.n,) + best


def _orderings(class_lists: list[list[int]]) -> Iterator[list[int]]:
    if not class_lists:
        yield []
        return
    head, rest = class_lists[0], class_lists[1:]
    for perm in permutations(head):
        for tail in _orderings(rest):
            yield list(perm) + tail


def isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    return canonical_form(g) == canonical_form(h)


# ---------------------------------------------------------------------------
# graph6 (bit-exact interchange with external exhaustive generators)

_G6_MIN, _G6_MAX = 63, 126


def graph6_encode(g: Graph) -> bytes:
    """Standard graph6 bytes: header, then column-order upper-triangle bits in 6-bit groups +63."""
    n = g.n
    if n <= 62:
        head = bytes([n + 63])
    elif n <= 258047:
        head = bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    else:
        raise ValueError("graph6 encoder supports n <= 258047")
    body = bytearray()
    acc = 0
    nb = 0
    for v in range(1, n):
        col = g.adj[v]
        for u in range(v):
            acc = (acc << 1) | ((col >> u) & 1)
            nb += 1
            if nb == 6:
                body.append(acc + 63)
                acc, nb = 0, 0
    if nb:
        body.append((acc << (6 - nb)) + 63)
    return head + bytes(body)


def graph6_decode(data: bytes | str) -> Graph:
    """Inverse of graph6_encode; rejects malformed length or bytes outside 63..126."""
    if isinstance(data, str):
        try:
            raw = data.strip().encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6Error("non-ascii graph6 input") from exc
    else:
        raw = data.strip()
    if not raw:
        raise Graph6Error("empty graph6 input")
    for b in raw:
        if not (_G6_MIN <= b <= _G6_MAX):
            raise Graph6Error(f"byte {b} outside graph6 range 63..126")
    if raw[0] == 126:
        if len(raw) >= 2 and raw[1] == 126:
            raise Graph6Error("8-byte graph6 order header not supported")
        if len(raw) < 4:
            raise Graph6Error("truncated graph6 order header")
        n = ((raw[1] - 63) << 12) | ((raw[2] - 63) << 6) | (raw[3] - 63)
        body = raw[4:]
    else:
        n = raw[0] - 63
        body = raw[1:]
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) != need:
        raise Graph6Error(f"graph6 body for n={n} needs {need} bytes, got {len(body)}")
    adj = [0] * n
    i = 0
    for v in range(1, n):
        for u in range(v):
            byte = body[i // 6] - 63
            if (byte >> (5 - i % 6)) & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            i += 1
    return Graph(n, tuple(adj))
