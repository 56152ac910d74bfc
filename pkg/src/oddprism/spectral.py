"""Spectral radius and Perron vectors by shifted power iteration, equitable
partitions with exact quotient characteristic polynomials, and the closed-form
polynomial families used by the extremal analysis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graphs import Graph, bits, components, is_connected

DEFAULT_TOL = 1e-10
MAX_ITERATIONS = 10**6
_DENSE_LIMIT = 4096
_VECTOR_JSON_LIMIT = 10**4


class NonconvergenceError(RuntimeError):
    """Power iteration exhausted its budget; carries the best estimate."""

    def __init__(self, estimate: float, iterations: int, residual: float):
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(estimate {estimate}, residual {residual})")
        self.estimate = estimate
        self.iterations = iterations
        self.residual = residual


class NotEquitableError(ValueError):
    """Partition is not equitable; identifies a violating vertex pair."""

    def __init__(self, block: int, vertices: tuple[int, int], target_block: int):
        super().__init__(
            f"vertices {vertices[0]} and {vertices[1]} of block {block} have "
            f"different neighbour counts in block {target_block}")
        self.block = block
        self.vertices = vertices
        self.target_block = target_block


class LemmaViolationError(RuntimeError):
    """A verified inequality from the theory failed; expected never."""


@dataclass(frozen=True)
class SpectralResult:
    """Dominant-eigenvalue result: radius, max-normalized nonnegative vector,
    iteration count and the infinity-norm eigen-residual."""

    radius: float
    vector: tuple[float, ...]
    iterations: int
    residual: float

    def to_json(self) -> dict:
        out = {"radius": self.radius, "residual": self.residual,
               "iterations": self.iterations}
        if len(self.vector) <= _VECTOR_JSON_LIMIT:
            out["vector"] = list(self.vector)
        return out


def _power_shifted(matvec: Callable[[np.ndarray], np.ndarray], m: int,
                   tol: float, max_iter: int) -> tuple[float, np.ndarray, int, float]:
    """Dominant eigenpair of A via iteration on A+I.

    The +1 shift makes the dominant eigenvalue of each component simple even
    for bipartite graphs (whose +/-lambda pairs stall the unshifted method).
    Convergence: |delta lambda| < tol and residual < tol*m, with the iterate
    kept max-normalized.
    """
    x = np.ones(m)
    lam_prev = float("inf")
    lam = 1.0
    resid = float("inf")
    for it in range(1, max_iter + 1):
        y = matvec(x) + x
        lam = float(x @ y) / float(x @ x)
        resid = float(np.max(np.abs(y - lam * x)))
        if abs(lam - lam_prev) < tol and resid < tol * m:
            return lam - 1.0, x, it, resid
        lam_prev = lam
        x = y / float(y.max())
    raise NonconvergenceError(lam - 1.0, max_iter, resid)


def _component_matvec(g: Graph, comp: list[int]) -> Callable[[np.ndarray], np.ndarray]:
    m = len(comp)
    pos = {v: i for i, v in enumerate(comp)}
    if m <= _DENSE_LIMIT:
        a = np.zeros((m, m))
        for i, v in enumerate(comp):
            for w in bits(g.adj[v]):
                a[i, pos[w]] = 1.0
        return lambda x: a @ x
    nbrs = [np.fromiter((pos[w] for w in bits(g.adj[v])), dtype=np.int64)
            for v in comp]
    return lambda x: np.array([x[nb].sum() if nb.size else 0.0 for nb in nbrs])


def spectral_radius(g: Graph, tolerance: float = DEFAULT_TOL,
                    max_iterations: int = MAX_ITERATIONS) -> SpectralResult:
    """Largest adjacency eigenvalue of g, per component, reported to tolerance.

    For disconnected input the radius is the max over components; the
    reported vector is supported on the first component attaining it, with
    maximum entry exactly 1.
    """
    if g.n == 0:
        raise ValueError("spectral radius undefined on the empty vertex set")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    best: tuple[float, list[int], np.ndarray, float] | None = None
    iterations = 0
    for comp in components(g):
        lam, vec, its, resid = _power_shifted(
            _component_matvec(g, comp), len(comp), tolerance, max_iterations)
        iterations += its
        if best is None or lam > best[0]:
            best = (lam, comp, vec, resid)
    assert best is not None
    lam, comp, vec, resid = best
    full = np.zeros(g.n)
    full[np.array(comp, dtype=np.int64)] = vec
    return SpectralResult(radius=lam, vector=tuple(float(t) for t in full),
                          iterations=iterations, residual=resid)


def perron_vector(g: Graph, tolerance: float = DEFAULT_TOL,
                  max_iterations: int = MAX_ITERATIONS) -> SpectralResult:
    """Positive max-normalized eigenvector at the spectral radius; connected input only."""
    if g.n == 0:
        raise ValueError("perron vector undefined on the empty vertex set")
    if not is_connected(g):
        raise ValueError("perron vector requires a connected graph")
    res = spectral_radius(g, tolerance, max_iterations)
    if min(res.vector) <= 0.0:
        raise NonconvergenceError(res.radius, res.iterations, res.residual)
    return res


def rayleigh_lower_bound(g: Graph) -> float:
    """2e(G)/n, the all-ones Rayleigh quotient; never exceeds the spectral radius."""
    if g.n == 0:
        raise ValueError("undefined on the empty vertex set")
    return 2.0 * g.edge_count / g.n


# ---------------------------------------------------------------------------
# equitable partitions and quotient matrices

@dataclass(frozen=True)
class VertexPartition:
    """Block assignment vertex id -> block id, with dense block ids 0..k-1."""

    assignment: tuple[int, ...]
    block_count: int

    def __post_init__(self) -> None:
        seen = set(self.assignment)
        if seen != set(range(self.block_count)):
            raise ValueError("block ids must be dense 0..k-1 with no empty block")

    @classmethod
    def trivial(cls, n: int) -> "VertexPartition":
        return cls((0,) * n, 1) if n else cls((), 0)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "VertexPartition":
        covered: dict[int, int] = {}
        for b, block in enumerate(blocks):
            for v in block:
                if v in covered:
                    raise ValueError(f"vertex {v} listed twice")
                covered[v] = b
        n = len(covered)
        if set(covered) != set(range(n)):
            raise ValueError("blocks must partition 0..n-1")
        return cls(tuple(covered[v] for v in range(n)), len(blocks))

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for v, b in enumerate(self.assignment):
            out[b].append(v)
        return out

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks())


@dataclass(frozen=True)
class QuotientMatrix:
    """Nonnegative k x k matrix of block-to-block neighbour counts."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.rows)
        for row in self.rows:
            if len(row) != k:
                raise ValueError("quotient matrix must be square")
            if any(x < 0 for x in row):
                raise ValueError("quotient entries must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.rows)

    @classmethod
    def coerce(cls, b: "QuotientMatrix | Sequence[Sequence[int]]") -> "QuotientMatrix":
        if isinstance(b, QuotientMatrix):
            return b
        return cls(tuple(tuple(int(x) for x in row) for row in b))


def coarsest_equitable_partition(g: Graph, initial: VertexPartition | None = None) -> VertexPartition:
    """Coarsest equitable refinement of initial, by iterated signature splitting.

    Signatures pair the current block with the per-block neighbour counts;
    new block ids are assigned in order of first occurrence by vertex id.
    """
    n = g.n
    if initial is None:
        initial = VertexPartition.trivial(n)
    if len(initial.assignment) != n:
        raise ValueError("initial partition does not match graph order")
    ids: dict[int, int] = {}
    assign = []
    for b in initial.assignment:
        if b not in ids:
            ids[b] = len(ids)
        assign.append(ids[b])
    k = len(ids)
    while True:
        sig_ids: dict[tuple, int] = {}
        new = []
        for v in range(n):
            cnt = [0] * k
            for w in bits(g.adj[v]):
                cnt[assign[w]] += 1
            sig = (assign[v], tuple(cnt))
            if sig not in sig_ids:
                sig_ids[sig] = len(sig_ids)
            new.append(sig_ids[sig])
        if new == assign:
            return VertexPartition(tuple(assign), k)
        assign = new
        k = len(sig_ids)


def _block_counts(g: Graph, p: VertexPartition) -> list[list[int]] | NotEquitableError:
    if len(p.assignment) != g.n:
        raise ValueError("partition does not match graph order")
    blocks = p.blocks()
    rows: list[list[int]] = []
    for i, block in enumerate(blocks):
        ref: list[int] | None = None
        ref_v = -1
        for v in block:
            cnt = [0] * p.block_count
            for w in bits(g.adj[v]):
                cnt[p.assignment[w]] += 1
            if ref is None:
                ref, ref_v = cnt, v
            elif cnt != ref:
                j = next(t for t in range(p.block_count) if cnt[t] != ref[t])
                return NotEquitableError(i, (ref_v, v), j)
        rows.append(ref if ref is not None else [0] * p.block_count)
    return rows


def is_equitable(g: Graph, p: VertexPartition) -> bool:
    return not isinstance(_block_counts(g, p), NotEquitableError)


def quotient_matrix(g: Graph, p: VertexPartition) -> QuotientMatrix:
    """Quotient matrix of an equitable partition; error names a violating pair."""
    rows = _block_counts(g, p)
    if isinstance(rows, NotEquitableError):
        raise rows
    return QuotientMatrix(tuple(tuple(row) for row in rows))


def quotient_spectral_radius(b: QuotientMatrix | Sequence[Sequence[int]],
                             tolerance: float = DEFAULT_TOL,
                             max_iterations: int = MAX_ITERATIONS) -> float:
    """Largest eigenvalue of a quotient matrix.

    Shifted power iteration, with the characteristic-polynomial bisection
    fallback for k <= 4 when the iteration fails to converge.
    """
    q = QuotientMatrix.coerce(b)
    if q.k == 0:
        raise ValueError("empty quotient matrix")
    a = np.array(q.rows, dtype=float)
    try:
        lam, _, _, _ = _power_shifted(lambda x: a @ x, q.k, tolerance, max_iterations)
        return lam
    except NonconvergenceError:
        if q.k > 4:
            raise
        hi = float(max(sum(row) for row in q.rows)) + 1.0
        return largest_real_root(quotient_char_poly(q), hi)


def quotient_char_poly(b: QuotientMatrix | Sequence[Sequence[int]]) -> "RealPolynomial":
    """det(xI - B) with exact integer coefficients (Faddeev-LeVerrier), k <= 6."""
    q = QuotientMatrix.coerce(b)
    k = q.k
    if k > 6:
        raise ValueError("exact characteristic polynomial limited to k <= 6")
    a = [list(row) for row in q.rows]
    m = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    cs: list[int] = []
    for j in range(1, k + 1):
        if cs:
            c_prev = cs[-1]
            for d in range(k):
                m[d][d] += c_prev
        m = [[sum(a[i][t] * m[t][jj] for t in range(k)) for jj in range(k)]
             for i in range(k)]
        tr = sum(m[d][d] for d in range(k))
        c, rem = divmod(-tr, j)
        if rem:
            raise ArithmeticError("Faddeev-LeVerrier division not exact")
        cs.append(c)
    # x^k + cs[0] x^(k-1) + ... + cs[k-1], constant term first
    return RealPolynomial(tuple(reversed(cs)) + (1,))


# ---------------------------------------------------------------------------
# polynomials

@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial, coefficient list with constant term first."""

    coeffs: tuple[float | int, ...]

    def __post_init__(self) -> None:
        c = tuple(self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RealPolynomial":
        return RealPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        if not self.coeffs or not other.coeffs:
            return RealPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RealPolynomial(tuple(out))

    def __sub__(self, other: "RealPolynomial") -> "RealPolynomial":
        mlen = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (mlen - len(self.coeffs))
        b = other.coeffs + (0,) * (mlen - len(other.coeffs))
        return RealPolynomial(tuple(x - y for x, y in zip(a, b)))


def paper_poly_f(r: int, s: int, n2: int) -> RealPolynomial:
    """Printed quartic for the joined triangle/star construction:
    x^4 - 2x^3 - (n2(s+3r+1)+s)x^2 + 2(n2+s)x + 3 n2 s r + 4 n2 s."""
    if min(r, s, n2) < 0:
        raise ValueError("parameters must be nonnegative")
    return RealPolynomial((3 * n2 * s * r + 4 * n2 * s, 2 * (n2 + s),
                           -(n2 * (s + 3 * r + 1) + s), -2, 1))


def paper_poly_g(n1: int, n2: int) -> RealPolynomial:
    """As-printed cubic x^3 - (n2(n1+1)+n1)x - 2; see eq_g1_report for the
    derived constant term."""
    if min(n1, n2) < 1:
        raise ValueError("part sizes must be positive")
    return RealPolynomial((-2, -(n2 * (n1 + 1) + n1), 0, 1))


def paper_poly_g3(n1: int, n2: int) -> RealPolynomial:
    """As-printed cubic x^3 - ((n2+1)n1 + n1 - 1)x - 2 for the rebalanced split."""
    if min(n1, n2) < 1:
        raise ValueError("part sizes must be positive")
    return RealPolynomial((-2, -((n2 + 1) * n1 + n1 - 1), 0, 1))


def apex_quotient_cubic(n1: int, n2: int) -> RealPolynomial:
    """Derived cubic: exact char poly of the apex/part/part quotient,
    x^3 - (n1 n2 + n1 + n2)x - 2 n1 n2."""
    if min(n1, n2) < 1:
        raise ValueError("part sizes must be positive")
    return quotient_char_poly([[0, n1, n2], [1, 0, n2], [1, n1, 0]])


def largest_real_root(p: RealPolynomial, bracket_hi: float, *,
                      scan_points: int = 2048) -> float:
    """Largest real root of p in (0, bracket_hi], to 1e-10.

    Downward sign scan to bracket the root, bisection, then guarded Newton
    polish. Raises when no sign change is found in the interval.
    """
    if p.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    if bracket_hi <= 0:
        raise ValueError("bracket must be positive")
    xs = [bracket_hi * i / scan_points for i in range(scan_points, -1, -1)]
    fb = p(xs[0])
    if fb == 0.0:
        return xs[0]
    for a in xs[1:]:
        fa = p(a)
        if fa == 0.0:
            return a
        if (fa > 0) != (fb > 0):
            lo, hi = a, a + bracket_hi / scan_points
            flo = fa
            for _ in range(200):
                if hi - lo < 1e-13 * max(1.0, abs(hi)):
                    break
                mid = 0.5 * (lo + hi)
                fm = p(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            x = 0.5 * (lo + hi)
            dp = p.derivative()
            for _ in range(6):
                d = dp(x)
                if d == 0.0:
                    break
                step = p(x) / d
                nxt = x - step
                if not (lo - 1e-9 <= nxt <= hi + 1e-9):
                    break
                x = nxt
                if abs(step) < 1e-14 * max(1.0, abs(x)):
                    break
            return x
        fb = fa
    raise ValueError("no sign change found in (0, bracket_hi]")


# ---------------------------------------------------------------------------
# neighbourhood-rotation comparison

def _quadform(g: Graph, x: np.ndarray) -> float:
    total = 0.0
    for u, v in g.edges():
        total += x[u] * x[v]
    return 2.0 * total


def rotation_test(g: Graph, g_prime: Graph, u: int, tolerance: float = 1e-9) -> bool:
    """Check the eigenvector-rotation premise and its consequence.

    Requires both graphs connected on the same vertex set with N(u) strictly
    enlarged in g_prime. Evaluates x'A'x >= x'Ax using the Perron vector x of
    g; whenever the premise holds, the strict radius increase is asserted
    (violation raises LemmaViolationError). Returns whether the premise held.
    """
    if g.n != g_prime.n:
        raise ValueError("graphs must share a vertex set")
    if not (0 <= u < g.n):
        raise ValueError("vertex out of range")
    if g.adj[u] & ~g_prime.adj[u] or g.adj[u] == g_prime.adj[u]:
        raise ValueError("neighbourhood of u must be strictly contained in the rotated graph")
    if not is_connected(g) or not is_connected(g_prime):
        raise ValueError("both graphs must be connected")
    x = np.array(perron_vector(g).vector)
    lhs = _quadform(g_prime, x)
    rhs = _quadform(g, x)
    premise = lhs >= rhs - 1e-12 * max(1.0, abs(rhs))
    if premise:
        lam = spectral_radius(g).radius
        lam_prime = spectral_radius(g_prime).radius
        if not lam_prime > lam - tolerance:
            raise LemmaViolationError(
                f"premise held but radius did not increase: {lam_prime} vs {lam}")
    return premise
