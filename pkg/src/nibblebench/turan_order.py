"""Codegree diagnostics and the left-sparse vertex ordering.

The ordering is built back to front: repeatedly extract a vertex contained in
the fewest triangles of the residual graph and place it at the rightmost open
position.  Because the minimum is at most the average, every extracted vertex
sits in at most 3 * T(residual) / n(residual) residual triangles, which is the
per-step certificate the tests verify.  A vertex's final ``left_tri`` count
(triangles whose other two corners precede it) equals its residual triangle
count at extraction time.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .graph_core import Graph, _sorted_intersect_count, triangle_count

__all__ = [
    "CodegreeProfile",
    "VertexOrdering",
    "codegree_profile",
    "star_extension_floor",
    "left_sparse_ordering",
    "verify_left_sparsity",
    "LeftSparsityReport",
]


@dataclass(frozen=True)
class CodegreeProfile:
    """Per-edge common-neighbor counts; each undirected edge stored once (u < v)."""

    edges: np.ndarray  # (m, 2)
    q: np.ndarray  # (m,)

    @property
    def total(self) -> int:
        """Sum of codegrees; equals three times the triangle count."""
        return int(self.q.sum())

    @property
    def max_value(self) -> int:
        return int(self.q.max()) if self.q.size else 0

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.q, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


@dataclass(frozen=True)
class VertexOrdering:
    """A permutation of the vertices with per-vertex left-triangle counts.

    ``order[i]`` is the vertex at position i; ``left_tri[v]`` counts the
    triangles through v whose other two corners both precede v.  Every
    triangle has exactly one rightmost corner, so left_tri sums to the
    triangle count.
    """

    order: np.ndarray
    left_tri: np.ndarray

    def positions(self) -> np.ndarray:
        pos = np.empty(self.order.shape[0], dtype=np.int64)
        pos[self.order] = np.arange(self.order.shape[0])
        return pos


def codegree_profile(g: Graph) -> CodegreeProfile:
    """Common-neighbor count for every edge; the counts sum to 3 * triangles."""
    edges = g.edge_array()
    q = np.zeros(edges.shape[0], dtype=np.int64)
    k = 0
    for u in range(g.n):
        nu = g.neighbors(u)
        higher = nu[nu > u]
        for v in higher.tolist():
            q[k] = _sorted_intersect_count(nu, g.neighbors(v))
            k += 1
    return CodegreeProfile(edges, q)


def star_extension_floor(profile: CodegreeProfile, t: int) -> int:
    """Sum of C(q_e, t) over all edges, exact in big integers."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return sum(comb(int(qe), t) for qe in profile.q)


def left_sparse_ordering(g: Graph) -> VertexOrdering:
    """Greedy minimum-triangle extraction, filling positions right to left.

    Deterministic: ties go to the lowest vertex id.  Triangle counts are
    maintained incrementally; removing a vertex decrements the counts of each
    adjacent co-triangle pair.
    """
    n = g.n
    order = np.empty(n, dtype=np.int64)
    nbr_sets: list[set[int]] = [set(g.neighbors(v).tolist()) for v in range(n)]
    counts = [0] * n
    for v in range(n):
        counts[v] = _residual_triangles_through(nbr_sets, v)
    tri_total = sum(counts) // 3
    heap: list[tuple[int, int]] = [(counts[v], v) for v in range(n)]
    heapq.heapify(heap)
    alive = [True] * n
    residual_n = n
    residual_tri = tri_total

    for pos in range(n - 1, -1, -1):
        while True:
            c, z = heapq.heappop(heap)
            if alive[z] and counts[z] == c:
                break
        # the minimum never exceeds the residual average 3 T / n
        assert c * residual_n <= 3 * residual_tri
        order[pos] = z
        alive[z] = False
        znbrs = sorted(nbr_sets[z])
        for i, u in enumerate(znbrs):
            nu = nbr_sets[u]
            nu.discard(z)
            for w in znbrs[i + 1 :]:
                if w in nu:
                    counts[u] -= 1
                    counts[w] -= 1
                    heapq.heappush(heap, (counts[u], u))
                    heapq.heappush(heap, (counts[w], w))
        residual_tri -= c
        residual_n -= 1

    left_tri = _left_tri_of_order(g, order)
    assert int(left_tri.sum()) == tri_total
    return VertexOrdering(order, left_tri)


def _residual_triangles_through(nbr_sets: list[set[int]], v: int) -> int:
    nbrs = nbr_sets[v]
    hits = 0
    for u in nbrs:
        smaller = nbr_sets[u] if len(nbr_sets[u]) < len(nbrs) else nbrs
        larger = nbrs if smaller is nbr_sets[u] else nbr_sets[u]
        for w in smaller:
            if w in larger and w != v and w != u:
                hits += 1
    return hits // 2


def _left_tri_of_order(g: Graph, order: np.ndarray) -> np.ndarray:
    """Attribute every triangle to its rightmost corner under ``order``."""
    n = g.n
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    left_tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        nu = g.neighbors(u)
        higher = nu[nu > u]
        for v in higher.tolist():
            nv = g.neighbors(v)
            common = nu[np.isin(nu, nv, assume_unique=True)]
            for w in common[common > v].tolist():
                rightmost = max((pos[u], u), (pos[v], v), (pos[w], w))[1]
                left_tri[rightmost] += 1
    return left_tri


@dataclass(frozen=True)
class LeftSparsityReport:
    max_left_tri: int
    violators: tuple[int, ...]
    left_tri_sum: int
    triangle_total: int
    stored_matches: bool
    passed: bool


def verify_left_sparsity(g: Graph, o: VertexOrdering, bound: int) -> LeftSparsityReport:
    """Recompute left-triangle counts from scratch and report against ``bound``.

    Raises ValueError when the ordering is not a permutation of the vertices.
    """
    order = np.asarray(o.order, dtype=np.int64)
    if order.shape[0] != g.n or not np.array_equal(np.sort(order), np.arange(g.n)):
        raise ValueError("ordering is not a permutation of the vertex set")
    fresh = _left_tri_of_order(g, order)
    violators = tuple(int(v) for v in np.flatnonzero(fresh > bound))
    tri = triangle_count(g)
    stored_matches = bool(np.array_equal(fresh, np.asarray(o.left_tri)))
    passed = not violators and int(fresh.sum()) == tri
    return LeftSparsityReport(
        max_left_tri=int(fresh.max()) if g.n else 0,
        violators=violators,
        left_tri_sum=int(fresh.sum()),
        triangle_total=tri,
        stored_matches=stored_matches,
        passed=passed,
    )
