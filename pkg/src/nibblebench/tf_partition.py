"""Partition a triangle-sparse graph into classes that induce triangle-free
subgraphs of small maximum degree.

The pipeline: color vertices uniformly at random with ``ell`` classes, drive
the three per-vertex bad events to zero by resampling (lowest-indexed violated
event first), then repair each class with a per-vertex kill set so that every
left-neighborhood inside a class becomes edgeless, and split classes along the
resulting conflict graph, which is low-degenerate in the left-sparse order.

Event thresholds live in :class:`PartitionParams`; with the default formulas
the A-event threshold ``part_degree_bound`` equals 2 * delta / ell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph_core import Graph, VertexSet, induced, triangle_count
from .turan_order import VertexOrdering

__all__ = [
    "PartitionParams",
    "Partition",
    "ClassCertificate",
    "BadEvent",
    "ResampleBudgetError",
    "CertificationError",
    "default_params",
    "classify_left_bad",
    "find_bad_events",
    "moser_tardos_partition",
    "cleanup_to_triangle_free",
    "verify_partition",
    "PartitionReport",
]


class ResampleBudgetError(RuntimeError):
    """Resampling did not reach a zero-bad-event coloring within the budget."""

    def __init__(self, resamples: int):
        super().__init__(f"resample budget exhausted after {resamples} resamples")
        self.resamples = resamples


class CertificationError(RuntimeError):
    """A final class failed its exact certificate; indicates a bug, not bad input."""


@dataclass(frozen=True)
class PartitionParams:
    """Thresholds for the random-partition machinery.

    ``ell``: number of random classes.  ``bad_threshold``: a left-neighbor u
    of v counts as bad when |N(u) ∩ N_L(v)| reaches it.  ``part_degree_bound``:
    the A-event fires when more than this many neighbors of v share v's class.
    ``kappa_bad``/``mu``: B- and C-event thresholds.
    """

    ell: int
    kappa_bad: int
    mu: int
    bad_threshold: int
    part_degree_bound: int
    max_resamples: int = 100_000

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if self.part_degree_bound < 1:
            raise ValueError("part_degree_bound must be >= 1")
        if min(self.kappa_bad, self.mu, self.bad_threshold, self.max_resamples) < 0:
            raise ValueError("thresholds must be nonnegative")


@dataclass(frozen=True)
class ClassCertificate:
    size: int
    triangle_count: int
    max_degree: int


@dataclass(frozen=True)
class Partition:
    """Dense class labels with recomputable per-class certificates."""

    class_of: np.ndarray
    k: int
    certificates: tuple[ClassCertificate, ...]


@dataclass(frozen=True)
class BadEvent:
    """A violated event: kind 'A', 'B' or 'C', the vertex, and a witness.

    The witness lists same-class neighbors (A), bad same-class left-neighbors
    (B), or the edges spanned by good same-class left-neighbors (C), and can
    be rechecked against the coloring.
    """

    kind: str
    vertex: int
    witness: tuple


def _floor_root(x: int, r: int) -> int:
    """Largest integer y with y**r <= x, by integer Newton iteration."""
    if x < 0 or r < 1:
        raise ValueError("need x >= 0 and r >= 1")
    if x == 0 or r == 1:
        return x
    y = 1 << -(-x.bit_length() // r)  # upper estimate
    while True:
        y_next = ((r - 1) * y + x // y ** (r - 1)) // r
        if y_next >= y:
            break
        y = y_next
    return y


def _ceil_power(base: int, num: int, den: int) -> int:
    """ceil(base ** (num/den)) in exact integer arithmetic."""
    power = base ** num
    root = _floor_root(power, den)
    return root if root ** den == power else root + 1


def default_params(delta: int, t: int) -> PartitionParams:
    """Threshold defaults as functions of the maximum degree and t.

    ell = ceil(delta^(1 - 1/(10 t^2))), bad_threshold = ceil(delta^(1 - 1/(2 t^2))),
    part_degree_bound = 2 * ceil(delta^(1/(10 t^2))), kappa_bad = 35 t^2,
    mu = 100 t^4, all clamped to at least 1.  Exponentials are evaluated in
    exact integer arithmetic so boundary cases (powers of two, delta = 1) do
    not drift through floating point.
    """
    if delta < 1 or t < 1:
        raise ValueError("delta and t must be >= 1")
    ts = 10 * t * t
    half = 2 * t * t
    return PartitionParams(
        ell=max(1, _ceil_power(delta, ts - 1, ts)),
        kappa_bad=35 * t * t,
        mu=100 * t ** 4,
        bad_threshold=max(1, _ceil_power(delta, half - 1, half)),
        part_degree_bound=max(1, 2 * _ceil_power(delta, 1, ts)),
    )


def _left_neighbors(g: Graph, pos: np.ndarray, v: int) -> np.ndarray:
    nbrs = g.neighbors(v)
    return nbrs[pos[nbrs] < pos[v]]


def classify_left_bad(g: Graph, o: VertexOrdering, v: int, threshold: int) -> VertexSet:
    """Left-neighbors u of v whose neighborhood meets N_L(v) at least ``threshold`` times."""
    pos = o.positions()
    left = _left_neighbors(g, pos, v)
    bad = [int(u) for u in left.tolist() if _count_in(g.neighbors(u), left) >= threshold]
    return VertexSet.from_indices(g.n, bad)


def _count_in(sorted_a: np.ndarray, sorted_b: np.ndarray) -> int:
    if sorted_a.shape[0] > sorted_b.shape[0]:
        sorted_a, sorted_b = sorted_b, sorted_a
    if sorted_a.shape[0] == 0:
        return 0
    idx = np.searchsorted(sorted_b, sorted_a)
    ok = idx < sorted_b.shape[0]
    return int((sorted_b[idx[ok]] == sorted_a[ok]).sum())


def _vertex_events(
    g: Graph,
    pos: np.ndarray,
    coloring: np.ndarray,
    params: PartitionParams,
    v: int,
    first_only: bool = False,
) -> list[BadEvent]:
    """Evaluate the A/B/C events at v, in that order."""
    events: list[BadEvent] = []
    nbrs = g.neighbors(v)
    same = nbrs[coloring[nbrs] == coloring[v]]
    if same.shape[0] > params.part_degree_bound:
        events.append(BadEvent("A", v, tuple(int(u) for u in same)))
        if first_only:
            return events
    left_same = same[pos[same] < pos[v]]
    left_all = nbrs[pos[nbrs] < pos[v]]
    bad_mask = np.array(
        [_count_in(g.neighbors(int(u)), left_all) >= params.bad_threshold for u in left_same],
        dtype=bool,
    )
    bad_same = left_same[bad_mask] if left_same.size else left_same
    if bad_same.shape[0] > params.kappa_bad:
        events.append(BadEvent("B", v, tuple(int(u) for u in bad_same)))
        if first_only:
            return events
    good_same = left_same[~bad_mask] if left_same.size else left_same
    spanned = _edges_within(g, good_same)
    if len(spanned) >= params.mu:
        events.append(BadEvent("C", v, tuple(spanned)))
    return events


def _edges_within(g: Graph, vertices: np.ndarray) -> list[tuple[int, int]]:
    vs = np.sort(vertices)
    out: list[tuple[int, int]] = []
    for u in vs.tolist():
        nbrs = g.neighbors(u)
        inside = nbrs[np.isin(nbrs, vs, assume_unique=True)]
        for w in inside[inside > u].tolist():
            out.append((u, w))
    return out


def find_bad_events(
    g: Graph, o: VertexOrdering, coloring: np.ndarray, params: PartitionParams
) -> list[BadEvent]:
    """All violated events, ordered by (vertex, A < B < C).

    A fires when more than ``part_degree_bound`` neighbors share v's class;
    B when more than ``kappa_bad`` bad left-neighbors do; C when the good
    same-class left-neighbors span at least ``mu`` edges.
    """
    coloring = np.asarray(coloring)
    if coloring.shape[0] != g.n:
        raise ValueError("coloring must assign every vertex")
    if coloring.size and (coloring.min() < 0 or coloring.max() >= params.ell):
        raise ValueError("class id out of range")
    pos = o.positions()
    events: list[BadEvent] = []
    for v in range(g.n):
        events.extend(_vertex_events(g, pos, coloring, params, v))
    return events


def _first_bad_event(
    g: Graph, pos: np.ndarray, coloring: np.ndarray, params: PartitionParams
) -> Optional[BadEvent]:
    for v in range(g.n):
        ev = _vertex_events(g, pos, coloring, params, v, first_only=True)
        if ev:
            return ev[0]
    return None


def moser_tardos_partition(
    g: Graph, o: VertexOrdering, params: PartitionParams, rng: np.random.Generator
) -> tuple[np.ndarray, int]:
    """Sample a uniform coloring and resample violated events until none remain.

    Each round resamples the colors of the event vertex and its neighborhood.
    Raises :class:`ResampleBudgetError` when ``params.max_resamples`` rounds
    do not suffice; the caller may retry with another seed or looser params.
    """
    pos = o.positions()
    coloring = rng.integers(0, params.ell, size=g.n, dtype=np.int64)
    resamples = 0
    while True:
        ev = _first_bad_event(g, pos, coloring, params)
        if ev is None:
            return coloring, resamples
        if resamples >= params.max_resamples:
            raise ResampleBudgetError(resamples)
        v = ev.vertex
        scope = np.concatenate([[v], g.neighbors(v)])
        coloring[scope] = rng.integers(0, params.ell, size=scope.shape[0], dtype=np.int64)
        resamples += 1


def cleanup_to_triangle_free(
    g: Graph, o: VertexOrdering, coloring: np.ndarray, params: PartitionParams
) -> Partition:
    """Split each color class so the final classes induce triangle-free graphs.

    For every vertex v with class i, a kill set S(v, i) is built from v's
    same-class left-neighbors: all bad ones, plus a vertex cover of the edges
    among the good ones (greedy maximal matching endpoints first, then one
    endpoint of each still-uncovered edge).  The conflict graph joining v to
    S(v, i) has all its edges pointing left, so coloring it greedily along the
    ordering needs at most kappa_bad + mu + 1 subclasses per class; requires a
    coloring with zero bad events for those size bounds to hold.
    """
    coloring = np.asarray(coloring)
    pos = o.positions()
    n = g.n
    kill_sets: list[list[int]] = [[] for _ in range(n)]
    cap = params.kappa_bad + 2 * params.mu
    for v in range(n):
        nbrs = g.neighbors(v)
        left_same = nbrs[(pos[nbrs] < pos[v]) & (coloring[nbrs] == coloring[v])]
        if left_same.shape[0] == 0:
            continue
        left_all = nbrs[pos[nbrs] < pos[v]]
        s: set[int] = set()
        good: list[int] = []
        for u in left_same.tolist():
            if _count_in(g.neighbors(u), left_all) >= params.bad_threshold:
                s.add(u)
            else:
                good.append(u)
        good_edges = _edges_within(g, np.asarray(good, dtype=np.int64))
        matched: set[int] = set()
        for a, b in good_edges:  # greedy maximal matching, lower endpoint kept
            if a not in matched and b not in matched:
                matched.add(a)
                matched.add(b)
                s.add(a)
        for a, b in good_edges:  # cover anything the matching pass missed
            if a not in s and b not in s:
                s.add(a)
        if len(s) > cap:
            raise CertificationError(
                f"kill set at vertex {v} has {len(s)} members, cap {cap}"
            )
        kill_sets[v] = sorted(s)

    # greedy subclass coloring along the ordering; all conflict edges point left
    sub = np.zeros(n, dtype=np.int64)
    for v in o.order.tolist():
        used = {int(sub[u]) for u in kill_sets[v]}
        c = 0
        while c in used:
            c += 1
        if c > params.kappa_bad + params.mu:
            raise CertificationError(f"subclass index {c} exceeds degeneracy bound")
        sub[v] = c

    pair_ids = {}
    for i, j in sorted({(int(coloring[v]), int(sub[v])) for v in range(n)}):
        pair_ids[(i, j)] = len(pair_ids)
    class_of = np.array(
        [pair_ids[(int(coloring[v]), int(sub[v]))] for v in range(n)], dtype=np.int64
    )
    k = len(pair_ids)
    certs = []
    for c in range(k):
        members = VertexSet(class_of == c)
        part = induced(g, members).graph
        tri = triangle_count(part)
        maxdeg = int(part.degree_array().max()) if part.n else 0
        if tri != 0:
            raise CertificationError(f"class {c} contains {tri} triangles")
        if maxdeg > params.part_degree_bound:
            raise CertificationError(
                f"class {c} has max degree {maxdeg} > {params.part_degree_bound}"
            )
        certs.append(ClassCertificate(size=part.n, triangle_count=tri, max_degree=maxdeg))
    return Partition(class_of=class_of, k=k, certificates=tuple(certs))


@dataclass(frozen=True)
class PartitionReport:
    passed: bool
    k: int
    class_results: tuple[ClassCertificate, ...]
    failures: tuple[str, ...]


def verify_partition(g: Graph, p: Partition, degree_bound: Optional[int] = None) -> PartitionReport:
    """Exact recheck: class coverage, per-class triangle counts, degree bound."""
    class_of = np.asarray(p.class_of)
    if class_of.shape[0] != g.n:
        raise ValueError("partition does not cover the vertex set")
    if g.n and (class_of.min() < 0 or class_of.max() >= p.k):
        raise ValueError("class id out of range")
    failures: list[str] = []
    results: list[ClassCertificate] = []
    for c in range(p.k):
        members = VertexSet(class_of == c)
        part = induced(g, members).graph
        tri = triangle_count(part)
        maxdeg = int(part.degree_array().max()) if part.n else 0
        results.append(ClassCertificate(size=part.n, triangle_count=tri, max_degree=maxdeg))
        if tri != 0:
            failures.append(f"class {c}: {tri} triangles")
        if degree_bound is not None and maxdeg > degree_bound:
            failures.append(f"class {c}: max degree {maxdeg} > {degree_bound}")
    return PartitionReport(
        passed=not failures, k=p.k, class_results=tuple(results), failures=tuple(failures)
    )
