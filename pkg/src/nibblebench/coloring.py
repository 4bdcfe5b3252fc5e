"""Proper coloring through the triangle-free partition.

Pipeline: build the left-sparse ordering, randomly partition and repair until
every class induces a triangle-free graph of bounded degree, color each class
with a pluggable part-colorer, then combine with disjoint palettes (class 0
gets colors [0, p_0), class 1 the next p_1, and so on).  Each part-colorer is
elementary; the interface exists so a stronger triangle-free colorer can drop
in without touching the pipeline.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph_core import Graph, RelabeledSubgraph, VertexSet, induced
from .tf_partition import (
    ClassCertificate,
    Partition,
    PartitionParams,
    cleanup_to_triangle_free,
    default_params,
    moser_tardos_partition,
)
from .turan_order import VertexOrdering, left_sparse_ordering

__all__ = [
    "Coloring",
    "PartColorerChoice",
    "ColoringReport",
    "PipelineResult",
    "color_part",
    "color_pipeline",
    "color_kttt_free",
    "verify_coloring",
]

_STRATEGIES = ("greedy_degeneracy", "dsatur", "randomized_local")


@dataclass(frozen=True)
class Coloring:
    color_of: np.ndarray
    palette_size: int


@dataclass(frozen=True)
class PartColorerChoice:
    strategy: str = "greedy_degeneracy"

    def __post_init__(self):
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}, pick from {_STRATEGIES}")


def _mex(used: set[int]) -> int:
    c = 0
    while c in used:
        c += 1
    return c


def _color_along(g: Graph, order: np.ndarray) -> np.ndarray:
    colors = np.full(g.n, -1, dtype=np.int64)
    for v in order.tolist():
        nbr_colors = colors[g.neighbors(v)]
        colors[v] = _mex(set(int(c) for c in nbr_colors[nbr_colors >= 0].tolist()))
    return colors


def _degeneracy_order(g: Graph) -> np.ndarray:
    """Repeatedly extract a min-degree vertex (lowest id on ties)."""
    deg = g.degree_array().astype(np.int64)
    alive = np.ones(g.n, dtype=bool)
    heap = [(int(d), v) for v, d in enumerate(deg.tolist())]
    heapq.heapify(heap)
    order = np.empty(g.n, dtype=np.int64)
    for slot in range(g.n):
        while True:
            d, v = heapq.heappop(heap)
            if alive[v] and deg[v] == d:
                break
        order[slot] = v
        alive[v] = False
        for u in g.neighbors(v).tolist():
            if alive[u]:
                deg[u] -= 1
                heapq.heappush(heap, (int(deg[u]), u))
    return order


def _dsatur_colors(g: Graph) -> np.ndarray:
    colors = np.full(g.n, -1, dtype=np.int64)
    sat: list[set[int]] = [set() for _ in range(g.n)]
    deg = g.degree_array()
    for _ in range(g.n):
        best = -1
        best_key = None
        for v in range(g.n):
            if colors[v] >= 0:
                continue
            key = (len(sat[v]), int(deg[v]), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        c = _mex(sat[best])
        colors[best] = c
        for u in g.neighbors(best).tolist():
            sat[u].add(c)
    return colors


def color_part(part: RelabeledSubgraph, choice: PartColorerChoice,
               rng: Optional[np.random.Generator] = None) -> Coloring:
    """Proper coloring of one part, colors indexed by the part's local ids.

    All strategies assign the smallest free color along some order, so the
    palette never exceeds max degree + 1 and used color ids are dense.
    """
    g = part.graph
    if g.n == 0:
        return Coloring(color_of=np.empty(0, dtype=np.int64), palette_size=0)
    if choice.strategy == "greedy_degeneracy":
        colors = _color_along(g, _degeneracy_order(g)[::-1])
    elif choice.strategy == "dsatur":
        colors = _dsatur_colors(g)
    else:
        if rng is None:
            raise ValueError("randomized_local needs an rng")
        colors = _color_along(g, rng.permutation(g.n).astype(np.int64))
        for v in range(g.n):  # descent pass: recoloring to the mex never collides
            nbr = colors[g.neighbors(v)]
            colors[v] = _mex(set(int(c) for c in nbr.tolist()))
    return Coloring(color_of=colors, palette_size=int(colors.max()) + 1)


@dataclass(frozen=True)
class PipelineResult:
    coloring: Coloring
    ordering: VertexOrdering
    partition: Partition
    params: PartitionParams
    resamples: int
    max_part_degree: int


def color_pipeline(
    g: Graph,
    t: int,
    rng: np.random.Generator,
    params: Optional[PartitionParams] = None,
    choice: PartColorerChoice = PartColorerChoice(),
) -> PipelineResult:
    """Run the full partition-then-color pipeline and keep the intermediates.

    The edgeless case never needs the partition machinery and returns a
    single-color palette directly.
    """
    n = g.n
    if g.m == 0:
        coloring = Coloring(np.zeros(n, dtype=np.int64), 1 if n else 0)
        o = VertexOrdering(order=np.arange(n, dtype=np.int64),
                           left_tri=np.zeros(n, dtype=np.int64))
        certs = (ClassCertificate(size=n, triangle_count=0, max_degree=0),) if n else ()
        part = Partition(class_of=np.zeros(n, dtype=np.int64), k=1 if n else 0,
                         certificates=certs)
        pp = params if params is not None else PartitionParams(
            ell=1, kappa_bad=35 * t * t, mu=100 * t ** 4, bad_threshold=1,
            part_degree_bound=1)
        return PipelineResult(coloring, o, part, pp, resamples=0, max_part_degree=0)
    delta = int(g.degree_array().max())
    if params is None:
        params = default_params(delta, t)
    o = left_sparse_ordering(g)
    class_colors, resamples = moser_tardos_partition(g, o, params, rng)
    partition = cleanup_to_triangle_free(g, o, class_colors, params)

    color_of = np.full(n, -1, dtype=np.int64)
    offset = 0
    max_part_degree = 0
    for c in range(partition.k):
        sub = induced(g, VertexSet(partition.class_of == c))
        local = color_part(sub, choice, rng)
        color_of[sub.to_parent] = local.color_of + offset
        offset += local.palette_size
        if sub.graph.n:
            max_part_degree = max(max_part_degree, int(sub.graph.degree_array().max()))
    coloring = Coloring(color_of=color_of, palette_size=offset)
    report = verify_coloring(g, coloring)
    assert report.passed, report.monochromatic[:5]
    return PipelineResult(coloring, o, partition, params, resamples, max_part_degree)


def color_kttt_free(
    g: Graph,
    t: int,
    rng: np.random.Generator,
    params: Optional[PartitionParams] = None,
    choice: PartColorerChoice = PartColorerChoice(),
) -> Coloring:
    """Partition into triangle-free bounded-degree classes, color each class,
    and join the class palettes disjointly; properness is verified globally."""
    return color_pipeline(g, t, rng, params=params, choice=choice).coloring


@dataclass(frozen=True)
class ColoringReport:
    passed: bool
    monochromatic: tuple[tuple[int, int], ...]


def verify_coloring(g: Graph, c: Coloring) -> ColoringReport:
    """Full edge scan for monochromatic edges."""
    color_of = np.asarray(c.color_of)
    if color_of.shape[0] != g.n:
        raise ValueError("coloring must cover every vertex")
    edges = g.edge_array()
    if edges.shape[0] == 0:
        return ColoringReport(passed=True, monochromatic=())
    bad = edges[color_of[edges[:, 0]] == color_of[edges[:, 1]]]
    mono = tuple((int(u), int(v)) for u, v in bad.tolist())
    return ColoringReport(passed=not mono, monochromatic=mono)
