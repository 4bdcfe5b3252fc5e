"""Seeded instance generators for tests and benchmarks.

Every generator is a pure function of its parameters and a seed.  Randomness
comes from counter-based Philox streams keyed by (seed, family tag), so
concurrent generation is schedule-independent and byte-reproducible.

Sparse G(n, p) instances are sampled by geometric gap-skipping over the pair
codes, which realizes the per-pair independent Bernoulli model exactly
without touching all ~n^2/2 pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph_core import Graph, _sorted_intersect_count

__all__ = [
    "GenSpec",
    "GenerationError",
    "stream",
    "gnp",
    "random_regular",
    "bipartite",
    "blowup",
    "triangle_scrubbed_gnp",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "parse_genspec",
    "generate",
    "FAMILIES",
]

_FAMILY_TAGS = {
    "gnp": 1,
    "random_regular": 2,
    "bipartite": 3,
    "blowup_k3": 4,
    "blowup_c5": 5,
    "triangle_scrubbed_gnp": 6,
}
FAMILIES = tuple(_FAMILY_TAGS)

# tags for consumers outside this module; one fixed stream per algorithm
# keeps runs independent of scheduling and of each other
TAG_NIBBLE = 101
TAG_PARTITION = 102
TAG_COLOR = 103


class GenerationError(RuntimeError):
    """A generator exhausted its retry budget."""


def stream(seed: int, tag: int) -> np.random.Generator:
    """Philox stream keyed by (seed, tag); same key, same draws, any schedule."""
    key = np.array([seed % 2 ** 64, tag % 2 ** 64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _decode_triangular(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pair code c -> (u, v) with u < v and c = v(v-1)/2 + u."""
    c = codes.astype(np.int64)
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * c.astype(np.float64))) / 2.0).astype(np.int64)
    v = np.where(v * (v - 1) // 2 > c, v - 1, v)
    v = np.where((v + 1) * v // 2 <= c, v + 1, v)
    u = c - v * (v - 1) // 2
    assert (u >= 0).all() and (u < v).all()
    return u, v


def _bernoulli_codes(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Sorted codes of an exact Bernoulli(p) subset of range(total)."""
    if total == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if total <= 1 << 22:
        return np.flatnonzero(rng.random(total) < p).astype(np.int64)
    chunks: list[np.ndarray] = []
    last = -1
    while last < total:
        expect = max(1024, int((total - last) * p * 1.1) + 64)
        gaps = rng.geometric(p, size=expect).astype(np.int64)
        new = last + np.cumsum(gaps)
        chunks.append(new)
        last = int(new[-1])
    codes = np.concatenate(chunks)
    return codes[codes < total]


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p): every unordered pair is an edge independently."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and p in [0, 1]")
    rng = stream(seed, _FAMILY_TAGS["gnp"])
    total = n * (n - 1) // 2
    if p >= 1.0:
        u, v = _decode_triangular(np.arange(total, dtype=np.int64))
        return Graph._from_canonical_pairs(n, u, v)
    codes = _bernoulli_codes(rng, total, p)
    u, v = _decode_triangular(codes)
    return Graph._from_canonical_pairs(n, u, v)


def bipartite(n: int, p: float, seed: int) -> Graph:
    """Random bipartite graph on halves [0, n//2) and [n//2, n), cross pairs
    independently at rate p; triangle-free by construction."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and p in [0, 1]")
    rng = stream(seed, _FAMILY_TAGS["bipartite"])
    n1 = n // 2
    n2 = n - n1
    total = n1 * n2
    if p >= 1.0:
        codes = np.arange(total, dtype=np.int64)
    else:
        codes = _bernoulli_codes(rng, total, p)
    u = codes // n2
    v = n1 + codes % n2
    return Graph._from_canonical_pairs(n, u, v)


def _try_pairing(rng: np.random.Generator, n: int, d: int) -> Optional[set[tuple[int, int]]]:
    """One configuration-model pairing attempt: repeatedly shuffle the unpaired
    stubs and keep conflict-free pairs; None when the leftover stubs can no
    longer form any new edge and the whole pairing must restart."""
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    edges: set[tuple[int, int]] = set()
    while stubs.size:
        rng.shuffle(stubs)
        leftover: list[int] = []
        progress = False
        for u, v in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            key = (u, v) if u < v else (v, u)
            if u == v or key in edges:
                leftover.append(u)
                leftover.append(v)
            else:
                edges.add(key)
                progress = True
        if not progress:
            distinct = sorted(set(leftover))
            feasible = any(
                (a, b) not in edges
                for i, a in enumerate(distinct)
                for b in distinct[i + 1:]
            )
            if not feasible:
                return None
        stubs = np.asarray(leftover, dtype=np.int64)
    return edges


def random_regular(n: int, d: int, seed: int, max_restarts: int = 500) -> Graph:
    """Exactly d-regular simple graph via stub pairing with conflict retries."""
    if d < 0 or (d > 0 and d >= n):
        raise ValueError("need 0 <= d < n")
    if (n * d) % 2 != 0:
        raise ValueError("n*d must be even")
    if d == 0:
        return Graph.from_edges(n, [])
    rng = stream(seed, _FAMILY_TAGS["random_regular"])
    for _ in range(max_restarts):
        edges = _try_pairing(rng, n, d)
        if edges is not None:
            pairs = np.array(sorted(edges), dtype=np.int64)
            return Graph._from_canonical_pairs(n, pairs[:, 0], pairs[:, 1])
    raise GenerationError(f"no simple {d}-regular pairing found in {max_restarts} restarts")


def blowup(base: Graph, blob: int) -> Graph:
    """Replace each vertex by an independent blob of the given size; blobs of
    adjacent base vertices are completely joined.  Vertex (b, i) gets id
    b * blob + i."""
    if blob < 1:
        raise ValueError("blob size must be >= 1")
    e = base.edge_array()
    k = blob * blob
    i_of = np.tile(np.repeat(np.arange(blob, dtype=np.int64), blob), e.shape[0])
    j_of = np.tile(np.tile(np.arange(blob, dtype=np.int64), blob), e.shape[0])
    u = np.repeat(e[:, 0], k) * blob + i_of
    v = np.repeat(e[:, 1], k) * blob + j_of
    return Graph._from_canonical_pairs(base.n * blob, u, v)


def triangle_scrubbed_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with one edge deleted per triangle (the lexicographically
    smallest edge of each) until none remain; triangle-free by construction."""
    g = gnp(n, p, seed)
    while True:
        edges = g.edge_array()
        doomed = np.zeros(edges.shape[0], dtype=bool)
        for idx in range(edges.shape[0]):
            u, v = int(edges[idx, 0]), int(edges[idx, 1])
            nu = g.neighbors(u)
            nv = g.neighbors(v)
            nu_hi = nu[np.searchsorted(nu, v + 1):]
            nv_hi = nv[np.searchsorted(nv, v + 1):]
            if _sorted_intersect_count(nu_hi, nv_hi) > 0:
                doomed[idx] = True
        if not doomed.any():
            return g
        keep = edges[~doomed]
        g = Graph._from_canonical_pairs(g.n, keep[:, 0], keep[:, 1])


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycles need >= 3 vertices")
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def _disjoint_triangles(copies: int) -> Graph:
    edges = []
    for c in range(copies):
        b = 3 * c
        edges += [(b, b + 1), (b, b + 2), (b + 1, b + 2)]
    return Graph.from_edges(3 * copies, edges)


def _disjoint_c5s(copies: int) -> Graph:
    edges = []
    for c in range(copies):
        b = 5 * c
        edges += [(b + i, b + (i + 1) % 5) for i in range(5)]
    return Graph.from_edges(5 * copies, edges)


@dataclass(frozen=True)
class GenSpec:
    """A parsed generator request: family name, its parameters, and a seed."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def label(self) -> str:
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.family}:{inner}" if inner else self.family


_INT_KEYS = {"n", "d", "s", "copies", "scale"}
_FLOAT_KEYS = {"p"}

# required and optional parameter keys per family
_FAMILY_KEYS = {
    "gnp": (("n", "p"), ()),
    "random_regular": (("n", "d"), ()),
    "bipartite": (("n", "p"), ()),
    "triangle_scrubbed_gnp": (("n", "p"), ()),
    "blowup_k3": (("s",), ("copies",)),
    "blowup_c5": (("s",), ("copies",)),
}


def parse_genspec(text: str, seed: int = 0) -> GenSpec:
    """Parse the compact form "family:key=value,...", e.g. "gnp:n=1000,p=0.03".

    Integer keys: n, d, s, copies (alias: scale).  Float key: p.
    """
    family, _, rest = text.partition(":")
    family = family.strip()
    if family not in _FAMILY_TAGS:
        raise ValueError(f"unknown family {family!r}, pick from {FAMILIES}")
    params: dict = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep:
                raise ValueError(f"malformed parameter {item!r} (expected key=value)")
            if key in _INT_KEYS:
                params["copies" if key == "scale" else key] = int(value)
            elif key in _FLOAT_KEYS:
                params[key] = float(value)
            else:
                raise ValueError(f"unknown parameter {key!r} for family {family!r}")
    spec = GenSpec(family=family, params=params, seed=seed)
    _require(spec)
    return spec


def _require(spec: GenSpec) -> list:
    """Check the spec's keys against its family table; return required values in order."""
    if spec.family not in _FAMILY_KEYS:
        raise ValueError(f"unknown family {spec.family!r}, pick from {FAMILIES}")
    required, optional = _FAMILY_KEYS[spec.family]
    missing = [k for k in required if k not in spec.params]
    if missing:
        raise ValueError(f"family {spec.family!r} needs parameters {missing}")
    extra = set(spec.params) - set(required) - set(optional)
    if extra:
        raise ValueError(f"family {spec.family!r} got unknown parameters {sorted(extra)}")
    return [spec.params[k] for k in required]


def generate(spec: GenSpec) -> Graph:
    """Dispatch a GenSpec to its generator."""
    if spec.family == "gnp":
        n, p = _require(spec)
        return gnp(n, p, spec.seed)
    if spec.family == "random_regular":
        n, d = _require(spec)
        return random_regular(n, d, spec.seed)
    if spec.family == "bipartite":
        n, p = _require(spec)
        return bipartite(n, p, spec.seed)
    if spec.family == "triangle_scrubbed_gnp":
        n, p = _require(spec)
        return triangle_scrubbed_gnp(n, p, spec.seed)
    if spec.family == "blowup_k3":
        (s,) = _require(spec)
        return blowup(_disjoint_triangles(spec.params.get("copies", 1)), s)
    if spec.family == "blowup_c5":
        (s,) = _require(spec)
        return blowup(_disjoint_c5s(spec.params.get("copies", 1)), s)
    raise ValueError(f"unknown family {spec.family!r}")
