"""Immutable graph representation plus the exact counting and search kernels.

The graph lives in compressed sparse row form (``indptr``/``indices``) with
every neighbor list strictly increasing.  All algorithms in the package treat
a :class:`Graph` as read-only; "removing" vertices means building an induced
subgraph with :func:`induced`.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import _kernels

__all__ = [
    "EdgeListError",
    "Graph",
    "VertexSet",
    "RelabeledSubgraph",
    "from_edge_list",
    "degrees",
    "induced",
    "common_neighbor_count",
    "triangle_count",
    "triangles_through",
    "is_independent",
    "greedy_independent_set",
    "exact_mis",
    "contains_kttt",
]


class EdgeListError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Graph:
    """Undirected simple graph with sorted adjacency, immutable after construction.

    Invariants: neighbor sequences strictly increase (no loops, no duplicate
    edges), adjacency is symmetric, and ``m`` counts each undirected edge once.
    """

    __slots__ = ("indptr", "indices", "n", "m")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        self.indptr = indptr
        self.indices = indices
        self.n = int(indptr.shape[0] - 1)
        self.m = int(indices.shape[0] // 2)
        indptr.setflags(write=False)
        indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs.

        Pairs may come in either orientation but must not contain loops or
        repeats; violations raise ValueError.
        """
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls._from_pair_array(n, pairs)

    @classmethod
    def _from_pair_array(cls, n: int, pairs: np.ndarray) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("vertex id out of range")
        if pairs.size and (pairs[:, 0] == pairs[:, 1]).any():
            raise ValueError("self-loop")
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        key = lo * n + hi
        if key.size != np.unique(key).size:
            raise ValueError("duplicate edge")
        return cls._from_canonical_pairs(n, lo, hi)

    @classmethod
    def _from_canonical_pairs(cls, n: int, lo: np.ndarray, hi: np.ndarray) -> "Graph":
        """CSR construction from deduplicated pairs with lo < hi."""
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst.astype(np.int64, copy=False))

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degree_array(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < nbrs.shape[0] and nbrs[i] == v)

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, sorted lexicographically."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree_array())
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class VertexSet:
    """Subset of [n] stored as a dense boolean mask with a cached cardinality."""

    __slots__ = ("mask", "_card")

    def __init__(self, mask: np.ndarray):
        self.mask = mask.astype(bool, copy=False)
        self._card = int(self.mask.sum())

    @classmethod
    def from_indices(cls, n: int, ids: Iterable[int]) -> "VertexSet":
        mask = np.zeros(n, dtype=bool)
        ids = np.asarray(list(ids), dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise ValueError("vertex id out of range")
        mask[ids] = True
        return cls(mask)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(np.zeros(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(np.ones(n, dtype=bool))

    @property
    def n(self) -> int:
        return int(self.mask.shape[0])

    @property
    def cardinality(self) -> int:
        return self._card

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self) -> int:
        return self._card

    def __contains__(self, v: int) -> bool:
        return bool(self.mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices().tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.mask.shape == other.mask.shape and bool((self.mask == other.mask).all())

    def __repr__(self) -> str:
        return f"VertexSet(card={self._card} of {self.n})"


@dataclass(frozen=True)
class RelabeledSubgraph:
    """An induced subgraph together with the map from new ids back to parent ids."""

    graph: Graph
    to_parent: np.ndarray

    def parent_ids(self, ids: Iterable[int]) -> np.ndarray:
        return self.to_parent[np.asarray(list(ids), dtype=np.int64)]


def from_edge_list(text: Union[str, bytes, io.IOBase]) -> Graph:
    """Parse the interchange edge-list format: header ``n m`` then m lines ``u v``.

    Errors (bad token, id out of range, self-loop, duplicate edge, wrong edge
    count) raise :class:`EdgeListError` with the offending line number.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    elif hasattr(text, "read"):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")
    lines = text.splitlines()
    if not lines:
        raise EdgeListError("missing header", 1)

    def parse_pair(raw: str, lineno: int) -> tuple[int, int]:
        parts = raw.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected two integers, got {raw!r}", lineno)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"expected two integers, got {raw!r}", lineno) from None

    n, m = parse_pair(lines[0], 1)
    if n < 0 or m < 0:
        raise EdgeListError("negative header value", 1)
    seen: set[tuple[int, int]] = set()
    lo = np.empty(m, dtype=np.int64)
    hi = np.empty(m, dtype=np.int64)
    count = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        u, v = parse_pair(raw, lineno)
        if count >= m:
            raise EdgeListError(f"more than {m} edges", lineno)
        if not (0 <= u < n) or not (0 <= v < n):
            raise EdgeListError(f"vertex id out of range in {raw!r}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno)
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise EdgeListError(f"duplicate edge {e[0]} {e[1]}", lineno)
        seen.add(e)
        lo[count] = e[0]
        hi[count] = e[1]
        count += 1
    if count != m:
        raise EdgeListError(f"expected {m} edges, found {count}", len(lines) + 1)
    return Graph._from_canonical_pairs(n, lo, hi)


def write_edge_list(g: Graph, fp) -> None:
    """Serialize in the same format ``from_edge_list`` reads."""
    fp.write(f"{g.n} {g.m}\n")
    for u, v in g.edge_array():
        fp.write(f"{u} {v}\n")


def degrees(g: Graph) -> tuple[int, Fraction]:
    """Return (maximum degree, average degree); the average is exact."""
    if g.n == 0:
        return 0, Fraction(0)
    return int(g.degree_array().max(initial=0)), Fraction(2 * g.m, g.n)


def induced(g: Graph, s: VertexSet) -> RelabeledSubgraph:
    """Induced subgraph on ``s``, relabeled to 0..|s|-1 preserving id order."""
    mask = s.mask
    keep = mask[np.repeat(np.arange(g.n, dtype=np.int64), g.degree_array())]
    keep &= mask[g.indices]
    new_id = np.cumsum(mask, dtype=np.int64) - 1
    sub_n = int(mask.sum())
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degree_array())[keep]
    cols = g.indices[keep]
    indptr = np.zeros(sub_n + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_id[rows], minlength=sub_n), out=indptr[1:])
    # monotone relabeling keeps each row sorted
    sub = Graph(indptr, new_id[cols])
    return RelabeledSubgraph(sub, np.flatnonzero(mask).astype(np.int64))


def _sorted_intersect_count(a: np.ndarray, b: np.ndarray) -> int:
    """|a ∩ b| for strictly increasing arrays."""
    if a.shape[0] > b.shape[0]:
        a, b = b, a
    if a.shape[0] == 0:
        return 0
    pos = np.searchsorted(b, a)
    inside = pos < b.shape[0]
    return int((b[pos[inside]] == a[inside]).sum())


def common_neighbor_count(g: Graph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)| by sorted merge; symmetric in u and v."""
    if u == v:
        raise ValueError("endpoints must differ")
    return _sorted_intersect_count(g.neighbors(u), g.neighbors(v))


def _forward_lists(g: Graph) -> list[np.ndarray]:
    """Orient each edge toward the higher (degree, id) endpoint.

    Every triangle then has exactly one source vertex with two outgoing edges,
    so intersecting forward lists visits it once.
    """
    deg = g.degree_array()
    rank = np.empty(g.n, dtype=np.int64)
    rank[np.lexsort((np.arange(g.n), deg))] = np.arange(g.n)
    out: list[np.ndarray] = []
    for v in range(g.n):
        nbrs = g.neighbors(v)
        out.append(nbrs[rank[nbrs] > rank[v]])
    return out


def triangle_count(g: Graph) -> int:
    """Exact number of triangles via degree-ordered forward enumeration."""
    fwd = _forward_lists(g)
    total = 0
    for v in range(g.n):
        fv = fwd[v]
        if fv.shape[0] < 1:
            continue
        for u in fv.tolist():
            total += _sorted_intersect_count(fv, fwd[u])
    return total


def triangles_through(g: Graph, v: int) -> int:
    """Number of triangles containing ``v``: half the edge endpoints inside N(v)."""
    nbrs = g.neighbors(v)
    if nbrs.shape[0] < 2:
        return 0
    hits = 0
    for u in nbrs.tolist():
        hits += _sorted_intersect_count(g.neighbors(u), nbrs)
    return hits // 2


def is_independent(g: Graph, s: VertexSet) -> bool:
    """True iff no edge of g has both endpoints in s."""
    mask = s.mask
    for v in s.indices().tolist():
        if mask[g.neighbors(v)].any():
            return False
    return True


def greedy_independent_set(g: Graph) -> VertexSet:
    """Repeatedly take a minimum-degree vertex of the residual graph and delete
    its closed neighborhood (ties to the lowest id).  Size is at least n/(d+1).
    """
    if g.n == 0:
        return VertexSet.empty(0)
    chosen = _kernels.greedy_mis_csr(g.indptr, g.indices)
    return VertexSet(chosen.astype(bool))


class InstanceTooLarge(ValueError):
    pass


def exact_mis(g: Graph, node_cap: int = 40) -> VertexSet:
    """Maximum independent set by branch and bound on bitmask adjacency.

    Branches on a residual max-degree vertex (exclude, or include and delete
    its closed neighborhood); vertices of residual degree <= 1 are taken
    outright, which is always safe.  Deterministic: all ties go to the lowest
    id.  Refuses instances with more than ``node_cap`` vertices.
    """
    n = g.n
    if n > node_cap:
        raise InstanceTooLarge(f"instance-too-large: n={n} exceeds node_cap={node_cap}")
    if n == 0:
        return VertexSet.empty(0)
    adj = [0] * n
    for v in range(n):
        for u in g.neighbors(v).tolist():
            adj[v] |= 1 << u
    full = (1 << n) - 1

    best_mask = 0
    best_size = 0

    def search(pool: int, cur_mask: int, cur_size: int) -> None:
        nonlocal best_mask, best_size
        # pick off vertices with residual degree <= 1; taking them never hurts
        while pool:
            p = pool
            picked = False
            while p:
                v_bit = p & (-p)
                p ^= v_bit
                v = v_bit.bit_length() - 1
                dv = bin(adj[v] & pool).count("1")
                if dv <= 1:
                    cur_mask |= v_bit
                    cur_size += 1
                    pool &= ~(v_bit | adj[v])
                    picked = True
                    break
            if not picked:
                break
        cnt = bin(pool).count("1")
        if cur_size + cnt <= best_size:
            return
        if pool == 0:
            if cur_size > best_size:
                best_size = cur_size
                best_mask = cur_mask
            return
        # branch vertex: maximum residual degree, lowest id among ties
        bv = -1
        bd = -1
        p = pool
        while p:
            v_bit = p & (-p)
            p ^= v_bit
            v = v_bit.bit_length() - 1
            dv = bin(adj[v] & pool).count("1")
            if dv > bd:
                bd = dv
                bv = v
        v_bit = 1 << bv
        search(pool & ~(v_bit | adj[bv]), cur_mask | v_bit, cur_size + 1)
        search(pool & ~v_bit, cur_mask, cur_size)

    search(full, 0, 0)
    ids = [v for v in range(n) if best_mask >> v & 1]
    result = VertexSet.from_indices(n, ids)
    assert is_independent(g, result)
    return result


def contains_kttt(g: Graph, t: int, budget: int = 100_000) -> Optional[bool]:
    """Search for three pairwise completely-joined disjoint t-sets.

    The copy need not be induced: edges inside a part are allowed and parts
    need not be independent sets.  Returns True/False, or None when the
    node-expansion budget runs out (indeterminate, caller treats as
    unverified).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    n = g.n
    if n < 3 * t:
        return False
    adj = [0] * n
    for v in range(n):
        for u in g.neighbors(v).tolist():
            adj[v] |= 1 << u
    return _kttt_search(adj, n, t, budget)


def _kttt_search(adj: list[int], n: int, t: int, budget: int) -> Optional[bool]:
    """Backtracking core for :func:`contains_kttt`.

    Parts are built with increasing vertex ids and the three part minima are
    kept increasing, which enumerates each copy in exactly one canonical
    labeling.  Members of one part never constrain each other; only vertices
    of later parts must lie in the running common neighborhood.
    """
    counter = [budget]

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def extend_part(cand: int, size: int, common: int, taken: int, part: int, part_min: int) -> Optional[bool]:
        """Add the remaining ``t - size`` vertices of the current part.

        ``cand`` was fixed when the part started (minus lower bits), so the
        part's own members stay unconstrained by each other.
        """
        if counter[0] <= 0:
            return None
        counter[0] -= 1
        if size == t:
            if part == 2:
                return True
            return start_part(common, taken, part + 1, part_min)
        if popcount(cand) < t - size:
            return False
        p = cand
        while p:
            v_bit = p & (-p)
            p ^= v_bit
            new_common = common & adj[v_bit.bit_length() - 1]
            # later parts need this many vertices out of the common pool
            if popcount(new_common & ~(taken | v_bit)) < (2 - part) * t:
                continue
            res = extend_part(p, size + 1, new_common, taken | v_bit, part, part_min)
            if res is not False:
                return res
        return False

    def start_part(common: int, taken: int, part: int, prev_min: int) -> Optional[bool]:
        """Open part ``part`` by choosing its minimum above ``prev_min``."""
        if counter[0] <= 0:
            return None
        counter[0] -= 1
        cand = (common & ~taken) >> (prev_min + 1) << (prev_min + 1)
        p = cand
        while p:
            v_bit = p & (-p)
            p ^= v_bit
            v = v_bit.bit_length() - 1
            new_common = common & adj[v]
            if popcount(new_common & ~(taken | v_bit)) < (2 - part) * t:
                continue
            res = extend_part(p, 1, new_common, taken | v_bit, part, v)
            if res is not False:
                return res
        return False

    for v in range(n):
        if counter[0] <= 0:
            return None
        counter[0] -= 1
        if popcount(adj[v]) < 2 * t:
            continue
        rest = ((1 << n) - 1) >> (v + 1) << (v + 1)
        res = extend_part(rest, 1, adj[v], 1 << v, 0, v)
        if res is not False:
            return res
    return False
