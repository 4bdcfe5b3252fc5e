"""Independent reference implementations used to pin down expected values.

Everything here is written for obviousness, not speed: all-triples scans,
full subset enumeration, exact rational arithmetic.  The real modules are
tested against these, never the other way around.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from nibblebench import Graph


def adjacency_sets(g: Graph) -> list[set[int]]:
    return [set(g.neighbors(v).tolist()) for v in range(g.n)]


def tri_count_all_triples(g: Graph) -> int:
    """O(n^3) scan over all vertex triples."""
    adj = adjacency_sets(g)
    count = 0
    for i, j, k in combinations(range(g.n), 3):
        if j in adj[i] and k in adj[i] and k in adj[j]:
            count += 1
    return count


def triangles_through_oracle(g: Graph, v: int) -> int:
    adj = adjacency_sets(g)
    nbrs = sorted(adj[v])
    return sum(1 for a, b in combinations(nbrs, 2) if b in adj[a])


def codegree_oracle(g: Graph) -> dict[tuple[int, int], int]:
    adj = adjacency_sets(g)
    out = {}
    for u, v in g.edge_array().tolist():
        out[(u, v)] = len(adj[u] & adj[v])
    return out


def mis_size_subset(g: Graph) -> int:
    """Largest independent set size by checking every one of the 2^n subsets."""
    n = g.n
    if n == 0:
        return 0
    assert n <= 20, "subset oracle is exponential"
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in g.edge_array().tolist():
        ok &= ((masks >> u) & (masks >> v) & 1) == 0
    return int(np.bitwise_count(masks[ok]).max())


def left_tri_oracle(g: Graph, order: np.ndarray) -> np.ndarray:
    """For each vertex, triangles in which it is the rightmost corner."""
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    adj = adjacency_sets(g)
    out = np.zeros(g.n, dtype=np.int64)
    for i, j, k in combinations(range(g.n), 3):
        if j in adj[i] and k in adj[i] and k in adj[j]:
            rightmost = max((i, j, k), key=lambda v: pos[v])
            out[rightmost] += 1
    return out


def all_graphs_up_to(n: int):
    """Every labeled graph on exactly n vertices."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        yield Graph.from_edges(n, edges)


def iset_step_expectations(g: Graph, p: Fraction) -> tuple[Fraction, Fraction]:
    """Exact (E[|K|], E[e(residual)]) by enumerating every activation pattern
    and every equalizing-flip outcome, all in rational arithmetic."""
    n = g.n
    adj = adjacency_sets(g)
    deg = [len(a) for a in adj]
    delta = max(deg) if n else 0
    q = 1 - p
    eq_p = [q ** (delta - deg[v]) for v in range(n)]
    edges = [tuple(e) for e in g.edge_array().tolist()]
    exp_k = Fraction(0)
    exp_e = Fraction(0)
    for a_bits in range(1 << n):
        pr_a = Fraction(1)
        for v in range(n):
            pr_a *= p if a_bits >> v & 1 else q
        blocked = [
            a_bits >> v & 1 or any(a_bits >> u & 1 for u in adj[v]) for v in range(n)
        ]
        for eq_bits in range(1 << n):
            pr_eq = Fraction(1)
            for v in range(n):
                pr_eq *= eq_p[v] if eq_bits >> v & 1 else 1 - eq_p[v]
            if pr_eq == 0:
                continue
            pr = pr_a * pr_eq
            in_k = [bool(eq_bits >> v & 1) and not blocked[v] for v in range(n)]
            exp_k += pr * sum(in_k)
            exp_e += pr * sum(1 for u, v in edges if in_k[u] and in_k[v])
    return exp_k, exp_e


def bad_events_oracle(g: Graph, order: np.ndarray, coloring: np.ndarray, params):
    """Quadratic recheck of the three per-vertex event conditions.

    Returns a list of (kind, vertex) sorted the same way the module reports
    them: by vertex, then A before B before C.
    """
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    adj = adjacency_sets(g)
    found = []
    for v in range(g.n):
        same = [u for u in adj[v] if coloring[u] == coloring[v]]
        if len(same) > params.part_degree_bound:
            found.append(("A", v))
        left_all = {u for u in adj[v] if pos[u] < pos[v]}
        left_same = [u for u in same if pos[u] < pos[v]]
        bad = [u for u in left_same if len(adj[u] & left_all) >= params.bad_threshold]
        if len(bad) > params.kappa_bad:
            found.append(("B", v))
        good = [u for u in left_same if u not in set(bad)]
        spanned = sum(1 for a, b in combinations(sorted(good), 2) if b in adj[a])
        if spanned >= params.mu:
            found.append(("C", v))
    return found


def proper_coloring_oracle(g: Graph, colors: np.ndarray) -> bool:
    return all(colors[u] != colors[v] for u, v in g.edge_array().tolist())


def independent_oracle(g: Graph, ids) -> bool:
    chosen = set(int(v) for v in ids)
    return all(not (u in chosen and v in chosen) for u, v in g.edge_array().tolist())
