"""Independent sets by alternating cleaning and nibble steps.

The driver loop keeps a residual graph H and repeats: stop if the average
degree fell below a floor (T1), the cleaning ratio tracker grew past a cap
(T2), or the nibble budget is spent (T3); otherwise delete one vertex whose
degree exceeds (1 + eps/10) times the current average (a cleaning step), or
run one randomized nibble step.  A nibble step activates a p-random vertex
set A, extracts an independent set from H[A], and keeps as survivors the
vertices that pass an equalizing coin flip and have no closed-neighborhood
contact with A; the flip is tuned so every vertex survives with the same
probability gamma * (1 - p).

All randomness flows through a caller-supplied generator, so runs are
reproducible and schedule-independent.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph_core import (
    Graph,
    RelabeledSubgraph,
    VertexSet,
    exact_mis,
    greedy_independent_set,
    induced,
    is_independent,
)
from .turan_order import codegree_profile

__all__ = [
    "NibbleParams",
    "IsetStepStats",
    "IsetStepResult",
    "TraceRecord",
    "NibbleTrace",
    "NibbleOutcome",
    "CleaningReport",
    "default_nibble_params",
    "iset_step",
    "expected_survivors",
    "expected_residual_edges",
    "cleaning_step",
    "run_nibble",
    "check_cleaning_inequalities",
    "reference_bounds",
]


@dataclass(frozen=True)
class NibbleParams:
    """Knobs of the driver loop.

    ``kappa`` sets the activation rate p = kappa / D at each nibble step;
    ``d_floor_exponent`` and ``r_cap_exponent`` give the T1/T2 thresholds as
    powers of the input graph's initial average degree; ``tau_cap`` bounds
    the number of nibble steps (T3).
    """

    eps: float
    kappa: float
    t: int
    mis_node_cap: int
    d_floor_exponent: float
    r_cap_exponent: float
    tau_cap: int
    finish_with_greedy: bool = True

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if not 0.0 < self.kappa < 1.0 / 3.0:
            raise ValueError("kappa must lie in (0, 1/3)")
        if self.tau_cap < 1:
            raise ValueError("tau_cap must be >= 1")
        if self.t < 1 or self.mis_node_cap < 0:
            raise ValueError("t must be >= 1 and mis_node_cap >= 0")
        if min(self.d_floor_exponent, self.r_cap_exponent) <= 0:
            raise ValueError("threshold exponents must be positive")


def default_nibble_params(
    eps: float,
    d: float,
    t: int = 1,
    mis_node_cap: int = 40,
    finish_with_greedy: bool = True,
) -> NibbleParams:
    """Standard parameter wiring: kappa = eps/10, T1 exponent eps/8, T2
    exponent eps/20, and a nibble budget of
    ceil(10 (1 - eps/3) ln d / ((1 + eps/5) eps)), at least 1."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    tau_cap = 1
    if d > 1.0:
        tau_cap = max(
            1, math.ceil(10.0 * (1.0 - eps / 3.0) * math.log(d) / ((1.0 + eps / 5.0) * eps))
        )
    return NibbleParams(
        eps=eps,
        kappa=eps / 10.0,
        t=t,
        mis_node_cap=mis_node_cap,
        d_floor_exponent=eps / 8.0,
        r_cap_exponent=eps / 20.0,
        tau_cap=tau_cap,
        finish_with_greedy=finish_with_greedy,
    )


@dataclass(frozen=True)
class IsetStepStats:
    a_size: int
    a_edges: int
    k_size: int
    k_edges: int
    p: float
    gamma: float
    beta: Optional[float] = None


@dataclass(frozen=True)
class IsetStepResult:
    activated: VertexSet
    independent: VertexSet
    survivors: VertexSet
    residual: RelabeledSubgraph
    stats: IsetStepStats


def _deletion_greedy(h: Graph) -> VertexSet:
    """Remove one endpoint per surviving edge; keeps >= n - m vertices.

    The endpoint of larger remaining degree goes (higher id on ties), which
    never hurts the n - m lower bound and tends to help.
    """
    deg = h.degree_array().astype(np.int64)
    alive = np.ones(h.n, dtype=bool)
    for u, v in h.edge_array().tolist():
        if not (alive[u] and alive[v]):
            continue
        drop = v if (deg[v], v) >= (deg[u], u) else u
        alive[drop] = False
        deg[h.neighbors(drop)] -= 1
    return VertexSet(alive)


def iset_step(
    h: Graph,
    p: float,
    rng: np.random.Generator,
    mis_node_cap: int = 40,
    *,
    beta: Optional[float] = None,
) -> IsetStepResult:
    """One nibble step on h.

    Draw order is fixed for reproducibility: first the n activation uniforms,
    then the n equalizing-flip uniforms.  The flip for v succeeds with
    probability (1-p)^(Delta - deg v), computed in log-space; survivors are
    the flip winners with no closed-neighborhood contact with A.  The
    independent set inside H[A] is exact below ``mis_node_cap`` vertices and
    deletion-greedy above, preserving |I| >= |A| - e(H[A]) either way.
    """
    if h.n < 1:
        raise ValueError("iset_step needs a nonempty graph")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    n = h.n
    log_q = math.log1p(-p)
    delta = int(h.degree_array().max()) if n else 0
    gamma = math.exp(delta * log_q)

    act = rng.random(n) < p
    eq_prob = np.exp((delta - h.degree_array()) * log_q)
    assert np.all((eq_prob > 0.0) & (eq_prob <= 1.0))
    eq = rng.random(n) < eq_prob

    edges = h.edge_array()
    a_hits = np.zeros(n, dtype=np.int64)
    if edges.shape[0]:
        np.add.at(a_hits, edges[:, 0], act[edges[:, 1]])
        np.add.at(a_hits, edges[:, 1], act[edges[:, 0]])
    survivors_mask = eq & ~act & (a_hits == 0)

    activated = VertexSet(act)
    inside = induced(h, activated)
    a_edges = inside.graph.m
    if len(activated) <= mis_node_cap:
        local = exact_mis(inside.graph, node_cap=mis_node_cap)
    else:
        local = _deletion_greedy(inside.graph)
    ind_mask = np.zeros(n, dtype=bool)
    ind_mask[inside.to_parent[local.indices()]] = True
    independent = VertexSet(ind_mask)

    survivors = VertexSet(survivors_mask)
    residual = induced(h, survivors)

    assert len(independent) >= len(activated) - a_edges
    assert is_independent(h, independent)
    assert not np.any(act[survivors_mask]) and not np.any(a_hits[survivors_mask])
    stats = IsetStepStats(
        a_size=len(activated),
        a_edges=a_edges,
        k_size=len(survivors),
        k_edges=residual.graph.m,
        p=p,
        gamma=gamma,
        beta=beta,
    )
    return IsetStepResult(
        activated=activated,
        independent=independent,
        survivors=survivors,
        residual=residual,
        stats=stats,
    )


def expected_survivors(h: Graph, p: float) -> float:
    """Exact E[|K|] = gamma * (1-p) * n with gamma = (1-p)^(max degree)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if h.n == 0:
        return 0.0
    delta = int(h.degree_array().max())
    return math.exp((delta + 1) * math.log1p(-p)) * h.n


def expected_residual_edges(h: Graph, p: float) -> float:
    """Exact E[e(residual)] = gamma^2 * sum over edges of (1-p)^(-codegree)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if h.m == 0:
        return 0.0
    delta = int(h.degree_array().max())
    log_q = math.log1p(-p)
    q = codegree_profile(h).q
    return float(sum(math.exp((2 * delta - int(qe)) * log_q) for qe in q))


def cleaning_step(h: Graph, eps: float) -> Optional[tuple[RelabeledSubgraph, int]]:
    """Remove the max-degree vertex (lowest id on ties) if its degree exceeds
    (1 + eps/10) times the average degree; None when no vertex qualifies."""
    if h.n == 0:
        raise ValueError("cleaning_step needs a nonempty graph")
    deg = h.degree_array()
    avg = 2.0 * h.m / h.n
    if deg.max() <= (1.0 + eps / 10.0) * avg:
        return None
    v = int(deg.argmax())
    keep = np.ones(h.n, dtype=bool)
    keep[v] = False
    return induced(h, VertexSet(keep)), v


@dataclass(frozen=True)
class TraceRecord:
    """Loop state at the top of iteration i, plus what the iteration did."""

    i: int
    kind: str  # clean | nibble | stop
    n: int
    d: float
    r: float
    tau: int
    detail: dict

    def as_json_dict(self) -> dict:
        return {
            "i": self.i,
            "kind": self.kind,
            "N": self.n,
            "D": self.d,
            "R": self.r,
            "tau": self.tau,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class NibbleTrace:
    records: tuple[TraceRecord, ...]
    eps: float
    d0: float

    @property
    def stop_reason(self) -> str:
        return self.records[-1].detail["reason"]

    def counts(self) -> tuple[int, int]:
        clean = sum(1 for r in self.records if r.kind == "clean")
        nib = sum(1 for r in self.records if r.kind == "nibble")
        return clean, nib


@dataclass(frozen=True)
class NibbleOutcome:
    iset: VertexSet
    residual: RelabeledSubgraph
    trace: NibbleTrace
    reference_bounds: tuple[float, float]  # (greedy n/(d+1), shearer target)


class _Residual:
    """Single-owner mutable view of the current residual graph.

    Cleaning steps only delete vertices, so between nibble steps the graph is
    kept as (base CSR, alive mask, live degrees) with a lazy max-heap over
    (degree, -id); a CSR is materialized only when a nibble step or the final
    answer needs one.
    """

    def __init__(self, base: Graph, to_orig: np.ndarray):
        self.base = base
        self.to_orig = to_orig
        self.alive = np.ones(base.n, dtype=bool)
        self.deg = base.degree_array().astype(np.int64)
        self.n_live = base.n
        self.m_live = base.m
        self.heap = [(-int(d), v) for v, d in enumerate(self.deg.tolist())]
        heapq.heapify(self.heap)

    def peek_max(self) -> tuple[int, int]:
        """(degree, vertex) of the max-degree live vertex, lowest id on ties."""
        heap = self.heap
        while heap:
            negd, v = heap[0]
            if self.alive[v] and self.deg[v] == -negd:
                return -negd, v
            heapq.heappop(heap)
        raise ValueError("residual graph is empty")

    def remove(self, v: int) -> int:
        assert self.alive[v]
        push = heapq.heappush
        for u in self.base.neighbors(v).tolist():
            if self.alive[u]:
                self.deg[u] -= 1
                push(self.heap, (-int(self.deg[u]), u))
        self.m_live -= int(self.deg[v])
        self.alive[v] = False
        self.n_live -= 1
        return int(self.to_orig[v])

    def avg_degree(self) -> float:
        return 2.0 * self.m_live / self.n_live if self.n_live else 0.0

    def materialize(self) -> tuple[Graph, np.ndarray]:
        sub = induced(self.base, VertexSet(self.alive.copy()))
        return sub.graph, self.to_orig[sub.to_parent]


def run_nibble(g: Graph, params: NibbleParams, rng: np.random.Generator) -> NibbleOutcome:
    """Full driver loop; see the module docstring for the step semantics.

    T1/T2 thresholds are powers of the initial average degree.  Graphs with
    average degree below 2 short-circuit to the greedy finish under a T1 stop.
    The returned set is asserted independent in g before returning, and the
    residual never touches the closed neighborhood of the accumulated set, so
    the greedy finish keeps the union independent.
    """
    n0 = g.n
    d0 = 2.0 * g.m / n0 if n0 else 0.0
    eps = params.eps
    refs = _reference_pair(n0, d0, eps)
    iset_mask = np.zeros(n0, dtype=bool)
    records: list[TraceRecord] = []

    if n0 == 0 or d0 < 2.0:
        records.append(
            TraceRecord(i=1, kind="stop", n=n0, d=d0, r=1.0, tau=0, detail={"reason": "T1"})
        )
        if params.finish_with_greedy and n0:
            iset_mask[greedy_independent_set(g).indices()] = True
        iset = VertexSet(iset_mask)
        assert is_independent(g, iset)
        return NibbleOutcome(
            iset=iset,
            residual=RelabeledSubgraph(g, np.arange(n0, dtype=np.int64)),
            trace=NibbleTrace(tuple(records), eps=eps, d0=d0),
            reference_bounds=refs,
        )

    d_floor = d0 ** params.d_floor_exponent
    r_cap = d0 ** params.r_cap_exponent
    beta = d0 ** (-1.0 / (20.0 * params.t * params.t))
    res = _Residual(g, np.arange(n0, dtype=np.int64))
    r = 1.0
    tau = 0
    i = 1
    while True:
        n_live = res.n_live
        d_live = res.avg_degree()
        stop = None
        if d_live < d_floor:
            stop = "T1"
        elif r > r_cap:
            stop = "T2"
        elif tau >= params.tau_cap:
            stop = "T3"
        if stop is not None:
            records.append(
                TraceRecord(i=i, kind="stop", n=n_live, d=d_live, r=r, tau=tau,
                            detail={"reason": stop})
            )
            break
        maxdeg, v = res.peek_max()
        if maxdeg > (1.0 + eps / 10.0) * d_live:
            orig = res.remove(v)
            records.append(
                TraceRecord(i=i, kind="clean", n=n_live, d=d_live, r=r, tau=tau,
                            detail={"removed": orig})
            )
            r *= n_live / (n_live - 1)
        else:
            h, to_orig = res.materialize()
            p = params.kappa / d_live
            step = iset_step(h, p, rng, params.mis_node_cap, beta=beta)
            iset_mask[to_orig[step.independent.indices()]] = True
            st = step.stats
            d_resid = 2.0 * st.k_edges / st.k_size if st.k_size else 0.0
            lo = (1.0 - beta) * st.gamma * (1.0 - p) * n_live
            hi = (1.0 + beta) * st.gamma * (1.0 - p) * n_live
            records.append(
                TraceRecord(
                    i=i, kind="nibble", n=n_live, d=d_live, r=r, tau=tau,
                    detail={
                        "iset_size": len(step.independent),
                        "activated": st.a_size,
                        "survivors": st.k_size,
                        "r1": bool(len(step.independent) >= (1.0 - 2.0 * params.kappa) * n_live * p),
                        "r2": bool(lo <= st.k_size <= hi),
                        "r3": bool(d_resid <= (1.0 + 4.0 * beta) * st.gamma * d_live),
                    },
                )
            )
            res = _Residual(step.residual.graph, to_orig[step.residual.to_parent])
            tau += 1
        i += 1

    final_graph, final_ids = res.materialize()
    if params.finish_with_greedy and final_graph.n:
        chosen = greedy_independent_set(final_graph)
        iset_mask[final_ids[chosen.indices()]] = True
    iset = VertexSet(iset_mask)
    assert is_independent(g, iset)
    return NibbleOutcome(
        iset=iset,
        residual=RelabeledSubgraph(final_graph, final_ids),
        trace=NibbleTrace(tuple(records), eps=eps, d0=d0),
        reference_bounds=refs,
    )


@dataclass(frozen=True)
class CleaningReport:
    """Per-cleaning-step recheck of the two average-degree growth inequalities."""

    checked: int
    guarded: int
    violations: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_cleaning_inequalities(trace: NibbleTrace) -> CleaningReport:
    """For every cleaning step with N >= 3 and D' > 0, verify
    N'/D' >= (1 + eps/(5N)) N/D and (N'/D')/(N/D) >= (N/N')^(eps/20).

    The comparisons are plain float: the proof's slack at these guards is
    orders of magnitude above double rounding.
    """
    eps = trace.eps
    checked = guarded = 0
    violations: list[dict] = []
    recs = trace.records
    for idx, rec in enumerate(recs):
        if rec.kind != "clean":
            continue
        nxt = recs[idx + 1]  # a stop record always terminates the trace
        n, d, n2, d2 = rec.n, rec.d, nxt.n, nxt.d
        if n < 3 or d2 <= 0.0:
            guarded += 1
            continue
        checked += 1
        ratio = (n2 / d2) / (n / d)
        ok_linear = n2 / d2 >= (1.0 + eps / (5.0 * n)) * (n / d)
        ok_power = ratio >= (n / n2) ** (eps / 20.0)
        if not (ok_linear and ok_power):
            violations.append(
                {"i": rec.i, "N": n, "D": d, "N2": n2, "D2": d2,
                 "linear": ok_linear, "power": ok_power}
            )
    return CleaningReport(checked=checked, guarded=guarded, violations=tuple(violations))


def _reference_pair(n: int, d: float, eps: float) -> tuple[float, float]:
    greedy = n / (d + 1.0) if n else 0.0
    shearer = (1.0 - eps) * n * math.log(d) / d if d > 1.0 else 0.0
    return greedy, shearer


def reference_bounds(n: int, d: float, eps: float) -> tuple[float, float]:
    """(greedy bound n/(d+1), target (1-eps) n ln(d)/d); requires d > 1."""
    if d <= 1.0:
        raise ValueError("reference bounds need average degree > 1")
    return _reference_pair(n, d, eps)
