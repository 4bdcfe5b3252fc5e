"""Command-line driver: generate instances, run the algorithms, verify, and
emit reproducible CSV/JSONL experiment outputs.

Subcommands: gen, order, partition, nibble, color, verify, bench.  Global
flags --seed/--threads/--out come before the subcommand.  Set NIBBLE_LOG to a
logging level name for diagnostics.

Every algorithm run draws from a Philox stream keyed by (seed, algorithm
tag), so outputs are byte-identical across repeats and thread counts; bench
wall-time is measured around the algorithm call only and sits in the last CSV
column so consumers can strip it before diffing.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .coloring import Coloring, PartColorerChoice, color_pipeline, verify_coloring
from .graph_core import (
    Graph,
    VertexSet,
    from_edge_list,
    greedy_independent_set,
    is_independent,
    write_edge_list,
)
from .instance_gen import (
    TAG_COLOR,
    TAG_NIBBLE,
    TAG_PARTITION,
    GenSpec,
    generate,
    parse_genspec,
    stream,
)
from .nibble import (
    check_cleaning_inequalities,
    default_nibble_params,
    run_nibble,
)
from .tf_partition import (
    Partition,
    cleanup_to_triangle_free,
    default_params,
    find_bad_events,
    moser_tardos_partition,
    verify_partition,
)
from .turan_order import left_sparse_ordering, verify_left_sparsity

__all__ = ["RunConfig", "RunReport", "run_suite", "verify_artifacts", "main"]

log = logging.getLogger("nibblebench")

_ALGOS = ("greedy", "nibble", "color")

CSV_COLUMNS = [
    "instance", "family", "n", "m", "avg_degree", "max_degree", "algorithm",
    "seed", "size", "greedy_bound", "shearer_target", "clean_steps",
    "nibble_steps", "stop_reason", "cleaning_ok", "verified", "wall_s",
]
CSV_HEADER_COMMENT = "# nibblebench csv v1"


@dataclass(frozen=True)
class RunReport:
    instance: str
    family: str
    n: int
    m: int
    avg_degree: float
    max_degree: int
    algorithm: str
    seed: int
    size: int
    greedy_bound: float
    shearer_target: float
    clean_steps: Optional[int]
    nibble_steps: Optional[int]
    stop_reason: str
    cleaning_ok: Optional[bool]
    verified: bool
    wall_s: float

    def row(self) -> list[str]:
        def opt(x):
            return "" if x is None else str(x)

        return [
            self.instance, self.family, str(self.n), str(self.m),
            f"{self.avg_degree:.10g}", str(self.max_degree), self.algorithm,
            str(self.seed), str(self.size), f"{self.greedy_bound:.10g}",
            f"{self.shearer_target:.10g}", opt(self.clean_steps),
            opt(self.nibble_steps), self.stop_reason, opt(self.cleaning_ok),
            str(self.verified), f"{self.wall_s:.6f}",
        ]


@dataclass(frozen=True)
class RunConfig:
    """One bench invocation: instance sources x seeds x algorithms."""

    sources: tuple  # entries: ("spec", GenSpec template) or ("file", path)
    seeds: tuple
    algos: tuple = ("greedy", "nibble")
    eps: float = 0.25
    t: int = 1
    mis_cap: int = 40
    finish: bool = True
    threads: int = 1
    iset_dir: Optional[str] = None
    trace_dir: Optional[str] = None

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("seed list must be non-empty")
        bad = [a for a in self.algos if a not in _ALGOS]
        if bad:
            raise ValueError(f"unknown algorithms {bad}, pick from {_ALGOS}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def _reference(n: int, d: float, eps: float) -> tuple[float, float]:
    greedy = n / (d + 1.0) if n else 0.0
    shearer = (1.0 - eps) * n * math.log(d) / d if d > 1.0 else 0.0
    return greedy, shearer


def _sanitize(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label)


def _write_id_lines(path: str, ids) -> None:
    with open(path, "w") as f:
        for v in ids:
            f.write(f"{int(v)}\n")


def _run_job(config: RunConfig, source: tuple, seed: int) -> list[RunReport]:
    kind, payload = source
    if kind == "spec":
        spec: GenSpec = payload
        g = generate(GenSpec(spec.family, spec.params, seed))
        label, family = spec.label(), spec.family
    else:
        with open(payload) as f:
            g = from_edge_list(f)
        label, family = os.path.basename(payload), "file"
    n, m = g.n, g.m
    d = 2.0 * m / n if n else 0.0
    delta = int(g.degree_array().max()) if n else 0
    greedy_bound, shearer = _reference(n, d, config.eps)
    base = dict(
        instance=label, family=family, n=n, m=m, avg_degree=d, max_degree=delta,
        seed=seed, greedy_bound=greedy_bound, shearer_target=shearer,
    )
    stem = f"{_sanitize(label)}__s{seed}"
    reports = []
    for algo in config.algos:
        t0 = time.perf_counter()
        if algo == "greedy":
            iset = greedy_independent_set(g)
            wall = time.perf_counter() - t0
            ok = is_independent(g, iset)
            reports.append(RunReport(
                **base, algorithm="greedy", size=len(iset), clean_steps=None,
                nibble_steps=None, stop_reason="", cleaning_ok=None,
                verified=ok, wall_s=wall,
            ))
            if config.iset_dir:
                _write_id_lines(os.path.join(config.iset_dir, f"{stem}__greedy.iset"),
                                iset.indices())
        elif algo == "nibble":
            params = default_nibble_params(
                config.eps, d, t=config.t, mis_node_cap=config.mis_cap,
                finish_with_greedy=config.finish)
            outcome = run_nibble(g, params, stream(seed, TAG_NIBBLE))
            wall = time.perf_counter() - t0
            ok = is_independent(g, outcome.iset)
            clean, nib = outcome.trace.counts()
            cleaning_ok = check_cleaning_inequalities(outcome.trace).passed
            reports.append(RunReport(
                **base, algorithm="nibble", size=len(outcome.iset),
                clean_steps=clean, nibble_steps=nib,
                stop_reason=outcome.trace.stop_reason, cleaning_ok=cleaning_ok,
                verified=ok, wall_s=wall,
            ))
            if config.iset_dir:
                _write_id_lines(os.path.join(config.iset_dir, f"{stem}__nibble.iset"),
                                outcome.iset.indices())
            if config.trace_dir:
                with open(os.path.join(config.trace_dir, f"{stem}__nibble.jsonl"), "w") as f:
                    for rec in outcome.trace.records:
                        f.write(json.dumps(rec.as_json_dict()) + "\n")
        else:
            pipe = color_pipeline(g, config.t, stream(seed, TAG_COLOR))
            wall = time.perf_counter() - t0
            ok = verify_coloring(g, pipe.coloring).passed
            reports.append(RunReport(
                **base, algorithm="color", size=pipe.coloring.palette_size,
                clean_steps=None, nibble_steps=None, stop_reason="",
                cleaning_ok=None, verified=ok, wall_s=wall,
            ))
            if config.iset_dir:
                _write_id_lines(os.path.join(config.iset_dir, f"{stem}__color.colors"),
                                pipe.coloring.color_of)
        log.info("done %s %s seed=%d", label, algo, seed)
    return reports


def run_suite(config: RunConfig) -> Iterator[RunReport]:
    """All (instance, seed) jobs in a worker pool; reports stream out in
    deterministic submission order regardless of scheduling."""
    greedy_independent_set(Graph.from_edges(2, [(0, 1)]))  # warm the jit cache
    for dirpath in (config.iset_dir, config.trace_dir):
        if dirpath:
            os.makedirs(dirpath, exist_ok=True)
    jobs = [(source, seed) for source in config.sources for seed in config.seeds]
    if config.threads == 1:
        for source, seed in jobs:
            yield from _run_job(config, source, seed)
        return
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        futures = [pool.submit(_run_job, config, source, seed) for source, seed in jobs]
        for fut in futures:
            yield from fut.result()


def _read_int_lines(path: str) -> list[int]:
    out = []
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            try:
                out.append(int(s))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected an integer, got {s!r}")
    return out


def verify_artifacts(
    graph_path: str,
    iset_path: Optional[str] = None,
    coloring_path: Optional[str] = None,
    partition_path: Optional[str] = None,
    degree_bound: Optional[int] = None,
) -> tuple[bool, str]:
    """Exact recheck of a stored result against its graph; (verdict, message)."""
    with open(graph_path) as f:
        g = from_edge_list(f)
    given = [p for p in (iset_path, coloring_path, partition_path) if p is not None]
    if len(given) != 1:
        raise ValueError("pass exactly one of iset, coloring, partition")
    if iset_path is not None:
        ids = _read_int_lines(iset_path)
        bad = [v for v in ids if not 0 <= v < g.n]
        if bad:
            return False, f"vertex id {bad[0]} out of range [0, {g.n})"
        s = VertexSet.from_indices(g.n, ids)
        if is_independent(g, s):
            return True, f"independent set of size {len(s)}"
        inside = s.indices()
        for u in inside.tolist():
            hits = np.intersect1d(g.neighbors(u), inside)
            if hits.size:
                return False, f"edge ({u}, {int(hits[0])}) inside the set"
        return False, "not independent"
    if coloring_path is not None:
        colors = _read_int_lines(coloring_path)
        if len(colors) != g.n:
            return False, f"coloring has {len(colors)} entries for {g.n} vertices"
        arr = np.asarray(colors, dtype=np.int64)
        rep = verify_coloring(g, Coloring(arr, int(arr.max()) + 1 if g.n else 0))
        if rep.passed:
            return True, f"proper with {int(arr.max()) + 1 if g.n else 0} colors"
        return False, f"monochromatic edge {rep.monochromatic[0]}"
    classes = _read_int_lines(partition_path)
    if len(classes) != g.n:
        return False, f"partition has {len(classes)} entries for {g.n} vertices"
    arr = np.asarray(classes, dtype=np.int64)
    k = int(arr.max()) + 1 if g.n else 0
    rep = verify_partition(g, Partition(class_of=arr, k=k, certificates=()),
                           degree_bound=degree_bound)
    if rep.passed:
        return True, f"{k} classes, all triangle-free"
    return False, "; ".join(rep.failures[:3])


def _open_out(args) -> io.TextIOBase:
    return open(args.out, "w") if args.out else sys.stdout


def _load_graph(path: str) -> Graph:
    with open(path) as f:
        return from_edge_list(f)


def _parse_seeds(text: str) -> tuple:
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            lo_i, hi_i = int(lo), int(hi)
            if lo_i > hi_i:
                raise ValueError(f"empty seed range {part!r}")
            seeds.extend(range(lo_i, hi_i + 1))
        else:
            seeds.append(int(part))
    return tuple(seeds)


def cmd_gen(args) -> int:
    g = generate(parse_genspec(args.spec, args.seed))
    out = _open_out(args)
    try:
        write_edge_list(g, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_order(args) -> int:
    g = _load_graph(args.graph)
    o = left_sparse_ordering(g)
    rep = verify_left_sparsity(g, o, bound=int(o.left_tri.max()) if g.n else 0)
    out = _open_out(args)
    try:
        for v in o.order.tolist():
            out.write(f"{v}\n")
        out.write(f"# max_left_tri={rep.max_left_tri}\n")
        out.write(f"# triangles={rep.triangle_total}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if rep.passed else 1


def cmd_partition(args) -> int:
    g = _load_graph(args.graph)
    delta = int(g.degree_array().max()) if g.n else 1
    params = default_params(max(delta, 1), args.t)
    overrides = {
        k: getattr(args, k)
        for k in ("ell", "kappa_bad", "mu", "bad_threshold", "part_degree_bound",
                  "max_resamples")
        if getattr(args, k) is not None
    }
    if overrides:
        from dataclasses import replace

        params = replace(params, **overrides)
    o = left_sparse_ordering(g)
    rng = stream(args.seed, TAG_PARTITION)
    class_colors, resamples = moser_tardos_partition(g, o, params, rng)
    leftover = find_bad_events(g, o, class_colors, params)
    part = cleanup_to_triangle_free(g, o, class_colors, params)
    rep = verify_partition(g, part, degree_bound=params.part_degree_bound)
    if args.out:
        _write_id_lines(args.out, part.class_of)
    verdict = "pass" if (rep.passed and not leftover) else "FAIL"
    print(f"partition: k={part.k} resamples={resamples} bad_events={len(leftover)} "
          f"degree_bound={params.part_degree_bound} verdict={verdict}")
    print(f"csv,partition,{g.n},{g.m},{part.k},{resamples},{len(leftover)},{verdict}")
    return 0 if verdict == "pass" else 1


def cmd_nibble(args) -> int:
    g = _load_graph(args.graph)
    d = 2.0 * g.m / g.n if g.n else 0.0
    params = default_nibble_params(args.eps, d, t=args.t, mis_node_cap=args.mis_cap,
                                   finish_with_greedy=not args.no_finish)
    outcome = run_nibble(g, params, stream(args.seed, TAG_NIBBLE))
    clean, nib = outcome.trace.counts()
    cleaning = check_cleaning_inequalities(outcome.trace)
    ok = is_independent(g, outcome.iset)
    if args.iset_out:
        _write_id_lines(args.iset_out, outcome.iset.indices())
    if args.trace_out:
        with open(args.trace_out, "w") as f:
            for rec in outcome.trace.records:
                f.write(json.dumps(rec.as_json_dict()) + "\n")
    gb, st = outcome.reference_bounds
    print(f"nibble: iset={len(outcome.iset)} greedy_bound={gb:.1f} "
          f"shearer_target={st:.1f} stop={outcome.trace.stop_reason} "
          f"clean={clean} nibble={nib} cleaning_ok={cleaning.passed} verified={ok}")
    return 0 if ok and cleaning.passed else 1


def cmd_color(args) -> int:
    g = _load_graph(args.graph)
    pipe = color_pipeline(g, args.t, stream(args.seed, TAG_COLOR),
                          choice=PartColorerChoice(args.strategy))
    rep = verify_coloring(g, pipe.coloring)
    if args.out:
        _write_id_lines(args.out, pipe.coloring.color_of)
    print(f"color: palette={pipe.coloring.palette_size} k={pipe.partition.k} "
          f"max_part_degree={pipe.max_part_degree} "
          f"verdict={'pass' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


def cmd_verify(args) -> int:
    ok, msg = verify_artifacts(
        args.graph, iset_path=args.iset, coloring_path=args.coloring,
        partition_path=args.partition, degree_bound=args.degree_bound)
    print(f"{'pass' if ok else 'FAIL'}: {msg}")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    sources: list[tuple] = []
    for s in args.spec or []:
        sources.append(("spec", parse_genspec(s, args.seed)))
    for p in args.graph or []:
        sources.append(("file", p))
    if not sources:
        print("bench: give at least one --spec or --graph", file=sys.stderr)
        return 2
    config = RunConfig(
        sources=tuple(sources),
        seeds=_parse_seeds(args.seeds),
        algos=tuple(a.strip() for a in args.algos.split(",") if a.strip()),
        eps=args.eps,
        t=args.t,
        mis_cap=args.mis_cap,
        finish=not args.no_finish,
        threads=args.threads,
        iset_dir=args.iset_dir,
        trace_dir=args.trace_dir,
    )
    out = _open_out(args)
    failed = False
    try:
        writer = csv.writer(out, lineterminator="\n")
        out.write(CSV_HEADER_COMMENT + "\n")
        writer.writerow(CSV_COLUMNS)
        for report in run_suite(config):
            writer.writerow(report.row())
            out.flush()
            failed = failed or not report.verified
    finally:
        if out is not sys.stdout:
            out.close()
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nibblebench",
        description="Independent sets and colorings of triangle-sparse graphs: "
                    "generators, algorithms, verifiers, benchmarks.",
    )
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads for bench")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    spec_help = (
        "family:key=value,...  families: gnp(n,p), random_regular(n,d), "
        "bipartite(n,p), triangle_scrubbed_gnp(n,p), blowup_k3(s[,copies]), "
        "blowup_c5(s[,copies]); 'scale' is an alias for 'copies'"
    )
    sp = sub.add_parser("gen", help="generate an instance, write its edge list")
    sp.add_argument("--spec", required=True, help=spec_help)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("order", help="left-sparse vertex ordering")
    sp.add_argument("graph", help="edge-list file")
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("partition", help="triangle-free bounded-degree partition")
    sp.add_argument("graph")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--kappa-bad", dest="kappa_bad", type=int, default=None)
    sp.add_argument("--mu", type=int, default=None)
    sp.add_argument("--bad-threshold", dest="bad_threshold", type=int, default=None)
    sp.add_argument("--degree-bound", dest="part_degree_bound", type=int, default=None)
    sp.add_argument("--max-resamples", dest="max_resamples", type=int, default=None)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("nibble", help="cleaning/nibble independent set")
    sp.add_argument("graph")
    sp.add_argument("--eps", type=float, default=0.25)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--mis-cap", dest="mis_cap", type=int, default=40)
    sp.add_argument("--no-finish", action="store_true",
                    help="skip the greedy finish on the residual")
    sp.add_argument("--trace-out", default=None, help="JSONL trace path")
    sp.add_argument("--iset-out", default=None, help="vertex ids, one per line")
    sp.set_defaults(func=cmd_nibble)

    sp = sub.add_parser("color", help="partition-then-color pipeline")
    sp.add_argument("graph")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--strategy", default="greedy_degeneracy",
                    choices=("greedy_degeneracy", "dsatur", "randomized_local"))
    sp.set_defaults(func=cmd_color)

    sp = sub.add_parser("verify", help="recheck a stored result against its graph")
    sp.add_argument("graph")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--iset")
    group.add_argument("--coloring")
    group.add_argument("--partition")
    sp.add_argument("--degree-bound", dest="degree_bound", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="instance x seed x algorithm experiment grid")
    sp.add_argument("--spec", action="append", help=spec_help)
    sp.add_argument("--graph", action="append", help="edge-list file (repeatable)")
    sp.add_argument("--seeds", default="1", help="e.g. 1-5 or 1,3,7")
    sp.add_argument("--algos", default="greedy,nibble",
                    help="comma list from greedy,nibble,color")
    sp.add_argument("--eps", type=float, default=0.25)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--mis-cap", dest="mis_cap", type=int, default=40)
    sp.add_argument("--no-finish", action="store_true")
    sp.add_argument("--iset-dir", default=None)
    sp.add_argument("--trace-dir", default=None)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    level = os.environ.get("NIBBLE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
