"""Command-line interface: detect, bench, validate.

Exit codes: 0 success, 2 parse/IO failure, 3 input graph has no edges.
Outputs are deterministic byte-for-byte except for the timing lines in
reports, which measure wall-clock per phase in milliseconds.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from typing import IO

import numpy as np

from . import __version__
from .agglom import RunTrace, xcz_run
from .graphs import (Graph, LabelMap, LoadResult, NoEdgesError, ParseError,
                     load_edge_list, load_gml, validate)
from .greedy import cnm_run, hybrid_run
from .partition import Partition
from .testkit import PlantedPartitionSpec, planted_partition

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NO_EDGES = 3

_ALGOS = {
    "xcz": lambda g: xcz_run(g),
    "cnm": lambda g: cnm_run(g),
    "hybrid": lambda g: hybrid_run(g),
}


def _load(path: str, fmt: str | None) -> LoadResult:
    if fmt is None:
        fmt = "gml" if path.endswith(".gml") else "edgelist"
    loader = load_gml if fmt == "gml" else load_edge_list
    with open(path, "r", encoding="utf-8") as fh:
        return loader(fh)


def _dense_community_ids(partition: Partition, labels: LabelMap) -> np.ndarray:
    """Community ids densely numbered by ascending minimum member label."""
    min_label: dict[int, str] = {}
    for node in range(partition.assignment.size):
        block = int(partition.assignment[node])
        lab = labels.label_of(node)
        if block not in min_label or lab < min_label[block]:
            min_label[block] = lab
    order = sorted(min_label, key=lambda b: min_label[b])
    remap = {block: i for i, block in enumerate(order)}
    return np.array([remap[int(b)] for b in partition.assignment], dtype=np.int64)


def write_assignments(partition: Partition, labels: LabelMap, out: IO[str]) -> None:
    ids = _dense_community_ids(partition, labels)
    for node in range(partition.assignment.size):
        out.write(f"{labels.label_of(node)}\t{int(ids[node])}\n")


def write_report(algo: str, path: str, graph: Graph, partition: Partition,
                 trace: RunTrace, load_ms: float, out: IO[str]) -> None:
    out.write(f"algorithm: {algo}\n")
    out.write(f"input: {path}\n")
    out.write(f"n: {graph.n}\n")
    out.write(f"m: {graph.m}\n")
    out.write(f"best_q: {trace.best_q:.6f}\n")
    out.write(f"best_round: {trace.best_round}\n")
    out.write(f"communities: {partition.h}\n")
    out.write(f"time_load_ms: {load_ms:.3f}\n")
    for phase, ms in sorted(trace.phase_ms.items()):
        out.write(f"time_{phase}_ms: {ms:.3f}\n")
    out.write("trace:\n")
    out.write(f"{'round':>7}  {'phase':<10}  {'h':>9}  {'q':>12}\n")
    for rec in trace.rounds:
        out.write(f"{rec.round:>7}  {rec.phase:<10}  {rec.h:>9}  {rec.q:>12.6f}\n")


def cmd_detect(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    try:
        graph, labels, dropped = _load(args.input, args.format)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    load_ms = (time.perf_counter() - t0) * 1e3
    try:
        partition, trace = _ALGOS[args.algo](graph)
    except NoEdgesError:
        print("error: no edges", file=sys.stderr)
        return EXIT_NO_EDGES
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_assignments(partition, labels, fh)
    else:
        write_assignments(partition, labels, sys.stdout)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            write_report(args.algo, args.input, graph, partition, trace,
                         load_ms, fh)
    else:
        write_report(args.algo, args.input, graph, partition, trace,
                     load_ms, sys.stderr)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        graph, _, dropped = _load(args.input, args.format)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = validate(graph)
    print(f"n={report.n} m={report.m} components={report.components} "
          f"dropped={dropped}")
    for violation in report.violations:
        print(f"violation: {violation}")
    return EXIT_OK if report.ok else EXIT_PARSE


def cmd_bench(args: argparse.Namespace) -> int:
    spec = PlantedPartitionSpec(args.blocks, args.block_size,
                                args.p_in, args.p_out, args.seed)
    t0 = time.perf_counter()
    graph = planted_partition(spec)
    gen_ms = (time.perf_counter() - t0) * 1e3
    print(f"graph: planted blocks={spec.blocks} block_size={spec.block_size} "
          f"p_in={spec.p_in} p_out={spec.p_out} seed={spec.seed}")
    print(f"n={graph.n} m={graph.m} generated_in_ms={gen_ms:.1f}")
    print(f"{'algorithm':<10}  {'median_ms':>12}  {'best_q':>10}  {'communities':>12}")
    results = {}
    for algo in args.algos.split(","):
        algo = algo.strip()
        if algo not in _ALGOS:
            print(f"error: unknown algorithm {algo!r}", file=sys.stderr)
            return EXIT_PARSE
        times = []
        partition = trace = None
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            partition, trace = _ALGOS[algo](graph)
            times.append((time.perf_counter() - t0) * 1e3)
        median_ms = statistics.median(times)
        results[algo] = (median_ms, trace.best_q)
        print(f"{algo:<10}  {median_ms:>12.1f}  {trace.best_q:>10.6f}  "
              f"{partition.h:>12}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commsim",
        description="Community detection by subgraph-similarity agglomeration, "
                    "greedy modularity merging, and their hybrid.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect communities in a graph file")
    detect.add_argument("input")
    detect.add_argument("--format", choices=["edgelist", "gml"], default=None,
                        help="default: by file extension")
    detect.add_argument("--algo", choices=sorted(_ALGOS), default="hybrid")
    detect.add_argument("--out", help="assignment TSV path (default stdout)")
    detect.add_argument("--report", help="run report path (default stderr)")
    detect.add_argument("--threads", type=int, default=0,
                        help="similarity worker cap; results are identical "
                             "for any value (sparse kernels are sequential)")
    detect.set_defaults(func=cmd_detect)

    val = sub.add_parser("validate", help="check a graph file and print stats")
    val.add_argument("input")
    val.add_argument("--format", choices=["edgelist", "gml"], default=None)
    val.set_defaults(func=cmd_validate)

    bench = sub.add_parser("bench", help="time algorithms on a planted graph")
    bench.add_argument("--blocks", type=int, default=100)
    bench.add_argument("--block-size", type=int, default=1000)
    bench.add_argument("--p-in", type=float, default=0.006)
    bench.add_argument("--p-out", type=float, default=2e-5)
    bench.add_argument("--seed", type=int, default=1)
    bench.add_argument("--algos", default="xcz,cnm,hybrid")
    bench.add_argument("--repeat", type=int, default=1)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
