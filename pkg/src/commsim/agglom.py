"""Agglomeration by repeated most-similar linking.

Each round links every block to all of its most-similar blocks (ties
included, no random tie-breaking anywhere), merges the connected
components of the link graph, and records the modularity of the new
division. The division with maximal Q over the whole run is returned;
ties go to the earliest round. The whole procedure is deterministic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, NoEdgesError
from .partition import (Partition, QuotientGraph, build_quotient,
                        canonical_relabel, check_conservation, merge_blocks,
                        modularity, modularity_key, singleton_partition)
from .similarity import SimilarityTable, similarity_table


@dataclass
class RoundLinks:
    """Arcs i -> j where s_ij attains the positive row maximum of i."""

    h: int
    src: np.ndarray
    dst: np.ndarray

    def targets(self, i: int) -> set[int]:
        return set(int(j) for j in self.dst[self.src == i])

    @property
    def arc_count(self) -> int:
        return int(self.src.size)


@dataclass
class RoundRecord:
    round: int
    h: int
    q: float
    phase: str = "round"


@dataclass
class RunTrace:
    rounds: list[RoundRecord] = field(default_factory=list)
    best_round: int = 0
    best_q: float = 0.0
    phase_ms: dict[str, float] = field(default_factory=dict)


def most_similar_links(table: SimilarityTable, h: int) -> RoundLinks:
    """Arcs to every maximizer of each row; empty row -> no arcs."""
    s = table.symmetric_csr()
    if s.shape[0] != h:
        raise ValueError("table block count does not match h")
    counts = np.diff(s.indptr)
    rowmax = np.zeros(h)
    nonempty = counts > 0
    if nonempty.any():
        starts = s.indptr[:-1][nonempty]
        rowmax[nonempty] = np.maximum.reduceat(s.data, starts)
    row_of = np.repeat(np.arange(h), counts)
    hit = s.data == rowmax[row_of]  # stored entries are all > 0
    return RoundLinks(h, row_of[hit], s.indices[hit])


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]  # path halving
            x = p[x]
        return int(x)

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # attach larger root under smaller: keeps labels deterministic
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def link_components(links: RoundLinks, h: int) -> list[np.ndarray]:
    """Connected components of the link graph, arcs taken as undirected.

    Blocks without incident arcs become singleton groups. Groups are
    returned sorted ascending by their minimum member.
    """
    uf = _UnionFind(h)
    for a, b in zip(links.src, links.dst):
        uf.union(int(a), int(b))
    roots = np.fromiter((uf.find(i) for i in range(h)), dtype=np.int64, count=h)
    labels = canonical_relabel(roots) if h else roots
    order = np.argsort(labels, kind="stable")
    sizes = np.bincount(labels, minlength=int(labels.max()) + 1 if h else 0)
    return np.split(order, np.cumsum(sizes)[:-1]) if h else []


def _merge_one_round(graph: Graph, partition: Partition,
                     quotient: QuotientGraph, trace: RunTrace,
                     check_invariants: bool) -> tuple[Partition, QuotientGraph, bool]:
    """One linking round; returns (partition, quotient, merged_anything)."""
    t0 = time.perf_counter()
    table = similarity_table(quotient, partition.sizes)
    links = most_similar_links(table, partition.h)
    t1 = time.perf_counter()
    trace.phase_ms["similarity"] = trace.phase_ms.get("similarity", 0.0) + (t1 - t0) * 1e3
    if links.arc_count == 0:
        return partition, quotient, False
    groups = link_components(links, partition.h)
    if len(groups) == partition.h:
        return partition, quotient, False
    partition, quotient = merge_blocks(partition, quotient, groups)
    trace.phase_ms["merge"] = trace.phase_ms.get("merge", 0.0) + (time.perf_counter() - t1) * 1e3
    if check_invariants:
        check_conservation(quotient, graph)
    return partition, quotient, True


def xcz_run(graph: Graph, *, check_invariants: bool = False
            ) -> tuple[Partition, RunTrace]:
    """Full agglomeration from singletons down to one block.

    Records Q for the singleton division and after every merge round;
    stops at h = 1, or earlier when a round produces no merge (possible
    only for disconnected or all-zero-similarity inputs).
    """
    if graph.m == 0:
        raise NoEdgesError("no edges")
    t_start = time.perf_counter()
    m = graph.m
    partition = singleton_partition(graph)
    quotient = build_quotient(graph, partition)
    trace = RunTrace()
    best_key = modularity_key(quotient, m)
    best_partition = partition
    trace.rounds.append(RoundRecord(0, partition.h, modularity(quotient, m), "init"))
    rnd = 0
    while partition.h > 1:
        partition, quotient, merged = _merge_one_round(
            graph, partition, quotient, trace, check_invariants)
        if not merged:
            break
        rnd += 1
        key = modularity_key(quotient, m)
        trace.rounds.append(RoundRecord(rnd, partition.h, modularity(quotient, m)))
        if key > best_key:  # tie keeps the earlier round
            best_key = key
            best_partition = partition
            trace.best_round = rnd
    trace.best_q = best_key / (4.0 * m * m)
    trace.phase_ms["total"] = (time.perf_counter() - t_start) * 1e3
    return best_partition, trace


def xcz_one_round(graph: Graph) -> Partition:
    """A single linking round over the singleton division.

    On singletons the similarity degenerates to the node form
    (a_xy + n_xy)/sqrt(k_x k_y). Adjacent nodes always have s > 0, so
    every non-isolated node ends up in a block of at least two nodes;
    isolated nodes stay singletons.
    """
    if graph.m == 0:
        raise NoEdgesError("no edges")
    partition = singleton_partition(graph)
    quotient = build_quotient(graph, partition)
    table = similarity_table(quotient, partition.sizes)
    links = most_similar_links(table, partition.h)
    groups = link_components(links, partition.h)
    partition, _ = merge_blocks(partition, quotient, groups)
    return partition
