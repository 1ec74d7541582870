"""Brute-force oracles and synthetic graph generators.

Everything here is deliberately naive and independent of the production
code paths it is used to check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt
from typing import Iterator

import numpy as np

from .graphs import Graph
from .partition import Partition, QuotientGraph
from .similarity import SimilarityTable


def _partition_quality_key(graph: Graph, assignment: np.ndarray) -> int:
    """4*m*sum(e_ii) - sum(d_i^2), computed straight from the edge list."""
    m = graph.m
    h = int(assignment.max()) + 1 if assignment.size else 0
    internal = [0] * h
    dsum = [0] * h
    for u, v in graph.edge_array:
        if assignment[u] == assignment[v]:
            internal[assignment[u]] += 1
    for x in range(graph.n):
        dsum[assignment[x]] += graph.degree(x)
    return 4 * m * sum(internal) - sum(di * di for di in dsum)


def _set_partitions(n: int) -> Iterator[np.ndarray]:
    """All set partitions of 0..n-1 as restricted-growth strings."""
    a = np.zeros(n, dtype=np.int64)
    b = np.ones(n, dtype=np.int64)  # b[i] = 1 + max(a[:i]); b[0] unused
    while True:
        yield a.copy()
        for i in range(n - 1, 0, -1):
            if a[i] < b[i]:
                a[i] += 1
                nb = max(int(b[i]), int(a[i]) + 1)
                for j in range(i + 1, n):
                    a[j] = 0
                    b[j] = nb
                break
        else:
            return


@lru_cache(maxsize=None)
def _all_partitions_matrix(n: int) -> np.ndarray:
    """All restricted-growth strings of length n, stacked in enumeration order."""
    return np.array(list(_set_partitions(n)), dtype=np.int64)


def brute_force_best_partition(graph: Graph) -> tuple[Partition, float]:
    """Globally optimal division by exhaustive enumeration (n <= 12).

    Deterministic: among equal-Q optima the first in restricted-growth
    enumeration order wins. The quality of every candidate is evaluated
    with the exact integer key 4*m*sum(e_ii) - sum(d_i^2), vectorized over
    the whole enumeration:
      sum(e_ii)  = number of edges whose endpoints share a block,
      sum(d_i^2) = sum_x k_x^2 + 2 * sum_{x<y} k_x k_y [block_x == block_y].
    """
    if graph.n > 12:
        raise ValueError("brute force refused for n > 12")
    if graph.m == 0:
        raise ValueError("modularity undefined for m = 0")
    parts = _all_partitions_matrix(graph.n)
    deg = graph.degrees
    sum_int = np.zeros(parts.shape[0], dtype=np.int64)
    for u, v in graph.edge_array:
        sum_int += parts[:, u] == parts[:, v]
    sum_dsq = np.full(parts.shape[0], int((deg.astype(np.int64) ** 2).sum()),
                      dtype=np.int64)
    for x in range(graph.n):
        for y in range(x + 1, graph.n):
            sum_dsq += 2 * int(deg[x]) * int(deg[y]) * (parts[:, x] == parts[:, y])
    key = 4 * graph.m * sum_int - sum_dsq
    best = int(np.argmax(key))  # first maximum, i.e. earliest in enumeration
    q = int(key[best]) / (4.0 * graph.m * graph.m)
    return Partition.from_assignment(parts[best]), q


def naive_similarity(quotient: QuotientGraph, sizes: np.ndarray) -> SimilarityTable:
    """Direct O(h^3) evaluation of the pair-similarity formula."""
    h = quotient.h
    if h > 200:
        raise ValueError("naive similarity refused for h > 200")
    sizes = np.asarray(sizes)
    e = quotient.cross.toarray()
    d = quotient.dsum
    rows, cols, vals = [], [], []
    for i in range(h):
        for j in range(i + 1, h):
            if d[i] == 0 or d[j] == 0:
                continue
            num = float(e[i, j])
            for k in range(h):
                if k == i or k == j:
                    continue
                num += sqrt(int(e[i, k]) * int(e[k, j])) / int(sizes[k])
            s = num / sqrt(int(d[i]) * int(d[j]))
            if s > 0:
                rows.append(i)
                cols.append(j)
                vals.append(s)
    return SimilarityTable(h, np.array(rows, dtype=np.int64),
                           np.array(cols, dtype=np.int64), np.array(vals))


@dataclass(frozen=True)
class PlantedPartitionSpec:
    """Parameters for a planted-partition (stochastic block) graph."""

    blocks: int
    block_size: int
    p_in: float
    p_out: float
    seed: int

    def __post_init__(self):
        if not (0 <= self.p_out < self.p_in <= 1):
            raise ValueError("need 0 <= p_out < p_in <= 1")
        if self.blocks < 1 or self.block_size < 1:
            raise ValueError("blocks and block_size must be positive")

    @property
    def n(self) -> int:
        return self.blocks * self.block_size


def _sample_indices(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Uniform sample of distinct indices from range(total), each kept
    independently with probability p. Draws with replacement and tops up,
    which is exact for the induced set distribution and never materializes
    the full range."""
    if total == 0 or p == 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    want = int(rng.binomial(total, p))
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < want:
        extra = rng.integers(0, total, size=2 * (want - chosen.size))
        chosen = np.unique(np.concatenate([chosen, extra]))
    if chosen.size > want:
        chosen = rng.permutation(chosen)[:want]
        chosen.sort()
    return chosen.astype(np.int64)


def planted_partition(spec: PlantedPartitionSpec) -> Graph:
    """Deterministic planted-partition graph.

    Node x belongs to planted block x // block_size. The random stream is
    numpy's PCG64 seeded with spec.seed; block pairs are visited in a
    fixed order ((b,b) diagonals ascending, then (b1,b2) off-diagonals in
    lexicographic order), so a spec always produces the same graph.
    """
    rng = np.random.default_rng(np.random.PCG64(spec.seed))
    size = spec.block_size
    edges = []
    for b in range(spec.blocks):
        base = b * size
        total = size * (size - 1) // 2
        idx = _sample_indices(rng, total, spec.p_in)
        if idx.size:
            # decode triangular index -> (u, v), u < v, within the block
            v = (np.floor((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) / 2)).astype(np.int64)
            # guard float rounding at triangle boundaries
            v_lo = v * (v - 1) // 2
            v = np.where(v_lo > idx, v - 1, v)
            v = np.where((v + 1) * v // 2 <= idx, v + 1, v)
            u = idx - v * (v - 1) // 2
            edges.append(np.column_stack([base + u, base + v]))
    for b1 in range(spec.blocks):
        for b2 in range(b1 + 1, spec.blocks):
            total = size * size
            idx = _sample_indices(rng, total, spec.p_out)
            if idx.size:
                u = b1 * size + idx // size
                v = b2 * size + idx % size
                edges.append(np.column_stack([u, v]))
    all_edges = np.vstack(edges) if edges else np.empty((0, 2), np.int64)
    return Graph(spec.n, all_edges)


def planted_labels(spec: PlantedPartitionSpec) -> np.ndarray:
    return np.arange(spec.n, dtype=np.int64) // spec.block_size


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi style graph via a one-block planted spec."""
    if p == 0.0:
        return Graph(n, np.empty((0, 2), np.int64))
    return planted_partition(PlantedPartitionSpec(1, n, p, 0.0, seed))
