"""Divisions of the node set, quotient graphs, and modularity.

Modularity uses the fraction convention Q = sum_i(e_ii/m - (d_i/2m)^2),
which reproduces published greedy-merge values; several conventions exist
in the literature. Edge counts stay integers throughout; floating point
enters only when a Q or delta-Q value is actually evaluated, so repeated
merges cannot drift.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from .graphs import Graph


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to exactly one of h blocks (ids 0..h-1)."""

    assignment: np.ndarray  # int64, length n
    h: int
    sizes: np.ndarray  # int64, length h, all >= 1

    @classmethod
    def from_assignment(cls, assignment: np.ndarray) -> "Partition":
        assignment = np.asarray(assignment, dtype=np.int64)
        h = int(assignment.max()) + 1 if assignment.size else 0
        sizes = np.bincount(assignment, minlength=h).astype(np.int64)
        if h and (sizes == 0).any():
            raise ValueError("block ids not dense: empty block present")
        return cls(assignment, h, sizes)

    def blocks(self) -> list[np.ndarray]:
        """Member node ids per block, each sorted ascending."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(self.sizes)
        return np.split(order, bounds[:-1])


def canonical_relabel(raw: np.ndarray) -> np.ndarray:
    """Renumber arbitrary block labels densely by first occurrence.

    Scanning nodes in ascending id order, first occurrence equals the
    block's minimum member, so this is the relabel-by-minimum rule.
    """
    raw = np.asarray(raw, dtype=np.int64)
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty(order.size, dtype=np.int64)
    remap[order] = np.arange(order.size)
    _, inverse = np.unique(raw, return_inverse=True)
    return remap[inverse]


class QuotientGraph:
    """Weighted graph over the blocks of a partition.

    cross holds e_ij for i != j as a symmetric sparse int matrix with zero
    diagonal; internal edge counts e_ii and degree sums d_i are dense
    arrays. For the similarity formula e_ij is zero when i = j; internal
    counts exist only for modularity.
    """

    __slots__ = ("h", "cross", "internal", "dsum")

    def __init__(self, h: int, cross: sparse.csr_matrix, internal: np.ndarray,
                 dsum: np.ndarray):
        self.h = int(h)
        self.cross = cross  # int64 csr, symmetric, zero diagonal
        self.internal = np.asarray(internal, dtype=np.int64)
        self.dsum = np.asarray(dsum, dtype=np.int64)

    def cross_count(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return int(self.cross[i, j])

    def cross_pairs(self) -> Iterator[tuple[int, int, int]]:
        """(i, j, e_ij) for i < j with e_ij > 0, ascending."""
        upper = sparse.triu(self.cross, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        for i, j, e in zip(upper.row[order], upper.col[order], upper.data[order]):
            yield int(i), int(j), int(e)

    def quotient_neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, e counts) for block i, ids ascending."""
        lo, hi = self.cross.indptr[i], self.cross.indptr[i + 1]
        return self.cross.indices[lo:hi], self.cross.data[lo:hi]

    def edge_total(self) -> int:
        """sum e_ii + sum_{i<j} e_ij; equals m for a valid quotient."""
        return int(self.internal.sum()) + int(self.cross.sum()) // 2


def singleton_partition(graph: Graph) -> Partition:
    n = graph.n
    return Partition(np.arange(n, dtype=np.int64), n,
                     np.ones(n, dtype=np.int64))


def build_quotient(graph: Graph, partition: Partition) -> QuotientGraph:
    """Classify every edge as internal or cross in one pass."""
    assign = partition.assignment
    if assign.size != graph.n:
        raise ValueError("partition does not cover the graph's nodes")
    if assign.size and (assign.min() < 0 or assign.max() >= partition.h):
        raise ValueError("block id out of range")
    h = partition.h
    edges = graph.edge_array
    a, b = assign[edges[:, 0]], assign[edges[:, 1]]
    inside = a == b
    internal = np.bincount(a[inside], minlength=h).astype(np.int64)
    lo = np.minimum(a[~inside], b[~inside])
    hi = np.maximum(a[~inside], b[~inside])
    upper = sparse.coo_matrix(
        (np.ones(lo.size, dtype=np.int64), (lo, hi)), shape=(h, h)).tocsr()
    cross = (upper + upper.T).tocsr()
    dsum = np.zeros(h, dtype=np.int64)
    np.add.at(dsum, assign, graph.degrees)
    return QuotientGraph(h, cross, internal, dsum)


def modularity_key(quotient: QuotientGraph, m: int) -> int:
    """Exact integer surrogate for Q: 4*m*sum(e_ii) - sum(d_i^2).

    Monotone in Q (Q = key / (4 m^2)); use for bit-deterministic
    comparisons and best-division tracking.
    """
    sum_int = int(quotient.internal.sum())
    sum_dsq = int((quotient.dsum.astype(object) ** 2).sum()) if quotient.h else 0
    return 4 * m * sum_int - sum_dsq


def modularity(quotient: QuotientGraph, m: int) -> float | None:
    """Q = sum_i (e_ii/m - (d_i/2m)^2); None when m = 0 (undefined)."""
    if m == 0:
        return None
    return modularity_key(quotient, m) / (4.0 * m * m)


def delta_q(quotient: QuotientGraph, m: int, i: int, j: int) -> float:
    """Modularity gain of merging blocks i and j.

    e_ij/m - 2 (d_i/2m)(d_j/2m); exactly the Q difference of the merge.
    """
    if i == j:
        raise ValueError("delta_q requires i != j")
    if m == 0:
        raise ValueError("delta_q undefined for m = 0")
    e = quotient.cross_count(i, j)
    di, dj = int(quotient.dsum[i]), int(quotient.dsum[j])
    return e / m - (di * dj) / (2.0 * m * m)


def merge_blocks(partition: Partition, quotient: QuotientGraph,
                 groups: Sequence[Iterable[int]]) -> tuple[Partition, QuotientGraph]:
    """Coarsen: each group of block ids becomes one block.

    Groups must be disjoint and cover 0..h-1 (singletons allowed). New ids
    follow ascending order of each group's minimum old id, which makes
    every run bit-deterministic. The new quotient is aggregated from the
    old one, never recomputed from graph edges.
    """
    h = partition.h
    seen = np.zeros(h, dtype=bool)
    group_lists = [sorted(int(i) for i in g) for g in groups]
    for g in group_lists:
        for i in g:
            if i < 0 or i >= h:
                raise ValueError(f"block id {i} out of range")
            if seen[i]:
                raise ValueError(f"block id {i} in more than one group")
            seen[i] = True
    if not seen.all():
        raise ValueError("groups do not cover every block id")
    group_lists.sort(key=lambda g: g[0])
    hp = len(group_lists)
    old_to_new = np.empty(h, dtype=np.int64)
    for new_id, g in enumerate(group_lists):
        old_to_new[g] = new_id

    new_assign = old_to_new[partition.assignment]
    new_sizes = np.zeros(hp, dtype=np.int64)
    np.add.at(new_sizes, old_to_new, partition.sizes)

    # contract cross + 2*internal on the diagonal, then split back
    proj = sparse.csr_matrix(
        (np.ones(h, dtype=np.int64), (np.arange(h), old_to_new)), shape=(h, hp))
    full = quotient.cross + sparse.diags(2 * quotient.internal, format="csr",
                                         dtype=np.int64)
    contracted = (proj.T @ full @ proj).tocsr()
    new_internal = contracted.diagonal() // 2
    new_cross = contracted - sparse.diags(contracted.diagonal(), format="csr",
                                          dtype=np.int64)
    new_cross.eliminate_zeros()
    new_dsum = np.zeros(hp, dtype=np.int64)
    np.add.at(new_dsum, old_to_new, quotient.dsum)
    return (Partition(new_assign, hp, new_sizes),
            QuotientGraph(hp, new_cross.tocsr(), new_internal, new_dsum))


def check_conservation(quotient: QuotientGraph, graph: Graph) -> None:
    """Assert sum e_ii + sum_{i<j} e_ij = m and sum d_i = 2m, exactly."""
    if quotient.edge_total() != graph.m:
        raise AssertionError("quotient edge counts do not sum to m")
    if int(quotient.dsum.sum()) != 2 * graph.m:
        raise AssertionError("quotient degree sums do not total 2m")
    if quotient.h and (int(quotient.dsum.min()) < 0 or
                       (quotient.dsum != 2 * quotient.internal +
                        np.asarray(quotient.cross.sum(axis=1)).ravel()).any()):
        raise AssertionError("d_i != 2 e_ii + sum_j e_ij for some block")
