"""Structural similarity between blocks of a division.

s_ij = (e_ij + sum_k sqrt(e_ik e_kj)/|V_k|) / sqrt(d_i d_j), with e_ii = 0
by convention, so the k-sum needs only common quotient neighbors and s_ij
is nonzero only within quotient distance 2. On a singleton division the
measure degenerates to (a_xy + n_xy)/sqrt(k_x k_y), the Salton (cosine)
index when x and y are not adjacent.

Blocks whose degree sum is zero get s = 0 to everything: isolated nodes
attach to nothing and stay their own communities.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterator

import numpy as np
from scipy import sparse

from .graphs import Graph
from .partition import QuotientGraph


@dataclass
class SimilarityTable:
    """Sparse symmetric s values, stored once per pair with i < j ascending."""

    h: int
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray

    def __len__(self) -> int:
        return int(self.row.size)

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        for i, j, s in zip(self.row, self.col, self.val):
            yield int(i), int(j), float(s)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        a, b = (i, j) if i < j else (j, i)
        hits = np.flatnonzero((self.row == a) & (self.col == b))
        return float(self.val[hits[0]]) if hits.size else 0.0

    def symmetric_csr(self) -> sparse.csr_matrix:
        """Full symmetric matrix; mirrored entries are bit-identical."""
        upper = sparse.coo_matrix((self.val, (self.row, self.col)),
                                  shape=(self.h, self.h))
        return (upper + upper.T).tocsr()


def subgraph_similarity(quotient: QuotientGraph, sizes: np.ndarray,
                        i: int, j: int) -> float:
    """Evaluate s_ij for one pair.

    Iterates the sorted intersection of the two quotient neighbor lists, so
    the summation order is identical for (i, j) and (j, i) and the result
    is bit-for-bit symmetric. sqrt is taken of the integer product, which
    stays below 2^63 for every supported graph size.
    """
    if i == j:
        raise ValueError("subgraph_similarity requires i != j")
    di, dj = int(quotient.dsum[i]), int(quotient.dsum[j])
    if di == 0 or dj == 0:
        return 0.0
    ni, ei = quotient.quotient_neighbors(i)
    nj, ej = quotient.quotient_neighbors(j)
    e_ij = 0
    pos = np.searchsorted(nj, i)
    if pos < nj.size and nj[pos] == i:
        e_ij = int(ej[pos])
    common, ia, ja = np.intersect1d(ni, nj, assume_unique=True,
                                    return_indices=True)
    numerator = float(e_ij)
    for k_idx in np.argsort(common):  # ascending k
        k = int(common[k_idx])
        if k == i or k == j:
            continue  # e_ii = e_jj = 0 by convention
        numerator += sqrt(int(ei[ia[k_idx]]) * int(ej[ja[k_idx]])) / int(sizes[k])
    return numerator / sqrt(di * dj)


def node_similarity(graph: Graph, x: int, y: int) -> float:
    """Degenerate form on single nodes: (a_xy + n_xy)/sqrt(k_x k_y)."""
    if x == y:
        raise ValueError("node_similarity requires x != y")
    kx, ky = graph.degree(x), graph.degree(y)
    if kx == 0 or ky == 0:
        return 0.0
    a_xy = 1 if graph.has_edge(x, y) else 0
    n_xy = np.intersect1d(graph.neighbors(x), graph.neighbors(y),
                          assume_unique=True).size
    return (a_xy + n_xy) / sqrt(kx * ky)


def _candidate_structure(quotient: QuotientGraph) -> sparse.csr_matrix:
    """Boolean pattern of pairs within quotient distance 2 (diagonal zeroed)."""
    w = quotient.cross.astype(bool).astype(np.int64)
    pattern = (w + w @ w).tocsr()
    pattern.setdiag(0)
    pattern.eliminate_zeros()
    return pattern


def candidate_pairs(quotient: QuotientGraph) -> Iterator[tuple[int, int]]:
    """Unordered pairs with e_ij > 0 or a common quotient neighbor.

    Each pair exactly once, ascending (i, j); no pair outside distance 2.
    """
    upper = sparse.triu(_candidate_structure(quotient), k=1).tocoo()
    order = np.lexsort((upper.col, upper.row))
    for i, j in zip(upper.row[order], upper.col[order]):
        yield int(i), int(j)


def similarity_table(quotient: QuotientGraph, sizes: np.ndarray) -> SimilarityTable:
    """All positive s values over the candidate pairs, via sparse algebra.

    numerator matrix = E + F D^-1 F with F = elementwise sqrt of E and
    D = diag(|V_k|); the result is scaled by 1/sqrt(d_i d_j) and the upper
    triangle is kept, so stored values are canonical and symmetric by
    construction.
    """
    h = quotient.h
    sizes = np.asarray(sizes)
    if h == 0:
        empty = np.empty(0)
        return SimilarityTable(0, empty.astype(np.int64),
                               empty.astype(np.int64), empty)
    f = quotient.cross.astype(np.float64)
    f.data = np.sqrt(f.data)
    inv_sizes = sparse.diags(1.0 / sizes.astype(np.float64), format="csr")
    numerator = (quotient.cross.astype(np.float64) + f @ inv_sizes @ f).tocsr()
    numerator.setdiag(0.0)
    dscale = np.zeros(h)
    nonzero = quotient.dsum > 0
    dscale[nonzero] = 1.0 / np.sqrt(quotient.dsum[nonzero].astype(np.float64))
    scale = sparse.diags(dscale, format="csr")
    s = (scale @ numerator @ scale).tocoo()
    keep = (s.row < s.col) & (s.data > 0)
    row, col, val = s.row[keep], s.col[keep], s.data[keep]
    order = np.lexsort((col, row))
    return SimilarityTable(h, row[order].astype(np.int64),
                           col[order].astype(np.int64), val[order])
