"""Greedy modularity maximization and the hybrid driver.

Repeatedly merges the adjacent pair of communities with the largest
modularity gain, continuing past negative gains until every connected
component has collapsed to one community, and returns the division of
maximal Q along the way. Ties in the gain are broken by smallest (i, j)
lexicographically, so runs are deterministic.

The plain greedy start is known to be rough in its early stage: with all
communities still tiny the gain is dominated by the degree-product term,
which favors gluing low-degree nodes together, and those early mistakes
are never corrected. The hybrid driver therefore runs one most-similar
linking round first (node-level similarity), then the greedy merge on the
resulting blocks.
"""
from __future__ import annotations

import heapq
import time

import numpy as np

from .agglom import RoundRecord, RunTrace, xcz_one_round
from .graphs import Graph, NoEdgesError
from .partition import (Partition, build_quotient, canonical_relabel,
                        check_conservation, modularity_key,
                        singleton_partition)


def _gain_key(e: int, di: int, dj: int, m: int) -> float:
    """delta-Q of merging: e/m - 2 (d_i/2m)(d_j/2m), from integer counts."""
    return e / m - (di * dj) / (2.0 * m * m)


def cnm_run(graph: Graph, initial: Partition | None = None, *,
            check_invariants: bool = False, phase: str = "greedy"
            ) -> tuple[Partition, RunTrace]:
    """Greedy merging from `initial` (singletons by default).

    Q is tracked in exact integer form (edge counts and degree sums), so
    the reported best cannot drift however many merges happen; floats
    appear only in the heap keys. The initial division itself is a
    candidate for best.
    """
    if graph.m == 0:
        raise NoEdgesError("no edges")
    t_start = time.perf_counter()
    m = graph.m
    if initial is None:
        initial = singleton_partition(graph)
    quotient = build_quotient(graph, initial)
    h = initial.h

    # live community state, keyed by initial block id; merged pair keeps
    # the smaller label
    nbr: list[dict[int, int]] = [dict() for _ in range(h)]
    for i in range(h):
        ids, counts = quotient.quotient_neighbors(i)
        nbr[i] = dict(zip(ids.tolist(), counts.tolist()))
    d = quotient.dsum.astype(np.int64).tolist()
    alive = [True] * h

    sum_int = int(quotient.internal.sum())
    sum_dsq = sum(x * x for x in d)

    # per-row best pair, plus one heap entry per row-best change;
    # rowver invalidates superseded entries lazily
    NEG_INF = float("-inf")
    rowbest_v = [NEG_INF] * h
    rowbest_p = [-1] * h
    rowver = [0] * h
    heap: list[tuple[float, int, int, int, int]] = []

    def _rescan(r: int) -> None:
        """Recompute row r's best: max gain, ties to smallest (i, j) pair."""
        best_v, best_p = NEG_INF, -1
        dr = d[r]
        for p, e in nbr[r].items():
            v = _gain_key(e, dr, d[p], m)
            if v > best_v or (v == best_v and
                              min(r, p) * h + max(r, p) <
                              min(r, best_p) * h + max(r, best_p)):
                best_v, best_p = v, p
        rowbest_v[r], rowbest_p[r] = best_v, best_p

    def _push(r: int) -> None:
        p = rowbest_p[r]
        a, b = (r, p) if r < p else (p, r)
        heapq.heappush(heap, (-rowbest_v[r], a, b, r, rowver[r]))

    for i in range(h):
        if nbr[i]:
            _rescan(i)
            _push(i)

    def _compact() -> None:
        # drop stale lazy-deleted entries so memory stays bounded
        live = [entry for entry in heap
                if alive[entry[1]] and alive[entry[2]]
                and rowver[entry[3]] == entry[4]]
        heap.clear()
        heap.extend(live)
        heapq.heapify(heap)

    compact_limit = max(4 * len(heap), 1 << 20)

    trace = RunTrace()
    q0 = (4 * m * sum_int - sum_dsq) / (4.0 * m * m)
    trace.rounds.append(RoundRecord(0, h, q0, "init"))
    best_key = 4 * m * sum_int - sum_dsq
    best_step = 0
    merges: list[tuple[int, int]] = []
    live_count = h

    while heap:
        neg_dq, i, j, owner, ver = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or rowver[owner] != ver:
            continue
        e_ij = nbr[i][j]
        # merge j into i (i < j by construction)
        merges.append((i, j))
        live_count -= 1
        sum_int += e_ij
        sum_dsq += 2 * d[i] * d[j]  # (di+dj)^2 - di^2 - dj^2
        alive[j] = False
        rowver[i] += 1
        rowver[j] += 1
        del nbr[i][j]
        del nbr[j][i]
        for k, e in nbr[j].items():
            nbr[i][k] = nbr[i].get(k, 0) + e
            del nbr[k][j]
        d[i] += d[j]
        nbr[j].clear()
        di = d[i]
        best_v, best_p = NEG_INF, -1
        for k, e in nbr[i].items():
            nbr[k][i] = e
            v = _gain_key(e, di, d[k], m)
            # row i's best, ties to smallest normalized pair
            if v > best_v or (v == best_v and
                              min(i, k) * h + max(i, k) <
                              min(i, best_p) * h + max(i, best_p)):
                best_v, best_p = v, k
            # neighbor k: its gain toward the merged community changed
            bp = rowbest_p[k]
            if bp == i or bp == j:
                _rescan(k)
                rowver[k] += 1
                _push(k)
            elif v > rowbest_v[k]:
                rowbest_v[k], rowbest_p[k] = v, i
                rowver[k] += 1
                _push(k)
            elif v == rowbest_v[k] and \
                    min(i, k) * h + max(i, k) < min(k, bp) * h + max(k, bp):
                rowbest_p[k] = i
                rowver[k] += 1
                _push(k)
            # else: k's cached best is unchanged and still valid
        rowbest_v[i], rowbest_p[i] = best_v, best_p
        if best_p >= 0:
            _push(i)
        if len(heap) > compact_limit:
            _compact()
            compact_limit = max(4 * len(heap), 1 << 20)
        step = len(merges)
        trace.rounds.append(RoundRecord(
            step, live_count, (4 * m * sum_int - sum_dsq) / (4.0 * m * m), phase))
        key = 4 * m * sum_int - sum_dsq
        if key > best_key:  # tie keeps the earlier division
            best_key = key
            best_step = step
        if check_invariants:
            live = [c for c in range(h) if alive[c]]
            cross_total = sum(sum(nbr[c].values()) for c in live) // 2
            internal_total = sum_int
            if internal_total + cross_total != m:
                raise AssertionError("quotient edge counts do not sum to m")
            if sum(d[c] for c in live) != 2 * m:
                raise AssertionError("quotient degree sums do not total 2m")

    trace.best_round = best_step
    trace.best_q = best_key / (4.0 * m * m)
    best_partition = _replay(initial, merges[:best_step])
    trace.phase_ms[phase] = (time.perf_counter() - t_start) * 1e3
    trace.phase_ms["total"] = trace.phase_ms[phase]
    return best_partition, trace


def _replay(initial: Partition, merges: list[tuple[int, int]]) -> Partition:
    """Apply a merge prefix to the initial division; relabel canonically."""
    parent = np.arange(initial.h, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = int(parent[x])
        return x

    for i, j in merges:
        parent[find(j)] = find(i)
    roots = np.fromiter((find(int(b)) for b in initial.assignment),
                        dtype=np.int64, count=initial.assignment.size)
    return Partition.from_assignment(canonical_relabel(roots))


def hybrid_run(graph: Graph, *, check_invariants: bool = False
               ) -> tuple[Partition, RunTrace]:
    """One most-similar linking round, then greedy merging to the end.

    Best Q is taken over every recorded division, including the one-round
    division itself (it is the greedy phase's initial candidate).
    """
    if graph.m == 0:
        raise NoEdgesError("no edges")
    t0 = time.perf_counter()
    presort = xcz_one_round(graph)
    t1 = time.perf_counter()
    best, trace = cnm_run(graph, presort, check_invariants=check_invariants)
    for record in trace.rounds:
        if record.phase == "init":
            record.phase = "linking"
    trace.phase_ms["linking"] = (t1 - t0) * 1e3
    trace.phase_ms["total"] = (time.perf_counter() - t0) * 1e3
    return best, trace
