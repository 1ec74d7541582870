import numpy as np
import pytest

import commsim as cs
from commsim.partition import (check_conservation, modularity_key,
                               canonical_relabel)
from commsim.testkit import gnp_graph

from conftest import graph_from


def random_partition(rng, n, max_blocks):
    return cs.Partition.from_assignment(
        canonical_relabel(rng.integers(0, max_blocks, n)))


class TestSingleton:
    def test_six_nodes(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        assert p.h == 6
        assert p.sizes.tolist() == [1] * 6

    def test_empty_graph(self):
        g = cs.Graph(0, [])
        assert cs.singleton_partition(g).h == 0


class TestBuildQuotient:
    def test_two_triangles(self, two_triangles):
        p = cs.Partition.from_assignment([0, 0, 0, 1, 1, 1])
        q = cs.build_quotient(two_triangles, p)
        assert q.internal.tolist() == [3, 3]
        assert q.cross_count(0, 1) == 1
        assert q.dsum.tolist() == [7, 7]

    def test_singleton_degenerates_to_graph(self, two_triangles):
        g = two_triangles
        q = cs.build_quotient(g, cs.singleton_partition(g))
        assert (q.internal == 0).all()
        assert np.array_equal(q.dsum, g.degrees)
        for u, v in g.edge_array:
            assert q.cross_count(int(u), int(v)) == 1
        assert not q.cross_count(0, 4)

    def test_one_block(self, two_triangles):
        g = two_triangles
        q = cs.build_quotient(g, cs.Partition.from_assignment([0] * 6))
        assert q.internal.tolist() == [g.m]
        assert q.dsum.tolist() == [2 * g.m]

    def test_out_of_range_assignment_rejected(self, two_triangles):
        bad = cs.Partition(np.array([0, 0, 0, 1, 1, 5]), 2, np.array([3, 3]))
        with pytest.raises(ValueError):
            cs.build_quotient(two_triangles, bad)


class TestModularity:
    def test_one_block_is_zero(self, two_triangles):
        q = cs.build_quotient(two_triangles, cs.Partition.from_assignment([0] * 6))
        assert cs.modularity(q, two_triangles.m) == 0.0

    def test_two_triangles_value(self, two_triangles):
        p = cs.Partition.from_assignment([0, 0, 0, 1, 1, 1])
        q = cs.build_quotient(two_triangles, p)
        assert cs.modularity(q, 7) == pytest.approx(5 / 14, abs=1e-15)

    def test_m_zero_undefined(self):
        g = cs.Graph(3, [])
        q = cs.build_quotient(g, cs.singleton_partition(g))
        assert cs.modularity(q, 0) is None

    def test_singleton_closed_form(self):
        rng = np.random.default_rng(3)
        for seed in range(10):
            g = gnp_graph(12, 0.3, seed)
            if g.m == 0:
                continue
            q = cs.build_quotient(g, cs.singleton_partition(g))
            expected = -sum((int(k) / (2 * g.m)) ** 2 for k in g.degrees)
            assert cs.modularity(q, g.m) == pytest.approx(expected, abs=1e-14)


class TestDeltaQ:
    def test_two_triangles_merge(self, two_triangles):
        p = cs.Partition.from_assignment([0, 0, 0, 1, 1, 1])
        q = cs.build_quotient(two_triangles, p)
        assert cs.delta_q(q, 7, 0, 1) == pytest.approx(-5 / 14, abs=1e-15)

    def test_disconnected_blocks_never_gain(self):
        g = graph_from("a b\nc d\n")
        q = cs.build_quotient(g, cs.Partition.from_assignment([0, 0, 1, 1]))
        assert cs.delta_q(q, g.m, 0, 1) < 0

    def test_single_edge_graph(self):
        g = graph_from("a b\n")
        q = cs.build_quotient(g, cs.singleton_partition(g))
        assert cs.delta_q(q, 1, 0, 1) == pytest.approx(0.5, abs=1e-15)

    def test_equal_blocks_rejected(self, two_triangles):
        q = cs.build_quotient(two_triangles,
                              cs.Partition.from_assignment([0, 0, 0, 1, 1, 1]))
        with pytest.raises(ValueError):
            cs.delta_q(q, 7, 1, 1)

    def test_matches_modularity_difference(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 200:
            g = gnp_graph(14, 0.3, int(rng.integers(1 << 30)))
            if g.m == 0:
                continue
            p = random_partition(rng, g.n, 5)
            if p.h < 2:
                continue
            q = cs.build_quotient(g, p)
            i, j = rng.choice(p.h, size=2, replace=False)
            i, j = int(i), int(j)
            before = cs.modularity(q, g.m)
            groups = [{i, j}] + [{k} for k in range(p.h) if k not in (i, j)]
            _, q2 = cs.merge_blocks(p, q, groups)
            after = cs.modularity(q2, g.m)
            assert after - before == pytest.approx(cs.delta_q(q, g.m, i, j),
                                                   abs=1e-12)
            checked += 1


class TestMergeBlocks:
    def test_all_singletons_identity(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        p2, q2 = cs.merge_blocks(p, q, [{i} for i in range(6)])
        assert np.array_equal(p2.assignment, p.assignment)
        assert q2.edge_total() == q.edge_total()

    def test_two_groups(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        p2, q2 = cs.merge_blocks(p, q, [{0, 1, 2, 3}, {4, 5}])
        assert p2.h == 2
        assert p2.sizes.tolist() == [4, 2]

    def test_merge_everything(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        p2, q2 = cs.merge_blocks(p, q, [set(range(6))])
        assert p2.h == 1
        assert q2.internal.tolist() == [7]
        assert q2.dsum.tolist() == [14]

    def test_overlapping_groups_rejected(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        with pytest.raises(ValueError):
            cs.merge_blocks(p, q, [{0, 1}, {1, 2}, {3}, {4}, {5}])

    def test_incomplete_cover_rejected(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        with pytest.raises(ValueError):
            cs.merge_blocks(p, q, [{0, 1}])

    def test_relabel_by_minimum_old_id(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        p2, _ = cs.merge_blocks(p, q, [{4, 5}, {0, 3}, {1, 2}])
        # group mins 0 < 1 < 4 decide the new ids
        assert p2.assignment.tolist() == [0, 1, 1, 0, 2, 2]

    def test_aggregation_matches_rebuild(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            g = gnp_graph(16, 0.25, int(rng.integers(1 << 30)))
            p = random_partition(rng, g.n, 6)
            q = cs.build_quotient(g, p)
            # random disjoint grouping of the blocks
            raw = canonical_relabel(rng.integers(0, max(2, p.h // 2), p.h))
            groups = [set(np.flatnonzero(raw == b)) for b in range(raw.max() + 1)]
            p2, q2 = cs.merge_blocks(p, q, groups)
            rebuilt = cs.build_quotient(g, p2)
            assert np.array_equal(q2.internal, rebuilt.internal)
            assert np.array_equal(q2.dsum, rebuilt.dsum)
            assert (q2.cross != rebuilt.cross).nnz == 0
            check_conservation(q2, g)

    def test_conservation_after_merge(self, two_triangles):
        p = cs.singleton_partition(two_triangles)
        q = cs.build_quotient(two_triangles, p)
        p2, q2 = cs.merge_blocks(p, q, [{0, 1, 2}, {3, 4, 5}])
        check_conservation(q2, two_triangles)
        assert modularity_key(q2, 7) == 4 * 7 * 6 - (7 ** 2 + 7 ** 2)
