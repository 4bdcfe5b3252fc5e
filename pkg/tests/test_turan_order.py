"""Codegree diagnostics and the left-sparse ordering with its per-step certificate."""

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given

from nibblebench import (
    Graph,
    VertexSet,
    codegree_profile,
    induced,
    left_sparse_ordering,
    star_extension_floor,
    triangle_count,
    triangles_through,
    verify_left_sparsity,
)

from conftest import PROPERTY_SETTINGS, graphs, random_graph
from oracles import codegree_oracle, left_tri_oracle


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


class TestCodegreeProfile:
    def test_k4_frozen(self):
        prof = codegree_profile(complete(4))
        assert np.all(prof.q == 2)
        assert prof.total == 12 == 3 * triangle_count(complete(4))
        assert prof.max_value == 2
        assert prof.histogram() == {2: 6}

    def test_triangle_free_all_zero(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        prof = codegree_profile(g)
        assert np.all(prof.q == 0)
        assert prof.max_value == 0

    def test_empty_graph(self):
        prof = codegree_profile(Graph.from_edges(3, []))
        assert prof.q.size == 0
        assert prof.total == 0 and prof.max_value == 0

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_matches_pairwise_scan(self, g):
        prof = codegree_profile(g)
        oracle = codegree_oracle(g)
        assert len(oracle) == prof.edges.shape[0]
        for (u, v), q in zip(prof.edges.tolist(), prof.q.tolist()):
            assert oracle[(u, v)] == q
        assert prof.total == 3 * triangle_count(g)


class TestStarExtensionFloor:
    def test_frozen_values(self):
        assert star_extension_floor(codegree_profile(complete(4)), 1) == 12
        assert star_extension_floor(codegree_profile(complete(4)), 2) == 6
        assert star_extension_floor(codegree_profile(complete(5)), 3) == 10

    def test_triangle_free_is_zero(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        for t in (1, 2, 5):
            assert star_extension_floor(codegree_profile(g), t) == 0

    def test_rejects_bad_t(self):
        with pytest.raises(ValueError):
            star_extension_floor(codegree_profile(complete(3)), 0)

    def test_t1_recovers_codegree_sum(self):
        rng = np.random.default_rng(3)
        g = random_graph(rng, 20, 0.4)
        prof = codegree_profile(g)
        assert star_extension_floor(prof, 1) == prof.total


class TestLeftSparseOrdering:
    def test_k4_frozen(self):
        g = complete(4)
        o = left_sparse_ordering(g)
        along = [int(o.left_tri[v]) for v in o.order]
        assert along == [0, 0, 1, 3]
        assert int(o.left_tri.sum()) == 4

    def test_triangle_free_all_zero(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
        o = left_sparse_ordering(g)
        assert np.all(o.left_tri == 0)

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        g = random_graph(rng, 40, 0.2)
        a = left_sparse_ordering(g)
        b = left_sparse_ordering(g)
        assert np.array_equal(a.order, b.order)
        assert np.array_equal(a.left_tri, b.left_tri)

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_permutation_and_sum_identity(self, g):
        o = left_sparse_ordering(g)
        assert np.array_equal(np.sort(o.order), np.arange(g.n))
        assert int(o.left_tri.sum()) == triangle_count(g)

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_matches_rightmost_attribution_oracle(self, g):
        o = left_sparse_ordering(g)
        assert np.array_equal(o.left_tri, left_tri_oracle(g, o.order))

    @PROPERTY_SETTINGS
    @given(graphs(max_n=10))
    def test_per_step_averaging_certificate(self, g):
        # Replay the extraction: the vertex at position i was removed from the
        # residual graph on the first i+1 positions, and must have had at most
        # the average residual triangle load.
        o = left_sparse_ordering(g)
        for i in range(g.n - 1, -1, -1):
            sub = induced(g, VertexSet.from_indices(g.n, o.order[: i + 1]))
            pos_in_sub = int(np.searchsorted(np.sort(o.order[: i + 1]), o.order[i]))
            load = triangles_through(sub.graph, pos_in_sub)
            assert load * (i + 1) <= 3 * triangle_count(sub.graph)

    def test_positions_inverse(self):
        o = left_sparse_ordering(complete(4))
        pos = o.positions()
        assert np.array_equal(o.order[pos], np.arange(4))


class TestVerifyLeftSparsity:
    def test_k4_pass(self):
        g = complete(4)
        o = left_sparse_ordering(g)
        rep = verify_left_sparsity(g, o, bound=3)
        assert rep.passed and rep.max_left_tri == 3
        assert rep.left_tri_sum == rep.triangle_total == 4
        assert rep.stored_matches
        assert rep.violators == ()

    def test_k4_fail_names_violator(self):
        g = complete(4)
        o = left_sparse_ordering(g)
        rep = verify_left_sparsity(g, o, bound=2)
        assert not rep.passed
        assert rep.violators == (int(o.order[-1]),)

    def test_rejects_non_permutation(self):
        g = complete(3)
        o = left_sparse_ordering(g)
        bad = type(o)(order=np.array([0, 0, 2]), left_tri=o.left_tri)
        with pytest.raises(ValueError):
            verify_left_sparsity(g, bad, bound=5)

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_self_consistency(self, g):
        o = left_sparse_ordering(g)
        bound = int(o.left_tri.max()) if g.n else 0
        rep = verify_left_sparsity(g, o, bound=bound)
        assert rep.passed and rep.stored_matches
