"""Graph container, parser, and counting primitives against brute-force oracles."""

import io
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given

from nibblebench import (
    EdgeListError,
    Graph,
    InstanceTooLarge,
    VertexSet,
    common_neighbor_count,
    contains_kttt,
    degrees,
    exact_mis,
    from_edge_list,
    greedy_independent_set,
    induced,
    is_independent,
    triangle_count,
    triangles_through,
    write_edge_list,
)

from conftest import PROPERTY_SETTINGS, graphs, random_graph
from oracles import (
    independent_oracle,
    mis_size_subset,
    tri_count_all_triples,
    triangles_through_oracle,
)


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


class TestParser:
    def test_triangle(self):
        g = from_edge_list("3 3\n0 1\n1 2\n0 2")
        assert (g.n, g.m) == (3, 3)
        assert g.has_edge(0, 2) and g.has_edge(2, 0)

    def test_isolated_vertices(self):
        g = from_edge_list("2 0")
        assert (g.n, g.m) == (2, 0)

    def test_self_loop_rejected_with_line_number(self):
        with pytest.raises(EdgeListError) as exc:
            from_edge_list("2 1\n0 0")
        assert exc.value.line == 2
        assert "line 2" in str(exc.value)

    def test_duplicate_edge_rejected(self):
        with pytest.raises(EdgeListError) as exc:
            from_edge_list("3 2\n0 1\n1 0")
        assert exc.value.line == 3

    def test_out_of_range_id(self):
        with pytest.raises(EdgeListError) as exc:
            from_edge_list("2 1\n0 5")
        assert exc.value.line == 2

    def test_malformed_tokens(self):
        with pytest.raises(EdgeListError):
            from_edge_list("3 1\nx y")
        with pytest.raises(EdgeListError):
            from_edge_list("3 1\n0 1 2")

    def test_edge_count_mismatch(self):
        with pytest.raises(EdgeListError):
            from_edge_list("3 2\n0 1")

    def test_empty_input(self):
        with pytest.raises(EdgeListError) as exc:
            from_edge_list("")
        assert exc.value.line == 1

    def test_accepts_bytes_and_streams(self):
        for payload in (b"3 1\n0 2", io.StringIO("3 1\n0 2")):
            g = from_edge_list(payload)
            assert (g.n, g.m) == (3, 1)

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_roundtrip(self, g):
        buf = io.StringIO()
        write_edge_list(g, buf)
        h = from_edge_list(buf.getvalue())
        assert h.n == g.n
        assert np.array_equal(h.edge_array(), g.edge_array())


class TestGraphContainer:
    def test_adjacency_sorted_and_symmetric(self):
        g = Graph.from_edges(5, [(3, 1), (0, 4), (4, 1)])
        for v in range(5):
            nbrs = g.neighbors(v)
            assert np.all(np.diff(nbrs) > 0)
            for u in nbrs:
                assert g.has_edge(int(u), v)

    def test_arrays_immutable(self):
        g = complete(4)
        with pytest.raises(ValueError):
            g.indices[0] = 99
        with pytest.raises(ValueError):
            g.indptr[0] = 99

    def test_from_edges_rejects_bad_input(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 5)])

    def test_vertex_set_cardinality_and_membership(self):
        s = VertexSet.from_indices(6, [4, 1, 1])
        assert len(s) == 2
        assert 4 in s and 0 not in s
        assert sorted(s) == [1, 4]
        assert VertexSet.full(3).cardinality == 3
        assert VertexSet.empty(3).cardinality == 0


class TestDegrees:
    def test_triangle(self):
        assert degrees(complete(3)) == (2, Fraction(2))

    def test_star(self):
        star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
        assert degrees(star) == (4, Fraction(8, 5))

    def test_empty(self):
        assert degrees(Graph.from_edges(5, [])) == (0, Fraction(0))
        assert degrees(Graph.from_edges(0, [])) == (0, Fraction(0))

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_average_is_2m_over_n(self, g):
        maxdeg, avg = degrees(g)
        if g.n:
            assert avg == Fraction(2 * g.m, g.n)
            assert maxdeg == int(g.degree_array().max()) if g.n else 0


class TestInduced:
    def test_k4_drop_one(self):
        sub = induced(complete(4), VertexSet.from_indices(4, [0, 1, 2]))
        assert (sub.graph.n, sub.graph.m) == (3, 3)
        assert list(sub.to_parent) == [0, 1, 2]

    def test_empty_selection(self):
        sub = induced(complete(4), VertexSet.empty(4))
        assert (sub.graph.n, sub.graph.m) == (0, 0)

    def test_cycle_alternating(self):
        sub = induced(cycle(5), VertexSet.from_indices(5, [0, 2, 4]))
        assert sub.graph.m == 1
        (u, v), = sub.graph.edge_array()
        assert {int(sub.to_parent[u]), int(sub.to_parent[v])} == {0, 4}

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_full_selection_identity(self, g):
        sub = induced(g, VertexSet.full(g.n))
        assert np.array_equal(sub.graph.edge_array(), g.edge_array())
        assert np.array_equal(sub.to_parent, np.arange(g.n))

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_edges_match_parent(self, g):
        rng = np.random.default_rng(7)
        keep = VertexSet(rng.random(g.n) < 0.5)
        sub = induced(g, keep)
        mapped = {
            (int(sub.to_parent[u]), int(sub.to_parent[v]))
            for u, v in sub.graph.edge_array()
        }
        expected = {
            (u, v)
            for u, v in map(tuple, g.edge_array().tolist())
            if u in keep and v in keep
        }
        assert mapped == expected


class TestCounting:
    def test_common_neighbors_frozen(self):
        assert common_neighbor_count(complete(4), 0, 1) == 2
        assert common_neighbor_count(cycle(5), 0, 1) == 0
        k23 = Graph.from_edges(5, [(i, j) for i in range(2) for j in range(2, 5)])
        assert common_neighbor_count(k23, 0, 1) == 3

    def test_triangle_count_frozen(self):
        assert triangle_count(complete(4)) == 4
        assert triangle_count(petersen()) == 0

    def test_triangle_count_random_vs_all_triples(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            g = random_graph(rng, int(rng.integers(1, 30)), 0.3)
            assert triangle_count(g) == tri_count_all_triples(g)

    def test_triangles_through_frozen(self):
        assert triangles_through(complete(4), 2) == 3
        star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
        assert triangles_through(star, 0) == 0

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_triangles_through_identity(self, g):
        per_vertex = [triangles_through(g, v) for v in range(g.n)]
        assert sum(per_vertex) == 3 * triangle_count(g)
        assert per_vertex == [triangles_through_oracle(g, v) for v in range(g.n)]

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_codegree_sum_identity(self, g):
        total = sum(common_neighbor_count(g, int(u), int(v)) for u, v in g.edge_array())
        assert total == 3 * triangle_count(g)


class TestIndependentSets:
    def test_is_independent_frozen(self):
        assert not is_independent(complete(3), VertexSet.from_indices(3, [0, 1]))
        assert is_independent(complete(3), VertexSet.from_indices(3, [1]))
        assert is_independent(cycle(5), VertexSet.from_indices(5, [0, 2]))

    def test_greedy_frozen(self):
        assert len(greedy_independent_set(Graph.from_edges(7, []))) == 7
        assert len(greedy_independent_set(complete(5))) == 1
        assert len(greedy_independent_set(cycle(5))) == 2

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_greedy_meets_turan_floor(self, g):
        s = greedy_independent_set(g)
        assert independent_oracle(g, s.indices())
        if g.n:
            _, avg = degrees(g)
            assert len(s) >= g.n / (float(avg) + 1.0)

    def test_exact_mis_frozen(self):
        assert len(exact_mis(cycle(5))) == 2
        k33 = Graph.from_edges(6, [(i, 3 + j) for i in range(3) for j in range(3)])
        assert sorted(exact_mis(k33).indices()) == [0, 1, 2]

    def test_exact_mis_node_cap(self):
        with pytest.raises(InstanceTooLarge):
            exact_mis(Graph.from_edges(5, []), node_cap=4)
        exact_mis(Graph.from_edges(5, []), node_cap=5)

    @PROPERTY_SETTINGS
    @given(graphs())
    def test_exact_mis_matches_subset_oracle(self, g):
        s = exact_mis(g)
        assert independent_oracle(g, s.indices())
        assert len(s) == mis_size_subset(g)
        assert len(s) >= len(greedy_independent_set(g))


class TestTripartiteDetection:
    def test_triangle_is_smallest_witness(self):
        assert contains_kttt(complete(3), 1) is True

    def test_bipartite_has_none(self):
        k33 = Graph.from_edges(6, [(i, 3 + j) for i in range(3) for j in range(3)])
        assert contains_kttt(k33, 1) is False

    def test_blowup_with_short_parts(self):
        # Complete tripartite with parts of size 2: a witness for t=2 but any
        # t=3 part would need 3 mutually nonadjacent vertices inside one blob.
        parts = [(0, 1), (2, 3), (4, 5)]
        edges = [
            (a, b)
            for i in range(3)
            for j in range(i + 1, 3)
            for a in parts[i]
            for b in parts[j]
        ]
        g = Graph.from_edges(6, edges)
        assert contains_kttt(g, 2) is True
        assert contains_kttt(g, 3) is False

    def test_budget_exhaustion_is_indeterminate(self):
        g = complete(12)
        assert contains_kttt(g, 2, budget=1) is None
        assert contains_kttt(g, 2) is True

    def test_rejects_bad_t(self):
        with pytest.raises(ValueError):
            contains_kttt(complete(3), 0)

    @PROPERTY_SETTINGS
    @given(graphs(max_n=9))
    def test_t1_agrees_with_triangle_count(self, g):
        assert contains_kttt(g, 1) is (triangle_count(g) > 0)
