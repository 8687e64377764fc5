import networkx as nx
import numpy as np
from django.test import SimpleTestCase

from .distances import UNREACHABLE, DistanceProfile, bfs_distances, iter_distance_rows
from .exceptions import AdjacentPairError, IdentityMergeError, InvariantViolation, SelfEdgeError
from .graph import Multigraph, connected_components
from .merge_map import MergeMap


def path_graph(n):
    return Multigraph.from_edges([(i, i + 1) for i in range(n - 1)], nodes=n)


class MultigraphTests(SimpleTestCase):

    def test_parallel_edges_count_towards_m_and_degree(self):
        graph = Multigraph(3)
        graph.add_edge(0, 1)
        graph.add_edge(1, 0)
        graph.add_edge(1, 2)
        self.assertEqual(graph.m, 3)
        self.assertEqual(graph.number_of_edges(simple=True), 2)
        self.assertEqual(graph.multiplicity(0, 1), 2)
        self.assertEqual(graph.degree(1), 3)
        self.assertEqual(graph.degree(1, simple=True), 2)
        self.assertFalse(graph.is_simple())

    def test_self_edge_is_rejected(self):
        with self.assertRaises(SelfEdgeError):
            Multigraph(2).add_edge(1, 1)

    def test_merging_path_ends_creates_parallel_edge(self):
        graph = path_graph(3)
        survivor = graph.merge_nodes(0, 2)
        self.assertEqual(graph.n, 2)
        self.assertEqual(graph.m, 2)
        self.assertEqual(graph.multiplicity(survivor, 1), 2)
        graph.check_invariants()

    def test_merging_at_distance_three_closes_triangle(self):
        graph = path_graph(4)
        survivor = graph.merge_nodes(0, 3)
        self.assertEqual(graph.n, 3)
        self.assertTrue(graph.is_simple())
        self.assertEqual(sorted(graph.neighbors(survivor)), [1, 2])
        self.assertTrue(graph.has_edge(1, 2))

    def test_merging_disjoint_edges(self):
        graph = Multigraph.from_edges([(0, 1), (2, 3)])
        survivor = graph.merge_nodes(1, 2)
        self.assertEqual(graph.n, 3)
        self.assertEqual(graph.m, 2)
        self.assertEqual(graph.degree(survivor), 2)

    def test_invalid_merges_raise_and_leave_graph_untouched(self):
        graph = path_graph(3)
        with self.assertRaises(IdentityMergeError):
            graph.merge_nodes(1, 1)
        with self.assertRaises(AdjacentPairError) as context:
            graph.merge_nodes(0, 1)
        self.assertEqual(context.exception.multiplicity, 1)
        self.assertEqual((graph.n, graph.m), (3, 2))
        graph.check_invariants()

    def test_survivor_is_the_higher_degree_node(self):
        graph = Multigraph.from_edges([(0, 1), (2, 3), (2, 4)])
        self.assertEqual(graph.merge_nodes(0, 2), 2)
        self.assertNotIn(0, graph)
        # ties keep the first argument
        graph = Multigraph.from_edges([(0, 1), (2, 3)])
        self.assertEqual(graph.merge_nodes(0, 2), 0)

    def test_random_node_covers_live_nodes_after_merges(self):
        graph = path_graph(5)
        graph.merge_nodes(0, 2)
        drawn = {graph.random_node(fraction) for fraction in np.linspace(0, 0.999, 50)}
        self.assertEqual(drawn, set(graph.nodes()))

    def test_simple_projection_and_networkx_round_trip(self):
        graph = Multigraph.from_edges([(0, 1), (0, 1), (1, 2)])
        projection = graph.simple_projection()
        self.assertTrue(projection.is_simple())
        self.assertEqual(projection.m, 2)
        nx_multi = graph.to_networkx(multigraph=True)
        self.assertEqual(nx_multi.number_of_edges(), 3)
        back = Multigraph.from_networkx(graph.to_networkx())
        self.assertEqual((back.n, back.m), (3, 2))

    def test_relabeled_copy_is_isomorphic(self):
        rng = np.random.default_rng(3)
        original = Multigraph.from_networkx(nx.gnm_random_graph(12, 20, seed=1))
        relabeled = original.relabeled(rng)
        self.assertTrue(nx.is_isomorphic(original.to_networkx(), relabeled.to_networkx()))

    def test_check_invariants_detects_corruption(self):
        graph = path_graph(3)
        graph._adj[0][1] = 2
        with self.assertRaises(InvariantViolation):
            graph.check_invariants()

    def test_connected_components_largest_first(self):
        graph = Multigraph.from_edges([(5, 6), (0, 1), (1, 2)], nodes=8)
        components = connected_components(graph)
        self.assertEqual(components[0], {0, 1, 2})
        self.assertEqual(components[1], {5, 6})
        self.assertEqual(len(components), 5)


class DistanceTests(SimpleTestCase):

    def test_bfs_matches_floyd_warshall_on_graph_atlas(self):
        for nx_graph in nx.graph_atlas_g()[1:300]:
            graph = Multigraph.from_networkx(nx_graph)
            oracle = nx.floyd_warshall_numpy(nx_graph, nodelist=sorted(nx_graph.nodes()))
            oracle = np.where(np.isinf(oracle), UNREACHABLE, oracle).astype(int)
            for source in graph.nodes():
                np.testing.assert_array_equal(bfs_distances(graph, source), oracle[source])
            rows = np.vstack([block for _, block in iter_distance_rows(graph, chunk_size=2)])
            np.testing.assert_array_equal(rows, oracle)

    def test_profile_of_path(self):
        profile = DistanceProfile.from_graph(path_graph(3))
        np.testing.assert_array_equal(profile.shell_counts, [[1, 1, 1], [1, 2, 0], [1, 1, 1]])
        np.testing.assert_array_equal(profile.pair_distance_counts, [3, 4, 2])
        self.assertEqual(profile.diameter, 2)
        self.assertEqual(profile.unreachable_fraction, 0.0)
        np.testing.assert_allclose(profile.mean_distribution, [1 / 3, 4 / 9, 2 / 9])

    def test_profile_of_disconnected_graph(self):
        profile = DistanceProfile.from_graph(Multigraph.from_edges([(0, 1), (2, 3)]))
        self.assertEqual(profile.diameter, 1)
        self.assertAlmostEqual(profile.unreachable_fraction, 4 / 6)
        self.assertEqual(profile.squared_component_sizes, 8)
        np.testing.assert_array_equal(profile.reachable_counts, [2, 2, 2, 2])

    def test_parallel_edges_are_one_hop(self):
        graph = Multigraph.from_edges([(0, 1), (0, 1), (1, 2)])
        np.testing.assert_array_equal(bfs_distances(graph, 0), [0, 1, 2])


class MergeMapTests(SimpleTestCase):

    def test_slots_follow_degrees_through_merges(self):
        graph = Multigraph.from_edges([(0, 1), (2, 3), (4, 5), (2, 5)])
        merge_map = MergeMap.from_graph(graph)
        self.assertEqual(len(merge_map), 2 * graph.m)
        merge_map.verify(graph)

        survivor = graph.merge_nodes(0, 2)
        absorbed = 2 if survivor == 0 else 0
        merge_map.union(survivor, absorbed)
        merge_map.verify(graph)
        self.assertEqual(merge_map.slot_count(survivor), graph.degree(survivor))
        self.assertEqual(merge_map.find(absorbed), survivor)

    def test_owner_draw_is_degree_proportional(self):
        graph = Multigraph.from_edges([(0, 1), (0, 2), (0, 3)])
        merge_map = MergeMap.from_graph(graph)
        owners = [merge_map.owner(slot) for slot in range(len(merge_map))]
        self.assertEqual(owners.count(0), 3)

    def test_verify_detects_missing_union(self):
        graph = Multigraph.from_edges([(0, 1), (2, 3)])
        merge_map = MergeMap.from_graph(graph)
        graph.merge_nodes(0, 2)
        with self.assertRaises(InvariantViolation):
            merge_map.verify(graph)
