import networkx as nx
import numpy as np
from django.test import SimpleTestCase

from graphcore.exceptions import GraphError, InsufficientDataError, UndefinedCorrelationError
from graphcore.graph import Multigraph

from .communities import CommunityPartition, detect_communities, modularity
from .powerlaw import DegreeDistribution, fit_power_law
from .serializers import StatsReportSerializer
from .services import (
    assortativity, clustering_by_degree, clustering_coefficient, clustering_values, compute_stats,
    distance_statistics, lcc_fraction, mean_clustering,
)

TRIANGLE = [(0, 1), (1, 2), (0, 2)]
BOWTIE = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]
BRIDGED_TRIANGLES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]


def graph_of(edges, nodes=0):
    return Multigraph.from_edges(edges, nodes=nodes)


class ClusteringTests(SimpleTestCase):

    def test_small_graphs(self):
        cases = [
            (TRIANGLE, 1.0),
            ([(0, 1), (0, 2), (0, 3)], 0.0),
            (list(nx.complete_graph(4).edges()), 1.0),
            (list(nx.cycle_graph(4).edges()), 0.0),
        ]
        for edges, expected in cases:
            with self.subTest(edges=edges):
                self.assertAlmostEqual(mean_clustering(graph_of(edges)), expected)

    def test_shared_vertex_of_two_triangles(self):
        graph = graph_of(BOWTIE)
        self.assertAlmostEqual(clustering_coefficient(graph, 2), 1 / 3)
        by_degree = clustering_by_degree(graph)
        self.assertEqual(list(by_degree), [2, 4])
        self.assertAlmostEqual(by_degree[2], 1.0)
        self.assertAlmostEqual(by_degree[4], 1 / 3)

    def test_parallel_edges_do_not_change_clustering(self):
        graph = graph_of(TRIANGLE + [(0, 1), (0, 1)])
        self.assertAlmostEqual(mean_clustering(graph), 1.0)

    def test_single_node_matches_bulk_values(self):
        graph = Multigraph.from_networkx(nx.gnm_random_graph(40, 120, seed=3))
        values = clustering_values(graph)
        for node in graph.nodes():
            self.assertAlmostEqual(clustering_coefficient(graph, node), values[node])

    def test_low_degree_and_missing_nodes(self):
        graph = graph_of([(0, 1)], nodes=3)
        self.assertEqual(clustering_coefficient(graph, 0), 0.0)
        self.assertEqual(clustering_coefficient(graph, 2), 0.0)
        with self.assertRaises(GraphError):
            clustering_coefficient(graph, 7)


class DistanceStatisticsTests(SimpleTestCase):

    def test_path_of_three_nodes(self):
        stats = distance_statistics(graph_of([(0, 1), (1, 2)]))
        self.assertAlmostEqual(stats.mean_distance, 4 / 3)
        self.assertEqual(stats.diameter, 2)
        self.assertEqual(stats.reachable_pairs, 3)
        self.assertAlmostEqual(stats.distribution[1], 2 / 3)
        self.assertAlmostEqual(stats.distribution[2], 1 / 3)

    def test_only_reachable_pairs_count(self):
        stats = distance_statistics(graph_of([(0, 1), (2, 3)]))
        self.assertEqual(stats.mean_distance, 1.0)
        self.assertEqual(stats.diameter, 1)
        self.assertEqual(stats.reachable_pairs, 2)
        self.assertAlmostEqual(stats.unreachable_fraction, 2 / 3)

    def test_no_pairs(self):
        stats = distance_statistics(Multigraph(1))
        self.assertEqual((stats.mean_distance, stats.diameter, stats.reachable_pairs), (0.0, 0, 0))

    def test_matches_networkx_on_connected_graph(self):
        nx_graph = nx.connected_watts_strogatz_graph(60, 4, 0.2, seed=5)
        stats = distance_statistics(Multigraph.from_networkx(nx_graph))
        self.assertAlmostEqual(stats.mean_distance, nx.average_shortest_path_length(nx_graph))
        self.assertEqual(stats.diameter, nx.diameter(nx_graph))


class AssortativityTests(SimpleTestCase):

    def test_path_is_disassortative(self):
        self.assertAlmostEqual(assortativity(graph_of([(0, 1), (1, 2)])), -1.0)
        self.assertAlmostEqual(assortativity(graph_of([(0, 1), (0, 2), (0, 3)])), -1.0)

    def test_regular_graph_is_undefined(self):
        with self.assertRaises(UndefinedCorrelationError):
            assortativity(graph_of(list(nx.cycle_graph(5).edges())))
        with self.assertRaises(UndefinedCorrelationError):
            assortativity(Multigraph(3))

    def test_parallel_edges_weight_the_correlation(self):
        graph = graph_of([(0, 1), (0, 1), (1, 2)])
        self.assertAlmostEqual(assortativity(graph), -0.8)
        # the simple projection is a path
        self.assertAlmostEqual(assortativity(graph, simple=True), -1.0)

    def test_matches_networkx_on_simple_graph(self):
        nx_graph = nx.barabasi_albert_graph(200, 3, seed=2)
        self.assertAlmostEqual(
            assortativity(Multigraph.from_networkx(nx_graph)),
            nx.degree_assortativity_coefficient(nx_graph),
            places=10,
        )


class CommunityTests(SimpleTestCase):

    def test_modularity_of_fixed_partitions(self):
        graph = graph_of(BRIDGED_TRIANGLES)
        nodes = graph.nodes()
        self.assertAlmostEqual(modularity(graph, CommunityPartition.single(nodes)), 0.0)
        halves = CommunityPartition(labels={node: int(node >= 3) for node in nodes})
        self.assertAlmostEqual(modularity(graph, halves), 5 / 14)
        singletons = CommunityPartition(labels={node: node for node in nodes})
        self.assertLess(modularity(graph, singletons), 0.0)

    def test_edgeless_graph(self):
        graph = Multigraph(4)
        self.assertEqual(modularity(graph, CommunityPartition.single(graph.nodes())), 0.0)
        partition, q = detect_communities(graph, runs=3)
        self.assertEqual((partition.count, q), (1, 0.0))

    def test_disjoint_triangles_are_found(self):
        graph = graph_of([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        partition, q = detect_communities(graph, runs=5, rng_seed=1)
        self.assertAlmostEqual(q, 0.5)
        self.assertEqual(sorted(map(sorted, partition.communities())), [[0, 1, 2], [3, 4, 5]])

    def test_complete_graph_has_no_structure(self):
        graph = graph_of(list(nx.complete_graph(4).edges()))
        _, q = detect_communities(graph, runs=5)
        self.assertAlmostEqual(q, 0.0)

    def test_detection_is_reproducible(self):
        graph = Multigraph.from_networkx(nx.connected_caveman_graph(6, 5))
        first = detect_communities(graph, runs=4, rng_seed=8)
        second = detect_communities(graph, runs=4, rng_seed=8)
        self.assertEqual(first[0].labels, second[0].labels)
        self.assertEqual(first[1], second[1])
        self.assertGreater(first[1], 0.6)

    def test_run_count_must_be_positive(self):
        with self.assertRaises(ValueError):
            detect_communities(graph_of(TRIANGLE), runs=-1)


class PowerLawTests(SimpleTestCase):

    def test_degree_distribution(self):
        dist = DegreeDistribution.from_degrees([5, 1, 2, 1])
        self.assertEqual(dist.counts, {1: 2, 2: 1, 5: 1})
        self.assertEqual(dist.probabilities, {1: 0.5, 2: 0.25, 5: 0.25})
        self.assertEqual(dist.mean, 2.25)
        np.testing.assert_array_equal(dist.samples(), [1, 1, 2, 5])

    def test_recovers_zipf_exponent(self):
        rng = np.random.default_rng(42)
        for gamma in (2.0, 2.5, 3.0):
            with self.subTest(gamma=gamma):
                fit = fit_power_law(rng.zipf(gamma, 100000), k_min=1)
                self.assertAlmostEqual(fit.gamma, gamma, delta=0.05)
                self.assertEqual(fit.k_min, 1)
                self.assertEqual(fit.tail_size, 100000)
                self.assertTrue(0 < fit.sigma < 0.02)

    def test_scans_k_min(self):
        rng = np.random.default_rng(7)
        fit = fit_power_law(DegreeDistribution.from_degrees(rng.zipf(2.5, 20000)))
        self.assertAlmostEqual(fit.gamma, 2.5, delta=0.1)
        self.assertGreaterEqual(fit.tail_size, 50)
        self.assertLess(fit.ks, 0.05)

    def test_degenerate_input(self):
        with self.assertRaises(InsufficientDataError):
            fit_power_law(np.full(500, 4))
        with self.assertRaises(InsufficientDataError):
            fit_power_law(np.arange(1, 11))
        with self.assertRaises(InsufficientDataError):
            fit_power_law([0, 0, 0])


class ReportTests(SimpleTestCase):

    def test_lcc_fraction(self):
        matching = graph_of([(2 * i, 2 * i + 1) for i in range(5)])
        self.assertAlmostEqual(lcc_fraction(matching), 1 / 5)
        self.assertEqual(lcc_fraction(Multigraph()), 0.0)

    def test_single_edge_report(self):
        report = compute_stats(graph_of([(0, 1)]), modularity_runs=3)
        self.assertEqual((report.n, report.m, report.diameter), (2, 1, 1))
        self.assertEqual(report.lcc, 1.0)
        self.assertEqual(report.mean_degree, 1.0)
        self.assertEqual(report.mean_clustering, 0.0)
        self.assertEqual(report.mean_distance, 1.0)
        self.assertIsNone(report.assortativity)
        self.assertEqual(report.modularity_runs, 3)

    def test_karate_club_published_values(self):
        report = compute_stats(Multigraph.from_networkx(nx.karate_club_graph()), modularity_runs=20)
        self.assertEqual((report.n, report.m, report.diameter), (34, 78, 5))
        self.assertAlmostEqual(report.mean_degree, 156 / 34)
        self.assertAlmostEqual(report.mean_clustering, 0.5706, delta=1e-4)
        self.assertAlmostEqual(report.mean_distance, 2.4082, delta=1e-4)
        self.assertAlmostEqual(report.assortativity, -0.4756, delta=1e-4)
        self.assertAlmostEqual(report.modularity, 0.4198, delta=0.01)

    def test_simple_degrees_collapse_parallel_edges(self):
        graph = graph_of([(0, 1), (0, 1), (1, 2)])
        self.assertEqual(compute_stats(graph, modularity_runs=1).m, 3)
        report = compute_stats(graph, modularity_runs=1, simple_degrees=True)
        self.assertEqual(report.m, 2)
        self.assertAlmostEqual(report.assortativity, -1.0)

    def test_report_serializes_in_schema_order(self):
        report = compute_stats(graph_of(BOWTIE), modularity_runs=2)
        data = StatsReportSerializer(report.as_dict()).data
        self.assertEqual(list(data), list(StatsReportSerializer().fields))
        self.assertAlmostEqual(data['mean_clustering'], (4 * 1.0 + 1 / 3) / 5)
        self.assertAlmostEqual(data['unreachable_fraction'], 0.0)
