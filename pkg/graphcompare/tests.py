import networkx as nx
import numpy as np
from django.test import SimpleTestCase

from graphcore.distances import DistanceProfile
from graphcore.exceptions import DegenerateGraphError
from graphcore.graph import Multigraph

from .services import (
    compare, d_measure, jensen_shannon, mean_distance_distribution, node_dispersion, portrait,
    portrait_divergence,
)


def path(n):
    return Multigraph.from_edges([(i, i + 1) for i in range(n - 1)], nodes=n)


def star(leaves):
    return Multigraph.from_edges([(0, i) for i in range(1, leaves + 1)])


class BruteForce:
    """Both measures computed straight from the all-pairs distance matrix of a connected graph"""

    def __init__(self, nx_graph):
        self.distances = nx.floyd_warshall_numpy(nx_graph, nodelist=sorted(nx_graph)).astype(int)
        self.n = self.distances.shape[0]
        self.diameter = int(self.distances.max())

    @staticmethod
    def entropy(p, log=np.log):
        p = p[p > 0]
        return float(-(p * log(p)).sum())

    @classmethod
    def jsd(cls, rows):
        rows = np.asarray(rows, dtype=float)
        if all(np.array_equal(row, rows[0]) for row in rows):
            return 0.0
        mixture = rows.mean(axis=0)
        return cls.entropy(mixture) - np.mean([cls.entropy(row) for row in rows])

    def node_rows(self):
        return np.array([[np.count_nonzero(row == d) / self.n for d in range(self.diameter + 1)]
                         for row in self.distances])

    def mean_row(self):
        return self.node_rows().mean(axis=0)

    def dispersion(self):
        return self.jsd(self.node_rows()) / np.log(self.diameter + 1)

    def portrait(self):
        matrix = np.zeros((self.diameter + 1, self.n + 1), dtype=int)
        for d in range(self.diameter + 1):
            for row in self.distances:
                matrix[d, np.count_nonzero(row == d)] += 1
        return matrix

    def joint(self):
        matrix = self.portrait()
        p_d = np.array([np.count_nonzero(self.distances == d) for d in range(self.diameter + 1)]) / self.n ** 2
        return matrix / self.n * p_d[:, None]

    @staticmethod
    def pad(a, b):
        shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
        padded = np.zeros((2,) + shape)
        padded[0, :a.shape[0], :a.shape[1]] = a
        padded[1, :b.shape[0], :b.shape[1]] = b
        return padded

    def d_measure(self, other):
        width = max(self.diameter, other.diameter) + 1
        rows = np.zeros((2, width))
        rows[0, :self.diameter + 1] = self.mean_row()
        rows[1, :other.diameter + 1] = other.mean_row()
        divergence = self.jsd(rows)
        value = 0.5 * np.sqrt(divergence / np.log(2)) + 0.5 * abs(np.sqrt(self.dispersion()) - np.sqrt(other.dispersion()))
        return value, divergence

    def portrait_divergence(self, other):
        p, q = self.pad(self.joint(), other.joint())
        m = (p + q) / 2
        kl_p = sum(x * np.log2(x / y) for x, y in zip(p.ravel(), m.ravel()) if x > 0)
        kl_q = sum(x * np.log2(x / y) for x, y in zip(q.ravel(), m.ravel()) if x > 0)
        return 0.5 * kl_p + 0.5 * kl_q


class JensenShannonTests(SimpleTestCase):

    def test_disjoint_supports(self):
        self.assertAlmostEqual(jensen_shannon([[1, 0], [0, 1]]), np.log(2))
        self.assertAlmostEqual(jensen_shannon([[1, 0], [0, 1]], base=2), 1.0)
        self.assertAlmostEqual(jensen_shannon([[1], [0, 1]]), np.log(2))

    def test_identical_distributions(self):
        self.assertEqual(jensen_shannon([[0.2, 0.3, 0.5], [2, 3, 5]]), 0.0)
        self.assertEqual(jensen_shannon([[0.4, 0.6]]), 0.0)

    def test_weights(self):
        expected = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
        self.assertAlmostEqual(jensen_shannon([[1, 0], [0, 1]], weights=[3, 1]), expected)

    def test_invalid_input(self):
        with self.assertRaises(ValueError):
            jensen_shannon([])
        with self.assertRaises(ValueError):
            jensen_shannon([[1, 0], [0, 0]])


class OracleTests(SimpleTestCase):
    """Every connected graph with 2 to 7 nodes against the brute-force computation"""

    def connected_atlas(self):
        return [g for g in nx.graph_atlas_g() if g.number_of_nodes() >= 2 and nx.is_connected(g)]

    def test_single_graph_quantities(self):
        for nx_graph in self.connected_atlas():
            graph = Multigraph.from_networkx(nx_graph)
            oracle = BruteForce(nx_graph)
            profile = DistanceProfile.from_graph(graph)
            self.assertEqual(profile.diameter, oracle.diameter)
            np.testing.assert_allclose(profile.node_distributions, oracle.node_rows(), atol=1e-12)
            np.testing.assert_allclose(mean_distance_distribution(profile), oracle.mean_row(), atol=1e-12)
            self.assertAlmostEqual(node_dispersion(profile), oracle.dispersion(), delta=1e-9)
            np.testing.assert_array_equal(portrait(profile).matrix, oracle.portrait())
            np.testing.assert_allclose(portrait(profile).joint_probabilities(), oracle.joint(), atol=1e-12)

    def test_pair_measures(self):
        graphs = self.connected_atlas()
        rng = np.random.default_rng(0)
        pairs = list(zip(graphs, graphs[1:])) + [
            (graphs[i], graphs[j]) for i, j in rng.integers(len(graphs), size=(300, 2))
        ]
        for g, h in pairs:
            oracle_g, oracle_h = BruteForce(g), BruteForce(h)
            scores = compare(Multigraph.from_networkx(g), Multigraph.from_networkx(h))
            expected_d, divergence = oracle_g.d_measure(oracle_h)
            details = scores['d_measure'].details
            self.assertAlmostEqual(details['mean_distribution_divergence'], divergence, delta=1e-9)
            self.assertAlmostEqual(
                scores['d_measure'].value, expected_d, delta=1e-9 if divergence > 1e-12 else 1e-6
            )
            self.assertAlmostEqual(
                scores['portrait_divergence'].value, oracle_g.portrait_divergence(oracle_h), delta=1e-9
            )


class MeasureAxiomTests(SimpleTestCase):

    def random_pair(self, rng, index):
        n = int(rng.integers(6, 16))
        m = int(rng.integers(n, 3 * n))
        g = Multigraph.from_networkx(nx.gnm_random_graph(n, m, seed=2 * index))
        n = int(rng.integers(6, 16))
        m = int(rng.integers(n, 3 * n))
        h = Multigraph.from_networkx(nx.gnm_random_graph(n, m, seed=2 * index + 1))
        return g, h

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(17)
        for index in range(200):
            g, h = self.random_pair(rng, index)
            forward = compare(g, h)
            backward = compare(h, g)
            for measure, score in forward.items():
                self.assertAlmostEqual(score.value, backward[measure].value, delta=1e-12)
                self.assertTrue(0.0 <= score.value <= 1.0)

    def test_relabeled_copies_score_zero(self):
        rng = np.random.default_rng(23)
        for index in range(200):
            g, _ = self.random_pair(rng, index)
            scores = compare(g, g.relabeled(rng))
            self.assertAlmostEqual(scores['d_measure'].value, 0.0, delta=1e-12)
            self.assertAlmostEqual(scores['portrait_divergence'].value, 0.0, delta=1e-12)


class PortraitTests(SimpleTestCase):

    def test_path_of_three_nodes(self):
        result = portrait(path(3))
        np.testing.assert_array_equal(result.matrix, [[0, 3, 0, 0], [0, 2, 1, 0], [1, 2, 0, 0]])
        np.testing.assert_allclose(result.distance_probabilities(), [3 / 9, 4 / 9, 2 / 9])

    def test_every_row_counts_each_node_once(self):
        graph = Multigraph.from_networkx(nx.gnm_random_graph(30, 45, seed=4))
        result = portrait(graph)
        np.testing.assert_array_equal(result.matrix.sum(axis=1), np.full(result.diameter + 1, 30))
        self.assertAlmostEqual(result.joint_probabilities().sum(), 1.0)

    def test_disconnected_graph_probabilities(self):
        result = portrait(Multigraph.from_edges([(0, 1), (2, 3)]))
        self.assertEqual(result.squared_component_sizes, 8)
        np.testing.assert_allclose(result.distance_probabilities(), [0.5, 0.5])
        self.assertAlmostEqual(result.joint_probabilities().sum(), 1.0)

    def test_frame_layout(self):
        frame = portrait(path(3)).to_frame()
        self.assertEqual(list(frame.columns), ['d', '0', '1', '2', '3'])
        self.assertEqual(frame['d'].tolist(), [0, 1, 2])

    def test_disconnected_joint_probabilities_by_hand(self):
        # path on 0-1-2 plus the edge 3-4: 13 ordered same-component pairs
        result = portrait(Multigraph.from_edges([(0, 1), (1, 2), (3, 4)]))
        np.testing.assert_array_equal(result.matrix, [
            [0, 5, 0, 0, 0, 0],
            [0, 4, 1, 0, 0, 0],
            [3, 2, 0, 0, 0, 0],
        ])
        np.testing.assert_allclose(result.joint_probabilities(), [
            [0, 5 / 13, 0, 0, 0, 0],
            [0, 24 / 65, 6 / 65, 0, 0, 0],
            [6 / 65, 4 / 65, 0, 0, 0, 0],
        ], atol=1e-15)

    def test_star_against_path_golden_values(self):
        star_graph, path_graph = star(3), path(4)
        expected = (54 + 9 * np.log2(3) - 15 * np.log2(5)) / 64
        self.assertAlmostEqual(portrait_divergence(star_graph, path_graph).value, expected, delta=1e-9)
        self.assertAlmostEqual(expected, 0.5224334544, delta=1e-9)

        score = d_measure(star_graph, path_graph)
        mean_divergence = 0.5 * (0.375 * np.log(1.2) + 0.25 * np.log(0.8) + 0.125 * np.log(2))
        self.assertAlmostEqual(score.details['mean_distribution_divergence'], mean_divergence, delta=1e-12)
        np.testing.assert_allclose(score.details['node_dispersion'], [0.1472960, 0.0778195], atol=1e-6)
        self.assertAlmostEqual(score.value, 0.186185, delta=1e-5)
        self.assertEqual(portrait_divergence(path_graph, path(4)).value, 0.0)


class DegenerateInputTests(SimpleTestCase):

    def test_edgeless_graphs(self):
        with self.assertRaises(DegenerateGraphError):
            node_dispersion(Multigraph(3))
        with self.assertRaises(DegenerateGraphError):
            d_measure(Multigraph(3), path(3))
        with self.assertRaises(DegenerateGraphError):
            portrait_divergence(Multigraph(), path(3))

    def test_disconnected_graphs_are_comparable(self):
        disconnected = Multigraph.from_edges([(0, 1), (2, 3), (3, 4)])
        score = d_measure(disconnected, path(5))
        self.assertTrue(0.0 < score.value <= 1.0)
        self.assertAlmostEqual(score.details['unreachable_fraction'][0], 6 / 10)
        self.assertEqual(score.details['unreachable_fraction'][1], 0.0)
