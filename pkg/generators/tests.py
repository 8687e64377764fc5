import networkx as nx
import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, tag
from scipy import stats

from graphcore.distances import DistanceProfile
from graphcore.exceptions import NonTerminationError
from graphcore.graph import Multigraph
from netstats.powerlaw import DegreeDistribution, fit_power_law
from netstats.services import assortativity, lcc_fraction, mean_clustering

from .baselines import generate_ba, generate_er, generate_ws
from .sampling import FenwickSampler
from .serializers import ModelSpecSerializer
from .services import WarPactGenerator, generate_graph, generate_war_pact
from .specs import ModelKind, ModelSpec, SeedKind, SelectionRule
from .streams import derive_seed


def war_pact(n, m=None, k=None, rule=SelectionRule.KR, seed_kind=SeedKind.MATCHING, rng_seed=0):
    return ModelSpec(
        kind=ModelKind.WAR_PACT, n=n, m=m, mean_degree=k, rule=rule, seed_kind=seed_kind, rng_seed=rng_seed
    )


def edge_set(graph):
    return sorted(graph.edges())


class ModelSpecTests(SimpleTestCase):

    def test_mean_degree_derives_m(self):
        spec = war_pact(1000, k=10).clean()
        self.assertEqual(spec.m, 5000)
        self.assertEqual(spec.label, 'KR')

    def test_m_derives_mean_degree(self):
        spec = war_pact(5, m=4).clean()
        self.assertAlmostEqual(spec.mean_degree, 1.6)

    def test_too_few_edges_for_war_pact(self):
        with self.assertRaises(ValidationError) as context:
            war_pact(10, m=4).clean()
        self.assertIn('m', context.exception.message_dict)

    def test_invalid_specs(self):
        cases = [
            (ModelSpec(kind='xx', n=10, m=10), 'kind'),
            (ModelSpec(n=0, m=10), 'n'),
            (ModelSpec(n=10, m=20, mean_degree=5), 'mean_degree'),
            (ModelSpec(kind=ModelKind.ER, n=5, mean_degree=10), 'mean_degree'),
            (ModelSpec(kind=ModelKind.BA, n=3, mean_degree=6), 'n'),
            (ModelSpec(kind=ModelKind.WS, n=10, mean_degree=3), 'mean_degree'),
            (ModelSpec(kind=ModelKind.WS, n=10, mean_degree=4, rewire=1.5), 'rewire'),
            (ModelSpec(n=10, m=10, rule='zz'), 'rule'),
            (ModelSpec(n=10, m=10, rng_seed=-1), 'rng_seed'),
        ]
        for spec, field in cases:
            with self.subTest(field=field, spec=spec):
                with self.assertRaises(ValidationError) as context:
                    spec.clean()
                self.assertIn(field, context.exception.message_dict)

    def test_ws_rewire_defaults_from_settings(self):
        spec = ModelSpec(kind=ModelKind.WS, n=20, mean_degree=4).clean()
        self.assertEqual(spec.rewire, 0.1)


class ModelSpecSerializerTests(SimpleTestCase):

    def test_valid_input_yields_clean_spec(self):
        serializer = ModelSpecSerializer(data={'n': 5, 'm': 4, 'rng_seed': 7})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        spec = serializer.validated_data['spec']
        self.assertEqual((spec.kind, spec.rule, spec.seed_kind), ('wp', 'kr', 'matching'))
        self.assertEqual(spec.rng_seed, 7)

    def test_model_errors_are_reported_per_field(self):
        serializer = ModelSpecSerializer(data={'n': 10, 'm': 2})
        self.assertFalse(serializer.is_valid())
        self.assertIn('m', serializer.errors)

    def test_unknown_rule_is_rejected(self):
        serializer = ModelSpecSerializer(data={'n': 10, 'm': 10, 'rule': 'ab'})
        self.assertFalse(serializer.is_valid())
        self.assertIn('rule', serializer.errors)


class StreamTests(SimpleTestCase):

    def test_derived_seeds_are_distinct_and_stable(self):
        seeds = [derive_seed(0, 2, point, model, realization)
                 for point in range(5) for model in range(7) for realization in range(20)]
        self.assertEqual(len(set(seeds)), len(seeds))
        self.assertEqual(derive_seed(0, 2, 1, 3, 4), derive_seed(0, 2, 1, 3, 4))
        self.assertNotEqual(derive_seed(0, 1), derive_seed(1, 1))
        self.assertTrue(all(0 <= seed < 2 ** 64 for seed in seeds))


class FenwickSamplerTests(SimpleTestCase):

    def test_zero_weights_are_never_drawn(self):
        sampler = FenwickSampler([1.0, 0.0, 3.0])
        self.assertEqual(sampler.total, 4.0)
        drawn = {sampler.sample(fraction) for fraction in np.linspace(0, 0.999, 100)}
        self.assertEqual(drawn, {0, 2})
        self.assertEqual(sampler.sample(0.2), 0)
        self.assertEqual(sampler.sample(0.3), 2)

    def test_updates_move_probability_mass(self):
        sampler = FenwickSampler([1.0, 0.0, 3.0])
        sampler.update(2, 0.0)
        sampler.update(1, 2.0)
        self.assertEqual(sampler.total, 3.0)
        self.assertEqual(sampler.sample(0.0), 0)
        self.assertEqual(sampler.sample(0.5), 1)
        self.assertEqual(sampler.sample(0.99), 1)

    def test_empirical_frequencies(self):
        weights = np.array([0.5, 1.0, 0.25, 2.25])
        sampler = FenwickSampler(weights)
        rng = np.random.default_rng(1)
        counts = np.bincount([sampler.sample(u) for u in rng.random(20000)], minlength=4)
        np.testing.assert_allclose(counts / counts.sum(), weights / weights.sum(), atol=0.015)


class WarPactGeneratorTests(SimpleTestCase):

    def test_small_matching_run(self):
        graph = generate_war_pact(war_pact(5, m=4, rng_seed=3))
        self.assertEqual((graph.n, graph.m), (5, 4))
        graph.check_invariants()

    def test_no_merges_when_n_is_2m(self):
        generator = WarPactGenerator(war_pact(8, m=4))
        graph = generator.generate()
        self.assertEqual(generator.stats['merges'], 0)
        self.assertEqual(edge_set(graph), [(i, 4 + i, 1) for i in range(4)])

    def test_invariants_hold_for_all_rules_and_seedings(self):
        rng = np.random.default_rng(2024)
        for rule in SelectionRule.values:
            for seed_kind in SeedKind.values:
                for _ in range(3):
                    n = int(rng.integers(10, 41))
                    k = float(rng.uniform(3, 6))
                    spec = war_pact(n, k=k, rule=rule, seed_kind=seed_kind, rng_seed=int(rng.integers(2 ** 32)))
                    with self.subTest(rule=rule, seed_kind=seed_kind, n=n, k=k):
                        generator = WarPactGenerator(spec, check_invariants=True)
                        graph = generator.generate()
                        self.assertEqual(graph.n, n)
                        self.assertEqual(graph.m, spec.m)
                        self.assertEqual(sum(graph.degrees()), 2 * spec.m)
                        self.assertEqual(generator.stats['merges'], generator.seed_nodes - n)

    def test_seeds_without_isolated_nodes(self):
        for seed_kind in (SeedKind.ER, SeedKind.TREE):
            generator = WarPactGenerator(war_pact(50, k=6, seed_kind=seed_kind, rng_seed=5))
            seed = generator._seed_graph()
            self.assertEqual(seed.m, 150)
            self.assertLessEqual(seed.n, 300)
            self.assertTrue(all(seed.degree(node) > 0 for node in seed.nodes()))

    def test_sparse_seeds_reach_every_valid_n(self):
        for seed_kind in (SeedKind.ER, SeedKind.TREE):
            for n in (60, 80, 100):
                spec = war_pact(n, m=50, seed_kind=seed_kind, rng_seed=n)
                with self.subTest(seed_kind=seed_kind, n=n):
                    generator = WarPactGenerator(spec, check_invariants=True)
                    graph = generator.generate()
                    self.assertEqual((graph.n, graph.m), (n, 50))
                    self.assertTrue(n <= generator.seed_nodes <= 100)
                    self.assertEqual(generator.stats['merges'], generator.seed_nodes - n)

    def test_isolated_nodes_are_kept_only_to_fill_n(self):
        for seed_kind in (SeedKind.ER, SeedKind.TREE):
            with self.subTest(seed_kind=seed_kind):
                generator = WarPactGenerator(war_pact(100, m=50, seed_kind=seed_kind, rng_seed=9))
                with self.assertLogs('generators.services', level='WARNING') as logs:
                    graph = generator.generate()
                self.assertIn('isolated nodes to reach n=100', logs.output[0])
                self.assertEqual(generator.seed_nodes, 100)
                self.assertEqual(generator.stats['merges'], 0)
                self.assertEqual(graph.m, 50)
                self.assertIn(0, graph.degrees())

    def test_same_seed_same_graph(self):
        for rule in SelectionRule.values:
            first = generate_war_pact(war_pact(200, k=6, rule=rule, rng_seed=11))
            second = generate_war_pact(war_pact(200, k=6, rule=rule, rng_seed=11))
            other = generate_war_pact(war_pact(200, k=6, rule=rule, rng_seed=12))
            self.assertEqual(edge_set(first), edge_set(second))
            self.assertNotEqual(edge_set(first), edge_set(other))

    def test_exhausted_rejections_raise(self):

        class TriangleSeed(WarPactGenerator):
            def _seed_graph(self):
                return Multigraph.from_edges([(0, 1), (1, 2), (0, 2)], nodes=6)

        generator = TriangleSeed(war_pact(2, m=3), retry_factor=200)
        with self.assertRaises(NonTerminationError) as context:
            generator.generate()
        self.assertEqual(context.exception.step, 3)
        self.assertEqual(context.exception.attempts, 400)


class MergeGeometryTests(SimpleTestCase):
    """Merging two nodes at distance d closes a cycle of length d"""

    def pairs_at_distance(self, nx_graph, distance, rng):
        lengths = dict(nx.all_pairs_shortest_path_length(nx_graph))
        pairs = [(u, v) for u in lengths for v, d in lengths[u].items() if d == distance and u < v]
        if not pairs:
            return None
        return pairs[int(rng.integers(len(pairs)))]

    def test_merge_geometry_on_random_graphs(self):
        rng = np.random.default_rng(9)
        checked = {2: 0, 3: 0, 4: 0}
        for case in range(200):
            nx_graph = nx.gnm_random_graph(20, 24, seed=case)
            for distance in checked:
                pair = self.pairs_at_distance(nx_graph, distance, rng)
                if pair is None:
                    continue
                a, b = pair
                path = nx.shortest_path(nx_graph, a, b)
                graph = Multigraph.from_networkx(nx_graph)
                survivor = graph.merge_nodes(a, b)
                graph.check_invariants()
                if distance == 2:
                    for common in set(nx_graph[a]) & set(nx_graph[b]):
                        self.assertEqual(graph.multiplicity(survivor, common), 2)
                elif distance == 3:
                    x, y = path[1], path[2]
                    self.assertTrue(graph.has_edge(survivor, x) and graph.has_edge(survivor, y))
                    self.assertTrue(graph.has_edge(x, y))
                else:
                    x, z, y = path[1], path[2], path[3]
                    self.assertTrue(graph.has_edge(survivor, x) and graph.has_edge(survivor, y))
                    self.assertTrue(graph.has_edge(x, z) and graph.has_edge(z, y))
                    self.assertFalse(graph.has_edge(survivor, z))
                checked[distance] += 1
        for distance, count in checked.items():
            self.assertGreaterEqual(count, 100, distance)


class BaselineTests(SimpleTestCase):

    def test_er_mean_degree(self):
        graph = generate_er(ModelSpec(kind=ModelKind.ER, n=2000, mean_degree=10, rng_seed=1))
        self.assertEqual(graph.n, 2000)
        self.assertTrue(graph.is_simple())
        self.assertAlmostEqual(2 * graph.m / graph.n, 10, delta=0.5)

    def test_ba_edge_count(self):
        graph = generate_ba(ModelSpec(kind=ModelKind.BA, n=1000, mean_degree=10, rng_seed=1))
        self.assertEqual(graph.n, 1000)
        self.assertEqual(graph.m, 15 + 5 * (1000 - 6))
        self.assertTrue(graph.is_simple())

    def test_ba_with_only_the_seed_clique(self):
        graph = generate_ba(ModelSpec(kind=ModelKind.BA, n=3, mean_degree=4))
        self.assertEqual((graph.n, graph.m), (3, 3))

    def test_ws_lattice_clustering(self):
        spec = ModelSpec(kind=ModelKind.WS, n=10, mean_degree=4, rewire=0.0)
        graph = generate_ws(spec)
        self.assertTrue(all(degree == 4 for degree in graph.degrees()))
        self.assertAlmostEqual(mean_clustering(graph), 0.5)

    def test_ws_rewiring_keeps_edge_count(self):
        graph = generate_ws(ModelSpec(kind=ModelKind.WS, n=100, mean_degree=6, rewire=1.0, rng_seed=4))
        self.assertEqual(graph.m, 300)

    def test_dispatch_is_deterministic(self):
        for kind in (ModelKind.ER, ModelKind.BA, ModelKind.WS):
            spec = ModelSpec(kind=kind, n=200, mean_degree=6, rng_seed=3)
            self.assertEqual(edge_set(generate_graph(spec)), edge_set(generate_graph(spec)))


@tag('slow')
class WarPactPropertyTests(SimpleTestCase):
    """1000 randomized runs with n <= 200, every merge checked"""

    def test_randomized_runs_keep_invariants(self):
        rng = np.random.default_rng(1000)
        combinations = [(rule, seed_kind) for rule in SelectionRule.values for seed_kind in SeedKind.values]
        for run in range(1000):
            rule, seed_kind = combinations[run % len(combinations)]
            n = int(rng.integers(10, 201))
            # k < n - 1 keeps a clique of survivors out of reach
            k = float(rng.uniform(1.2, 6.0))
            spec = war_pact(n, k=k, rule=rule, seed_kind=seed_kind, rng_seed=int(rng.integers(2 ** 32)))
            with self.subTest(run=run, rule=rule, seed_kind=seed_kind, n=n, k=k):
                generator = WarPactGenerator(spec, check_invariants=True)
                graph = generator.generate()
                self.assertEqual((graph.n, graph.m), (n, spec.m))
                self.assertFalse(any(u == v for u, v, _ in graph.edges()))
                if run % 10 == 0:
                    self.assertEqual(edge_set(generate_war_pact(spec)), edge_set(graph))


@tag('slow')
class WarPactScaleTests(SimpleTestCase):
    """Structural properties at n = 10 000, <k> = 10; minutes to run"""

    def test_kr_degree_exponent(self):
        exponents = []
        for rng_seed in range(5):
            graph = generate_war_pact(war_pact(10000, k=10, rng_seed=rng_seed))
            exponents.append(fit_power_law(DegreeDistribution.from_degrees(graph.degrees())).gamma)
        self.assertTrue(1.4 <= np.median(exponents) <= 1.8, exponents)

    def test_kk_rich_club_and_assortativity(self):
        cliques = 0
        correlations = []
        for rng_seed in range(5):
            graph = generate_war_pact(war_pact(10000, k=10, rule=SelectionRule.KK, rng_seed=rng_seed))
            hubs = [node for node in graph.nodes() if graph.degree(node) >= 1000]
            if all(graph.has_edge(u, v) for u in hubs for v in hubs if u < v):
                cliques += 1
            correlations.append(assortativity(graph))
        self.assertGreaterEqual(cliques, 4)
        self.assertAlmostEqual(np.mean(correlations), -0.05, delta=0.05)

    def test_connectivity_and_small_world_for_all_rules(self):
        for rule in SelectionRule.values:
            small = generate_war_pact(war_pact(2500, k=10, rule=rule, rng_seed=1))
            large = generate_war_pact(war_pact(10000, k=10, rule=rule, rng_seed=1))
            profile = DistanceProfile.from_graph(large)
            modal_distance = int(np.argmax(profile.pair_distance_counts[1:])) + 1
            with self.subTest(rule=rule):
                self.assertGreater(lcc_fraction(small), 0.9)
                self.assertGreater(lcc_fraction(large), 0.9)
                self.assertGreater(mean_clustering(large), 0.0)
                if rule == SelectionRule.KK:
                    # hubs joined in a clique with pendant leaves: most pairs are leaf-hub-hub-leaf
                    self.assertEqual(modal_distance, 3)
                else:
                    self.assertIn(modal_distance, (4, 5))
                if rule == SelectionRule.KR:
                    self.assertGreaterEqual(mean_clustering(large), 0.01)

    def test_seeding_shifts_degree_distribution_by_small_effect(self):
        pooled = {seed_kind: [] for seed_kind in SeedKind.values}
        for rng_seed in range(10):
            for seed_kind in SeedKind.values:
                graph = generate_war_pact(war_pact(10000, k=10, seed_kind=seed_kind, rng_seed=rng_seed))
                pooled[seed_kind].extend(graph.degrees().tolist())
        matching = pooled[SeedKind.MATCHING.value]
        # pooled samples of 10^5 degrees reject at any alpha; the KS distance itself stays small
        self.assertLess(stats.ks_2samp(matching, pooled[SeedKind.ER.value]).statistic, 0.1)
        self.assertLess(stats.ks_2samp(matching, pooled[SeedKind.TREE.value]).statistic, 0.05)
