import json
import tempfile
from pathlib import Path

import networkx as nx
import pandas as pd
from django.test import SimpleTestCase

from graphcompare.services import portrait
from graphcore.exceptions import DataIOError, EdgeListParseError, EmptyGraphError
from graphcore.graph import Multigraph
from netstats.powerlaw import DegreeDistribution
from netstats.serializers import StatsReportSerializer
from netstats.services import compute_stats

from .edgelist import MULTIGRAPH_HEADER, load_and_clean, save_edge_list
from .references import REFERENCE_NETWORKS, check_reference, get_reference
from .writers import (
    CLUSTERING_COLUMNS, save_distribution_csv, save_json, save_portrait_csv, save_stats_json,
)


class TempDirMixin:

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def write(self, name, text):
        path = self.tmp / name
        path.write_text(text, encoding='utf-8')
        return path


class LoadAndCleanTests(TempDirMixin, SimpleTestCase):

    def test_duplicates_and_self_edges_are_removed(self):
        graph, tokens = load_and_clean(self.write('g.txt', 'a b\nb a\na a\n'))
        self.assertEqual((graph.n, graph.m), (2, 1))
        self.assertEqual(tokens, {'a': 0, 'b': 1})

    def test_node_only_in_self_edge_disappears(self):
        graph, tokens = load_and_clean(self.write('g.txt', 'x x\n1 2\n2 3\n'))
        self.assertEqual(graph.n, 3)
        self.assertNotIn('x', tokens)

    def test_comments_and_blank_lines(self):
        text = '# war pact\n  # generated\n\n1 2\n   \n2\t3\n'
        graph, _ = load_and_clean(self.write('g.txt', text))
        self.assertEqual((graph.n, graph.m), (3, 2))

    def test_percent_lines_other_than_the_header_are_malformed(self):
        cases = [
            ('1 2\n%a b\n', 2),
            ('% generated\n1 2\n', 1),
            (f'1 2\n{MULTIGRAPH_HEADER}\n1 2\n', 2),
            (f'\n{MULTIGRAPH_HEADER}\n1 2\n', 2),
        ]
        for index, (text, line_number) in enumerate(cases):
            with self.subTest(text=text):
                with self.assertRaises(EdgeListParseError) as context:
                    load_and_clean(self.write(f'g{index}.txt', text))
                self.assertEqual(context.exception.line_number, line_number)

    def test_malformed_line_reports_its_number(self):
        path = self.write('g.txt', '1 2\n2 3\n3 4 5\n')
        with self.assertRaises(EdgeListParseError) as context:
            load_and_clean(path)
        self.assertEqual(context.exception.line_number, 3)
        self.assertIn(':3:', str(context.exception))

    def test_empty_graph(self):
        with self.assertRaises(EmptyGraphError):
            load_and_clean(self.write('g.txt', '# nothing\n'))
        with self.assertRaises(EmptyGraphError):
            load_and_clean(self.write('h.txt', '1 1\n2 2\n'))

    def test_unreadable_file(self):
        with self.assertRaises(DataIOError):
            load_and_clean(self.tmp / 'missing.txt')
        path = self.tmp / 'binary.txt'
        path.write_bytes(b'\xff\xfe\x00a b\n')
        with self.assertRaises(DataIOError):
            load_and_clean(path)

    def test_multigraph_header(self):
        path = self.write('g.txt', f'{MULTIGRAPH_HEADER}\n1 2\n1 2\n2 3\n')
        graph, tokens = load_and_clean(path)
        self.assertEqual((graph.n, graph.m), (3, 3))
        self.assertEqual(graph.multiplicity(tokens['1'], tokens['2']), 2)
        simple, _ = load_and_clean(path, simple=True)
        self.assertEqual(simple.m, 2)

    def test_repeated_lines_without_header_collapse(self):
        graph, _ = load_and_clean(self.write('g.txt', '1 2\n1 2\n2 3\n'))
        self.assertTrue(graph.is_simple())
        self.assertEqual(graph.m, 2)


class SaveEdgeListTests(TempDirMixin, SimpleTestCase):

    def test_round_trip_is_isomorphic(self):
        original = Multigraph.from_networkx(nx.connected_watts_strogatz_graph(40, 4, 0.3, seed=2))
        path = save_edge_list(original, self.tmp / 'out' / 'g.txt')
        loaded, _ = load_and_clean(path)
        self.assertTrue(nx.is_isomorphic(original.to_networkx(), loaded.to_networkx()))

    def test_multigraph_round_trip(self):
        original = Multigraph.from_edges([(0, 1), (0, 1), (1, 2)])
        path = save_edge_list(original, self.tmp / 'g.txt')
        self.assertEqual(path.read_text().splitlines(), [MULTIGRAPH_HEADER, '0 1', '0 1', '1 2'])
        loaded, _ = load_and_clean(path)
        self.assertTrue(nx.is_isomorphic(original.to_networkx(multigraph=True), loaded.to_networkx(multigraph=True)))

    def test_cleaning_is_idempotent(self):
        graph, tokens = load_and_clean(self.write('g.txt', 'b a\na c\nc c\nc a\nd b\n'))
        labels = {handle: token for token, handle in tokens.items()}
        path = save_edge_list(graph, self.tmp / 'clean.txt', labels=labels)
        first = path.read_text()
        again, again_tokens = load_and_clean(path)
        labels = {handle: token for token, handle in again_tokens.items()}
        second = save_edge_list(again, self.tmp / 'clean2.txt', labels=labels).read_text()
        self.assertEqual(first, second)
        self.assertEqual((again.n, again.m), (4, 3))


class WriterTests(TempDirMixin, SimpleTestCase):

    def test_stats_json_keys(self):
        report = compute_stats(Multigraph.from_edges([(0, 1), (1, 2), (0, 2), (2, 3)]), modularity_runs=2)
        path = save_stats_json(report, self.tmp / 'stats.json')
        data = json.loads(path.read_text())
        self.assertEqual(list(data), list(StatsReportSerializer().fields))
        self.assertEqual(data['n'], 4)
        self.assertTrue(path.read_bytes().endswith(b'}\n'))

    def test_undefined_assortativity_is_null(self):
        report = compute_stats(Multigraph.from_edges([(0, 1)]), modularity_runs=1)
        data = json.loads(save_stats_json(report, self.tmp / 'stats.json').read_text())
        self.assertIsNone(data['assortativity'])

    def test_degree_csv(self):
        dist = DegreeDistribution.from_degrees([1, 1, 2, 3, 3, 3])
        path = save_distribution_csv(dist, self.tmp / 'degree.csv')
        frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ['k', 'p_k'])
        self.assertEqual(frame['k'].tolist(), [1, 2, 3])
        self.assertAlmostEqual(frame['p_k'].sum(), 1.0)

    def test_mapping_csv_is_sorted(self):
        path = save_distribution_csv({4: 0.5, 2: 1.0}, self.tmp / 'clustering.csv', CLUSTERING_COLUMNS)
        self.assertEqual(path.read_text().splitlines(), ['k,C_k', '2,1.0', '4,0.5'])

    def test_portrait_csv(self):
        path = save_portrait_csv(portrait(Multigraph.from_edges([(0, 1), (1, 2)])), self.tmp / 'portrait.csv')
        self.assertEqual(path.read_text().splitlines()[0], 'd,0,1,2,3')

    def test_unwritable_target(self):
        blocker = self.write('file', 'x')
        with self.assertRaises(DataIOError):
            save_json({'a': 1}, blocker / 'nested' / 'out.json')


class ReferenceTests(SimpleTestCase):

    def test_published_rows(self):
        self.assertEqual(set(REFERENCE_NETWORKS), {'war', 'trade', 'bitcoin', 'as'})
        trade = get_reference('trade')
        self.assertEqual((trade.n, trade.m, trade.diameter), (130, 3730, 5))
        self.assertAlmostEqual(trade.mean_degree, 2 * trade.m / trade.n, places=2)

    def test_unknown_key(self):
        with self.assertRaises(ValueError):
            get_reference('facebook')

    def test_size_check(self):
        war = get_reference('war')
        graph = Multigraph.from_edges([(0, 1)])
        with self.assertLogs('dataio.references', level='WARNING'):
            self.assertFalse(check_reference(graph, 'war'))
        sized = Multigraph.from_edges([(i, i + 1) for i in range(war.n - 1)] + [(0, 2)] * (war.m - war.n + 1))
        self.assertTrue(check_reference(sized, 'war'))
