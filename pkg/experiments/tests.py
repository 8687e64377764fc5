import json
import math
import subprocess
import sys
import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, TestCase, tag
from rest_framework.test import APIClient

from .cli import EXIT_DATA, EXIT_USAGE, comma_list, format_errors
from .models import ExperimentKind, ExperimentRun, RealizationRecord
from .plans import MODEL_LABELS, ExperimentPlan, build_spec, lattice_degree


class CommandTestCase(TestCase):

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def write(self, name, text):
        path = self.tmp / name
        path.write_text(text, encoding='utf-8')
        return path

    def generate(self, name, **options):
        path = self.tmp / name
        defaults = {'model': 'wp', 'rule': 'kr', 'seed_kind': 'matching', 'n': 60, 'k': 4.0, 'rng_seed': 3}
        defaults.update(options)
        self.run_command('generate', out=str(path), **defaults)
        return path


class GenerateCommandTests(CommandTestCase):

    def test_same_seed_writes_identical_files(self):
        first = self.generate('a.txt', n=200, k=6.0, rng_seed=7)
        second = self.generate('b.txt', n=200, k=6.0, rng_seed=7)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_small_run(self):
        path = self.generate('g.txt', n=5, m=4, k=None)
        lines = [line for line in path.read_text().splitlines() if not line.startswith('%')]
        self.assertEqual(len(lines), 4)
        self.assertEqual(len({token for line in lines for token in line.split()}), 5)

    def test_invariant_checking_mode(self):
        output = self.run_command('generate', n=30, k=4.0, rule='ki', seed_kind='tree',
                                  check_invariants=True, out=str(self.tmp / 'g.txt'))
        self.assertIn('KI: n=30 m=60', output)

    def test_baselines(self):
        for model in ('er', 'ba', 'ws'):
            with self.subTest(model=model):
                path = self.generate(f'{model}.txt', model=model, n=100, k=4.0)
                self.assertFalse(path.read_text().startswith('%multigraph'))

    def test_too_few_edges_is_a_usage_error(self):
        with self.assertRaises(CommandError) as context:
            self.generate('g.txt', n=10, m=4, k=None)
        self.assertEqual(context.exception.returncode, EXIT_USAGE)
        self.assertIn('m:', str(context.exception))


class StatsCommandTests(CommandTestCase):

    def test_single_edge(self):
        path = self.write('edge.txt', 'a b\n')
        data = json.loads(self.run_command('stats', str(path), modularity_runs=2))
        self.assertEqual((data['n'], data['m'], data['diameter']), (2, 1, 1))
        self.assertEqual(data['mean_distance'], 1.0)
        self.assertIsNone(data['assortativity'])

    def test_disconnected_input(self):
        path = self.write('g.txt', '1 2\n3 4\n4 5\n')
        data = json.loads(self.run_command('stats', str(path), modularity_runs=2))
        self.assertAlmostEqual(data['lcc'], 0.6)
        self.assertAlmostEqual(data['unreachable_fraction'], 0.6)
        self.assertAlmostEqual(data['mean_distance'], 5 / 4)

    def test_output_bundle(self):
        path = self.generate('g.txt', n=300, k=6.0)
        out = self.tmp / 'stats'
        self.run_command('stats', str(path), out=str(out), modularity_runs=2, power_law=True)
        for name in ('stats.json', 'degree.csv', 'clustering.csv', 'distance.csv', 'power_law.json'):
            self.assertTrue((out / name).is_file(), name)
        degrees = pd.read_csv(out / 'degree.csv')
        self.assertAlmostEqual(degrees['p_k'].sum(), 1.0)
        self.assertEqual(json.loads((out / 'stats.json').read_text())['n'], 300)

    def test_bundled_fixture_golden_values(self):
        path = Path(settings.BASE_DIR) / 'dataio' / 'fixtures' / 'bridged_triangles.txt'
        data = json.loads(self.run_command('stats', str(path), modularity_runs=100))
        self.assertEqual((data['n'], data['m'], data['diameter']), (6, 7, 3))
        self.assertAlmostEqual(data['mean_degree'], 7 / 3, places=12)
        self.assertAlmostEqual(data['mean_clustering'], 7 / 9, delta=0.01)
        self.assertAlmostEqual(data['mean_distance'], 9 / 5, delta=0.01)
        self.assertAlmostEqual(data['assortativity'], -1 / 6, delta=0.01)
        self.assertAlmostEqual(data['modularity'], 5 / 14, delta=0.03)

    def test_missing_file_is_a_data_error(self):
        with self.assertRaises(CommandError) as context:
            self.run_command('stats', str(self.tmp / 'missing.txt'))
        self.assertEqual(context.exception.returncode, EXIT_DATA)

    def test_bad_run_count_is_a_usage_error(self):
        path = self.write('edge.txt', 'a b\n')
        with self.assertRaises(CommandError) as context:
            self.run_command('stats', str(path), modularity_runs=0)
        self.assertEqual(context.exception.returncode, EXIT_USAGE)


class CompareCommandTests(CommandTestCase):

    def test_file_against_itself(self):
        path = self.generate('g.txt')
        scores = json.loads(self.run_command('compare', str(path), str(path)))
        self.assertEqual(scores, {'d_measure': 0.0, 'portrait_divergence': 0.0})

    def test_scores_are_symmetric(self):
        a = self.generate('a.txt', rng_seed=1)
        b = self.generate('b.txt', model='er', rng_seed=2)
        forward = json.loads(self.run_command('compare', str(a), str(b)))
        backward = json.loads(self.run_command('compare', str(b), str(a)))
        self.assertEqual(forward, backward)
        self.assertTrue(0 < forward['portrait_divergence'] <= 1)

    def test_star_against_path(self):
        star = self.write('star.txt', 'hub a\nhub b\nhub c\n')
        path = self.write('path.txt', 'a b\nb c\nc d\n')
        scores = json.loads(self.run_command('compare', str(star), str(path)))
        golden = (54 + 9 * math.log2(3) - 15 * math.log2(5)) / 64
        self.assertAlmostEqual(scores['portrait_divergence'], golden, delta=1e-9)
        self.assertAlmostEqual(scores['d_measure'], 0.186185, delta=1e-5)

    def test_output_directory(self):
        a = self.generate('a.txt', rng_seed=1)
        b = self.generate('b.txt', rng_seed=2)
        out = self.tmp / 'cmp'
        self.run_command('compare', str(a), str(b), out=str(out))
        self.assertEqual(pd.read_csv(out / 'portrait_a.csv').columns[0], 'd')
        details = json.loads((out / 'compare.json').read_text())
        self.assertEqual(len(details['d_measure']['details']['node_dispersion']), 2)

    def test_edgeless_input_is_a_data_error(self):
        a = self.write('a.txt', '1 1\n')
        b = self.write('b.txt', '1 2\n')
        with self.assertRaises(CommandError) as context:
            self.run_command('compare', str(a), str(b))
        self.assertEqual(context.exception.returncode, EXIT_DATA)


class PlanTests(CommandTestCase):

    def test_defaults_per_kind(self):
        plan = ExperimentPlan(kind='distributions', output_dir=self.tmp).clean()
        self.assertEqual((plan.n, plan.mean_degree, plan.realizations), (10000, 10.0, 1))
        self.assertEqual(plan.models, ['rr', 'kk', 'kr', 'ki'])
        self.assertEqual(plan.seed_kinds, ['matching', 'er', 'tree'])

        plan = ExperimentPlan(kind='evolution', output_dir=self.tmp).clean()
        self.assertEqual((plan.n, plan.realizations), (2500, 25))
        self.assertEqual(plan.degrees, list(range(2, 21, 2)))

        target = self.write('t.txt', '1 2\n')
        plan = ExperimentPlan(kind='comparison', target=str(target), output_dir=self.tmp).clean()
        self.assertEqual(plan.models, MODEL_LABELS)
        self.assertEqual(plan.realizations, 100)

    def test_models_keep_canonical_order(self):
        plan = ExperimentPlan(kind='evolution', models=['ws', 'kr'], output_dir=self.tmp).clean()
        self.assertEqual(plan.models, ['kr', 'ws'])

    def test_invalid_plans(self):
        cases = [
            (ExperimentPlan(kind='sweep'), 'kind'),
            (ExperimentPlan(kind='comparison'), 'target'),
            (ExperimentPlan(kind='best_fit', target=str(self.tmp / 'missing.txt')), 'target'),
            (ExperimentPlan(kind='distributions', models=['er']), 'models'),
            (ExperimentPlan(kind='evolution', models=['xx']), 'models'),
            (ExperimentPlan(kind='evolution', realizations=0), 'realizations'),
            (ExperimentPlan(kind='evolution', seed_kinds=['star']), 'seed_kinds'),
            (ExperimentPlan(kind='evolution', sizes=[1]), 'degrees'),
        ]
        for plan, field in cases:
            with self.subTest(field=field):
                with self.assertRaises(ValidationError) as context:
                    plan.clean()
                self.assertIn(field, context.exception.message_dict)

    def test_realization_seeds_are_distinct(self):
        plan = ExperimentPlan(kind='evolution', degrees=[4, 6], sizes=[30], output_dir=self.tmp).clean()
        seeds = {plan.realization_seed(point, label, index)
                 for point in range(3) for label in plan.models for index in range(plan.realizations)}
        self.assertEqual(len(seeds), 3 * len(plan.models) * plan.realizations)

    def test_baseline_specs_match_the_target_size(self):
        self.assertEqual(lattice_degree(9.7), 10)
        self.assertEqual(lattice_degree(0.5), 2)
        ba = build_spec('ba', 60, m=120).clean()
        self.assertEqual(ba.attach, 2)
        ws = build_spec('ws', 60, m=150).clean()
        self.assertEqual(ws.mean_degree, 4.0)
        kr = build_spec('kr', 60, m=120, seed_kind='tree', rng_seed=5).clean()
        self.assertEqual((kr.rule, kr.seed_kind, kr.m), ('kr', 'tree', 120))

    def test_cli_helpers(self):
        self.assertEqual(comma_list('kr, rr,,ki'), ['kr', 'rr', 'ki'])
        self.assertEqual(comma_list('2,4.5', float), [2.0, 4.5])
        self.assertEqual(format_errors(ValidationError({'n': 'too small'})), 'n: too small')

    def test_usage_error_from_command(self):
        with self.assertRaises(CommandError) as context:
            self.run_command('experiment', kind='comparison', out=str(self.tmp / 'x'))
        self.assertEqual(context.exception.returncode, EXIT_USAGE)


class ExperimentCommandTests(CommandTestCase):

    def run_experiment(self, out, **options):
        self.run_command('experiment', out=str(self.tmp / out), **options)
        return ExperimentRun.objects.latest('id')

    def assert_same_files(self, run, first, second):
        for name in run.summary['files']:
            self.assertEqual((self.tmp / first / name).read_bytes(), (self.tmp / second / name).read_bytes(), name)

    def test_distributions(self):
        options = {'kind': 'distributions', 'n': 40, 'k': 4.0, 'models': 'kr,kk', 'rng_seed': 1}
        run = self.run_experiment('dist', **options)
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.total_realizations, 6)
        self.assertEqual(run.realization_records.count(), 6)
        for label in ('kr', 'kk'):
            for seed_kind in ('matching', 'er', 'tree'):
                degrees = pd.read_csv(self.tmp / 'dist' / f'degree_{label}_{seed_kind}.csv')
                self.assertAlmostEqual(degrees['p_k'].sum(), 1.0)
                self.assertIn(f'distance_{label}_{seed_kind}.csv', run.summary['files'])
        self.assertEqual(len(pd.read_csv(self.tmp / 'dist' / 'powerlaw.csv')), 6)

        self.run_experiment('dist2', **options)
        self.assert_same_files(run, 'dist', 'dist2')

    def test_evolution(self):
        options = {'kind': 'evolution', 'n': 40, 'k': 4.0, 'degrees': '4,6', 'sizes': '30,50',
                   'models': 'kr,rr', 'realizations': 2, 'rng_seed': 2}
        run = self.run_experiment('evo', **options)
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.realization_records.count(), 16)
        by_degree = pd.read_csv(self.tmp / 'evo' / 'evolution_degree.csv')
        self.assertEqual(by_degree['mean_degree'].tolist(), [4.0, 4.0, 6.0, 6.0])
        self.assertTrue(((by_degree['lcc'] > 0) & (by_degree['lcc'] <= 1)).all())
        by_size = pd.read_csv(self.tmp / 'evo' / 'evolution_size.csv')
        self.assertEqual(by_size['n'].tolist(), [30, 30, 50, 50])

        raw = pd.read_csv(self.tmp / 'evo' / 'realizations.csv', dtype={'seed': str})
        self.assertEqual(len(raw), 16)
        self.assertEqual(raw['seed'].nunique(), 16)

        self.run_experiment('evo_pool', workers=2, **options)
        self.assert_same_files(run, 'evo', 'evo_pool')

    def test_comparison(self):
        target = self.generate('target.txt')
        run = self.run_experiment('cmp', kind='comparison', target=str(target), realizations=2, rng_seed=4)
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.realization_records.count(), 14)
        summary = pd.read_csv(self.tmp / 'cmp' / 'comparison_summary.csv')
        self.assertEqual(summary['model'].tolist(), MODEL_LABELS)
        self.assertTrue(((summary['portrait_divergence_median'] >= 0) & (summary['d_measure_median'] <= 1)).all())
        self.assertIn(run.summary['best_model'], MODEL_LABELS)
        record = run.realization_records.get(model_label='kr', realization_index=0)
        self.assertEqual((record.metrics['n'], record.metrics['m']), (60, 120))

    def test_best_fit(self):
        target = self.generate('target.txt')
        options = {'kind': 'best_fit', 'target': str(target), 'models': 'kr,er', 'realizations': 2,
                   'modularity_runs': 2, 'rng_seed': 5}
        run = self.run_experiment('fit', **options)
        self.assertEqual(run.status, 'completed')
        table = pd.read_csv(self.tmp / 'fit' / 'best_fit.csv', dtype={'seed': str})
        self.assertEqual(table['model'].tolist(), ['target', 'kr', 'er'])
        self.assertEqual(table.loc[0, 'portrait_divergence'], 0.0)
        reports = json.loads((self.tmp / 'fit' / 'best_fit.json').read_text())
        self.assertEqual(list(reports), ['target', 'kr', 'er'])
        self.assertEqual(reports['target']['n'], 60)
        best_seed = reports['kr']['seed']
        self.assertTrue(run.realization_records.filter(model_label='kr', seed=best_seed).exists())

        self.run_experiment('fit2', **options)
        self.assert_same_files(run, 'fit', 'fit2')


@tag('slow')
class ModelSelectionTests(CommandTestCase):
    """KR target of the Bitcoin network's size against 100 realizations of every model"""

    def test_kr_realizations_beat_the_baselines(self):
        target = self.generate('target.txt', n=1288, k=9.7, rng_seed=2021)
        out = self.tmp / 'cmp'
        self.run_command('experiment', kind='comparison', target=str(target), realizations=100,
                         rng_seed=7, out=str(out))
        self.assertEqual(ExperimentRun.objects.latest('id').summary['best_model'], 'kr')

        summary = pd.read_csv(out / 'comparison_summary.csv').set_index('model')
        self.assertEqual(summary['portrait_divergence_median'].idxmin(), 'kr')
        best_baseline = summary.loc[['er', 'ba', 'ws'], 'portrait_divergence_median'].min()
        raw = pd.read_csv(out / 'realizations.csv')
        kr = raw.loc[raw['model'] == 'kr', 'portrait_divergence']
        self.assertEqual(len(kr), 100)
        self.assertGreaterEqual((kr < best_baseline).mean(), 0.95)


class ExitStatusTests(SimpleTestCase):
    """Exit status of manage.py itself, outside call_command"""

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def manage(self, *args):
        return subprocess.run(
            [sys.executable, str(Path(settings.BASE_DIR) / 'manage.py'), *args],
            cwd=settings.BASE_DIR, capture_output=True, text=True, timeout=300,
        )

    def test_argument_errors_exit_with_usage_status(self):
        out = str(self.tmp / 'g.txt')
        cases = [
            ('generate', '--rule', 'zz', '-n', '5', '--out', out),
            ('generate', '-n', '5'),
            ('generate', '-n', 'five', '--out', out),
            ('experiment', '--kind', 'bogus'),
            ('stats',),
        ]
        for args in cases:
            with self.subTest(args=args):
                result = self.manage(*args)
                self.assertEqual(result.returncode, EXIT_USAGE, result.stderr)
                self.assertIn('error:', result.stderr)
        self.assertFalse((self.tmp / 'g.txt').exists())

    def test_validation_and_data_errors(self):
        result = self.manage('generate', '-n', '10', '-m', '4', '--out', str(self.tmp / 'g.txt'))
        self.assertEqual(result.returncode, EXIT_USAGE, result.stderr)
        result = self.manage('stats', str(self.tmp / 'missing.txt'))
        self.assertEqual(result.returncode, EXIT_DATA, result.stderr)

    def test_successful_run_exits_with_zero(self):
        result = self.manage('generate', '-n', '20', '-k', '4', '--out', str(self.tmp / 'g.txt'))
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertTrue((self.tmp / 'g.txt').is_file())

    def test_bad_choice_through_call_command(self):
        with self.assertRaises(CommandError) as context:
            call_command('generate', '--rule', 'zz', '-n', '5', '--out', str(self.tmp / 'g.txt'),
                         stdout=StringIO(), stderr=StringIO())
        self.assertEqual(context.exception.returncode, EXIT_USAGE)
        self.assertIn('invalid choice', str(context.exception))


class ExperimentApiTests(TestCase):

    def setUp(self):
        self.client = APIClient()
        self.run = ExperimentRun.objects.create(
            kind=ExperimentKind.EVOLUTION, status='completed', rng_seed='7', realizations=2,
            output_dir='/tmp/evo', total_realizations=4, completed_realizations=4,
        )
        for index, label in enumerate(['kr', 'kr', 'rr', 'rr']):
            RealizationRecord.objects.create(
                run=self.run, model_label=label, point_key='sweep=degree,n=40,k=4',
                realization_index=index % 2, seed=str(index), metrics={'lcc': 1.0},
            )
        ExperimentRun.objects.create(kind=ExperimentKind.COMPARISON, status='failed', rng_seed='0', output_dir='/tmp/cmp')

    def test_list_and_filters(self):
        response = self.client.get('/api/experiments/runs/')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()), 2)
        response = self.client.get('/api/experiments/runs/', {'kind': 'evolution'})
        runs = response.json()
        self.assertEqual([run['id'] for run in runs], [self.run.id])
        self.assertEqual(runs[0]['progress'], 1.0)
        self.assertEqual(len(self.client.get('/api/experiments/runs/', {'status': 'failed'}).json()), 1)

    def test_detail_and_realizations(self):
        detail = self.client.get(f'/api/experiments/runs/{self.run.id}/').json()
        self.assertEqual(detail['realization_count'], 4)
        self.assertEqual(detail['rng_seed'], '7')
        records = self.client.get(f'/api/experiments/runs/{self.run.id}/realizations/', {'model': 'rr'}).json()
        self.assertEqual([record['model_label'] for record in records], ['rr', 'rr'])

    def test_system_info(self):
        response = self.client.get('/api/system/info/')
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual(data['status'], 'operational')
        self.assertEqual(set(data['libraries']), {'numpy', 'scipy', 'networkx', 'igraph', 'pandas'})
        self.assertEqual(data['statistics']['total_runs'], 2)
        self.assertEqual(data['statistics']['total_realizations'], 4)
