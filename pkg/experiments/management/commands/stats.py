"""
Standard statistics of a network
Usage: python manage.py stats trade.txt --out results/trade --modularity-runs 100
"""

from pathlib import Path

from dataio.edgelist import load_and_clean
from dataio.references import REFERENCE_NETWORKS, check_reference, get_reference
from dataio.writers import (
    CLUSTERING_COLUMNS, DISTANCE_COLUMNS, render_json, save_distribution_csv, save_json, save_stats_json
)
from experiments.cli import ToolkitCommand, data_error, usage_error
from graphcore.distances import DistanceProfile
from graphcore.exceptions import GraphError, InsufficientDataError
from netstats.powerlaw import fit_power_law
from netstats.serializers import PowerLawFitSerializer, StatsReportSerializer
from netstats.services import clustering_by_degree, compute_stats, degree_distribution, distance_statistics


class Command(ToolkitCommand):
    help = 'Computes the statistics report of an edge list (JSON on stdout, CSV distributions with --out)'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Edge list')
        parser.add_argument('--out', help='Directory for stats.json and the distribution CSVs')
        parser.add_argument('--modularity-runs', type=int, help='Leiden runs averaged for Q (default 100)')
        parser.add_argument('--simple-degrees', action='store_true',
                            help='Count degrees and edges on the simple projection')
        parser.add_argument('--simple', action='store_true', help='Collapse parallel edges of multigraph files')
        parser.add_argument('--rng-seed', type=int, default=0)
        parser.add_argument('--dataset', choices=list(REFERENCE_NETWORKS),
                            help='Report deviations from the published statistics of this network')
        parser.add_argument('--power-law', action='store_true', help='Also fit a discrete power law to the degrees')

    def handle(self, *args, **options):
        runs = options['modularity_runs']
        if runs is not None and runs < 1:
            raise usage_error({'modularity_runs': 'At least one run is required'}, 'stats')

        try:
            graph, _ = load_and_clean(options['path'], simple=options['simple'])
            profile = DistanceProfile.from_graph(graph)
            report = compute_stats(graph, modularity_runs=runs, simple_degrees=options['simple_degrees'],
                                   rng_seed=options['rng_seed'], profile=profile)
            data = dict(StatsReportSerializer(report.as_dict()).data)

            degrees = degree_distribution(graph, simple=options['simple_degrees'])
            if options['power_law']:
                try:
                    data['power_law'] = PowerLawFitSerializer(fit_power_law(degrees).as_dict()).data
                except InsufficientDataError as e:
                    self.stderr.write(self.style.WARNING(f'Power-law fit skipped: {e}'))

            if options['out']:
                out = Path(options['out'])
                save_stats_json(report, out / 'stats.json')
                save_distribution_csv(degrees, out / 'degree.csv')
                save_distribution_csv(clustering_by_degree(graph), out / 'clustering.csv', columns=CLUSTERING_COLUMNS)
                save_distribution_csv(distance_statistics(graph, profile=profile).distribution,
                                      out / 'distance.csv', columns=DISTANCE_COLUMNS)
                if 'power_law' in data:
                    save_json(data['power_law'], out / 'power_law.json')
        except GraphError as e:
            raise data_error(e)

        if options['dataset']:
            self._report_reference(graph, data, options['dataset'])
        self.stdout.write(render_json(data).decode(), ending='')

    def _report_reference(self, graph, data, key):
        reference = get_reference(key)
        if not check_reference(graph, key):
            self.stderr.write(self.style.WARNING(
                f'{reference.name}: expected n={reference.n} m={reference.m}, loaded n={graph.n} m={graph.m}'
            ))
        for field, published in reference.as_dict().items():
            if field in ('key', 'name') or data.get(field) is None:
                continue
            self.stderr.write(f'  {field:16} {data[field]:>10.4g}  published {published:>8.4g}')
