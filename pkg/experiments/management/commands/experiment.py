"""
Reproduce an experiment as a CSV bundle
Usage:
    python manage.py experiment --kind distributions -n 10000 -k 10
    python manage.py experiment --kind evolution --realizations 25 --workers 4
    python manage.py experiment --kind comparison --target bitcoin.txt --dataset bitcoin
    python manage.py experiment --kind best_fit --target trade.txt --modularity-runs 100
"""

from django.core.exceptions import ValidationError

from dataio.references import REFERENCE_NETWORKS
from experiments.cli import ToolkitCommand, comma_list, data_error, usage_error
from experiments.models import ExperimentKind
from experiments.plans import ExperimentPlan
from experiments.services import ExperimentCoordinator
from graphcore.exceptions import GraphError


class Command(ToolkitCommand):
    help = 'Runs a distributions, evolution, comparison or best_fit experiment and writes CSV/JSON results'

    def add_arguments(self, parser):
        parser.add_argument('--kind', choices=ExperimentKind.values, required=True)
        parser.add_argument('--realizations', type=int,
                            help='Realizations per model and parameter point (default depends on --kind)')
        parser.add_argument('--target', help='Edge list of the network to reproduce (comparison, best_fit)')
        parser.add_argument('--dataset', choices=list(REFERENCE_NETWORKS),
                            help='Published network the target stands for; warns on (n, m) mismatch')
        parser.add_argument('--out', help='Output directory (default WARPACT_OUTPUT_DIR/<kind>)')
        parser.add_argument('--rng-seed', type=int, default=0)
        parser.add_argument('--models', help='Comma-separated subset of rr,kk,kr,ki,er,ba,ws')
        parser.add_argument('--seed-kinds', help='Comma-separated subset of matching,er,tree')
        parser.add_argument('-n', type=int, help='Number of nodes (distributions; degree sweep of evolution)')
        parser.add_argument('-k', type=float, help='Average degree (distributions; size sweep of evolution)')
        parser.add_argument('--degrees', help='Comma-separated average degrees of the evolution degree sweep')
        parser.add_argument('--sizes', help='Comma-separated sizes of the evolution size sweep')
        parser.add_argument('--workers', type=int, help='Worker processes')
        parser.add_argument('--modularity-runs', type=int)
        parser.add_argument('--simple-degrees', action='store_true')
        parser.add_argument('--rewire', type=float, help='Watts-Strogatz rewiring probability')

    def handle(self, *args, **options):
        try:
            plan = ExperimentPlan(
                kind=options['kind'],
                realizations=options['realizations'],
                output_dir=options['out'],
                rng_seed=options['rng_seed'],
                models=comma_list(options['models']) if options['models'] else [],
                seed_kinds=comma_list(options['seed_kinds']) if options['seed_kinds'] else [],
                n=options['n'],
                mean_degree=options['k'],
                degrees=comma_list(options['degrees'], float) if options['degrees'] else [],
                sizes=comma_list(options['sizes'], int) if options['sizes'] else [],
                target=options['target'],
                dataset=options['dataset'],
                modularity_runs=options['modularity_runs'],
                workers=options['workers'],
                simple_degrees=options['simple_degrees'],
                rewire=options['rewire'],
            )
            coordinator = ExperimentCoordinator(plan, stdout=self.stdout if options['verbosity'] > 1 else None)
        except ValidationError as e:
            raise usage_error(e, 'experiment')
        except ValueError as e:
            raise usage_error(str(e), 'experiment')

        self.stdout.write(self.style.SUCCESS(
            f'Running {plan.kind}: {len(plan.models)} models x {plan.realizations} realizations -> {plan.output_dir}'
        ))
        try:
            run = coordinator.execute()
        except ValidationError as e:
            raise usage_error(e, 'experiment')
        except GraphError as e:
            raise data_error(e)

        style = self.style.SUCCESS if run.status == 'completed' else self.style.WARNING
        self.stdout.write(style(
            f'Run #{run.id} {run.get_status_display()}: {run.completed_realizations}/{run.total_realizations} '
            f'realizations in {run.execution_time_seconds:.1f}s'
        ))
        for filename in run.summary.get('files', []):
            self.stdout.write(f'  {plan.output_dir / filename}')
        if run.status == 'failed':
            raise data_error(GraphError(f'All realizations failed; see run #{run.id} errors'))
