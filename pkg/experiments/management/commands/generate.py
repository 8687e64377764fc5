"""
Generate one network and write it as an edge list
Usage: python manage.py generate --model wp --rule kr -n 1000 -k 10 --rng-seed 7 --out kr.txt
"""

from dataio.edgelist import save_edge_list
from experiments.cli import ToolkitCommand, data_error, usage_error
from generators.serializers import ModelSpecSerializer
from generators.services import WarPactGenerator, generate_graph
from generators.specs import ModelKind, SeedKind, SelectionRule
from graphcore.exceptions import GraphError
from netstats.services import lcc_fraction


class Command(ToolkitCommand):
    help = 'Generates a war pact or baseline network and writes it as an edge list'

    def add_arguments(self, parser):
        parser.add_argument('--model', choices=ModelKind.values, default=ModelKind.WAR_PACT.value)
        parser.add_argument('--rule', choices=SelectionRule.values, default=SelectionRule.KR.value)
        parser.add_argument('--seed-kind', choices=SeedKind.values, default=SeedKind.MATCHING.value)
        parser.add_argument('-n', type=int, required=True, help='Number of nodes')
        parser.add_argument('-m', type=int, help='Number of edges (counting multiplicity)')
        parser.add_argument('-k', type=float, help='Average degree; m = round(n k / 2)')
        parser.add_argument('--rewire', type=float, help='Watts-Strogatz rewiring probability')
        parser.add_argument('--rng-seed', type=int, default=0)
        parser.add_argument('--out', required=True, help='Edge list path')
        parser.add_argument('--check-invariants', action='store_true',
                            help='Verify merge bookkeeping after every step (slow)')

    def handle(self, *args, **options):
        serializer = ModelSpecSerializer(data={
            'kind': options['model'],
            'n': options['n'],
            'm': options['m'],
            'mean_degree': options['k'],
            'rule': options['rule'],
            'seed_kind': options['seed_kind'],
            'rng_seed': options['rng_seed'],
            'rewire': options['rewire'],
        })
        if not serializer.is_valid():
            raise usage_error(serializer.errors, 'generate')
        spec = serializer.validated_data['spec']

        try:
            if options['check_invariants'] and spec.kind == ModelKind.WAR_PACT:
                graph = WarPactGenerator(spec, check_invariants=True).generate()
            else:
                graph = generate_graph(spec)
            path = save_edge_list(graph, options['out'])
        except GraphError as e:
            raise data_error(e)

        self.stdout.write(self.style.SUCCESS(
            f'{spec.label}: n={graph.n} m={graph.m} LCC={lcc_fraction(graph):.4f} -> {path}'
        ))
