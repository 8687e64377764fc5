"""
Dissimilarity of two networks
Usage: python manage.py compare a.txt b.txt [--out portraits/]
"""

from pathlib import Path

from dataio.edgelist import load_and_clean
from dataio.writers import render_json, save_json, save_portrait_csv
from experiments.cli import ToolkitCommand, data_error
from graphcompare.services import compare, portrait
from graphcore.distances import DistanceProfile
from graphcore.exceptions import GraphError


class Command(ToolkitCommand):
    help = 'Prints the D-measure and the portrait divergence of two edge lists as JSON'

    def add_arguments(self, parser):
        parser.add_argument('path_a')
        parser.add_argument('path_b')
        parser.add_argument('--out', help='Directory for both portraits (CSV) and the score details (JSON)')
        parser.add_argument('--simple', action='store_true', help='Collapse parallel edges of multigraph files')

    def handle(self, *args, **options):
        try:
            profiles = []
            for key in ('path_a', 'path_b'):
                graph, _ = load_and_clean(options[key], simple=options['simple'])
                profiles.append(DistanceProfile.from_graph(graph))
            scores = compare(*profiles)

            if options['out']:
                out = Path(options['out'])
                for name, profile in zip(('a', 'b'), profiles):
                    save_portrait_csv(portrait(profile), out / f'portrait_{name}.csv')
                save_json({measure: {'value': score.value, 'details': score.details}
                           for measure, score in scores.items()}, out / 'compare.json')
        except GraphError as e:
            raise data_error(e)

        self.stdout.write(
            render_json({measure: score.value for measure, score in scores.items()}).decode(),
            ending='',
        )
