"""
Published statistics of the four real networks used for model comparison.
"""

import logging
from dataclasses import asdict, dataclass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReferenceNetwork:
    key: str
    name: str
    n: int
    m: int
    lcc: float
    mean_degree: float
    mean_clustering: float
    mean_distance: float
    diameter: int
    assortativity: float
    modularity: float

    def as_dict(self):
        return asdict(self)


REFERENCE_NETWORKS = {
    'war': ReferenceNetwork('war', 'Correlates of war', 41, 54, 0.878, 2.63, 0.28, 2.58, 8, -0.29, 0.60),
    'trade': ReferenceNetwork('trade', 'International trade', 130, 3730, 1.0, 57.38, 0.50, 2.24, 5, -0.07, 0.21),
    'bitcoin': ReferenceNetwork('bitcoin', 'Bitcoin transactions', 1288, 6236, 0.988, 9.68, 0.33, 2.83, 9, -0.28, 0.39),
    'as': ReferenceNetwork('as', 'Autonomous systems', 3213, 11248, 1.0, 7.00, 0.18, 3.77, 9, -0.22, 0.64),
}


def get_reference(key):
    try:
        return REFERENCE_NETWORKS[key]
    except KeyError:
        raise ValueError(f'Unknown dataset {key!r}; expected one of {", ".join(REFERENCE_NETWORKS)}')


def check_reference(graph, key):
    """True when graph has the published (n, m); logs a warning otherwise"""
    reference = get_reference(key)
    matches = graph.n == reference.n and graph.m == reference.m
    if not matches:
        logger.warning(
            f'{reference.name}: loaded n={graph.n} m={graph.m}, published n={reference.n} m={reference.m}'
        )
    return matches
