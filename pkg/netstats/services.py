"""
Network Statistics Service
Description: Degree, clustering, distance, assortativity and component
statistics, and the full per-graph report.

Clustering and modularity always use the simple projection. Degrees and
assortativity count parallel edges unless simple=True.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import networkx as nx
import numpy as np
from django.conf import settings

from graphcore.distances import DistanceProfile
from graphcore.exceptions import GraphError, UndefinedCorrelationError
from graphcore.graph import connected_components

from .communities import detect_communities
from .powerlaw import DegreeDistribution

logger = logging.getLogger(__name__)


def degree_distribution(graph, simple=False):
    return DegreeDistribution.from_degrees(graph.degrees(simple=simple), multiplicity=not simple)


def clustering_coefficient(graph, node):
    """2 t_i / (k_i (k_i - 1)) on the simple projection; 0 when k_i <= 1"""
    if node not in graph:
        raise GraphError(f'Node {node} is not live')
    return float(nx.clustering(graph.to_networkx(), node))


def clustering_values(graph):
    """node -> C_i for every live node"""
    return nx.clustering(graph.to_networkx())


def mean_clustering(graph):
    if graph.n == 0:
        return 0.0
    values = clustering_values(graph)
    return float(sum(values.values()) / graph.n)


def clustering_by_degree(graph):
    """k -> mean C_i over nodes of simple degree k, ascending k"""
    values = clustering_values(graph)
    grouped = {}
    for node, value in values.items():
        grouped.setdefault(graph.degree(node, simple=True), []).append(value)
    return {k: float(np.mean(grouped[k])) for k in sorted(grouped)}


@dataclass
class DistanceStatistics:
    """
    Statistics over reachable unordered pairs of distinct nodes.

    distribution maps d >= 1 to the fraction of reachable pairs at distance d.
    With no reachable pair mean_distance and diameter are 0.
    """
    mean_distance: float
    diameter: int
    distribution: dict = field(default_factory=dict)
    unreachable_fraction: float = 0.0
    reachable_pairs: int = 0


def distance_statistics(graph, profile=None):
    profile = profile or DistanceProfile.from_graph(graph)
    pair_counts = profile.pair_distance_counts[1:] // 2
    reachable_pairs = int(pair_counts.sum())
    if reachable_pairs == 0:
        return DistanceStatistics(
            mean_distance=0.0, diameter=0, distribution={},
            unreachable_fraction=profile.unreachable_fraction, reachable_pairs=0,
        )
    distances = np.arange(1, len(pair_counts) + 1)
    distribution = {int(d): float(count / reachable_pairs) for d, count in zip(distances, pair_counts) if count}
    return DistanceStatistics(
        mean_distance=float((distances * pair_counts).sum() / reachable_pairs),
        diameter=profile.diameter,
        distribution=distribution,
        unreachable_fraction=profile.unreachable_fraction,
        reachable_pairs=reachable_pairs,
    )


def assortativity(graph, simple=False):
    """
    Pearson correlation of endpoint degrees over both orientations of every
    edge. Parallel edges count once per unit of multiplicity unless simple.
    """
    left, right, weights = [], [], []
    for u, v, count in graph.edges(simple=simple):
        left.append(graph.degree(u, simple=simple))
        right.append(graph.degree(v, simple=simple))
        weights.append(count)
    if not weights:
        raise UndefinedCorrelationError('Assortativity is undefined for a graph without edges')

    x = np.concatenate((left, right)).astype(np.float64)
    y = np.concatenate((right, left)).astype(np.float64)
    w = np.concatenate((weights, weights)).astype(np.float64)
    mean = np.average(x, weights=w)
    variance = np.average((x - mean) ** 2, weights=w)
    if variance <= 1e-12 * max(mean * mean, 1.0):
        raise UndefinedCorrelationError('All edge endpoints have the same degree')
    covariance = np.average((x - mean) * (y - mean), weights=w)
    return float(np.clip(covariance / variance, -1.0, 1.0))


def lcc_fraction(graph):
    if graph.n == 0:
        return 0.0
    return len(connected_components(graph)[0]) / graph.n


@dataclass
class StatsReport:
    n: int
    m: int
    lcc: float
    mean_degree: float
    mean_clustering: float
    mean_distance: float
    diameter: int
    assortativity: Optional[float]
    modularity: float
    modularity_runs: int
    unreachable_fraction: float = 0.0

    def as_dict(self):
        return asdict(self)


def compute_stats(graph, modularity_runs=None, simple_degrees=False, rng_seed=0, profile=None):
    """
    Full statistics report of one graph.

    assortativity is None (and a warning logged) when it is undefined.
    """
    modularity_runs = modularity_runs or settings.WARPACT['MODULARITY_RUNS']
    start_time = time.time()
    logger.info(f'Computing statistics for {graph!r}')

    m = graph.number_of_edges(simple=simple_degrees)
    profile = profile or DistanceProfile.from_graph(graph)
    distances = distance_statistics(graph, profile=profile)

    try:
        r = assortativity(graph, simple=simple_degrees)
    except UndefinedCorrelationError as e:
        logger.warning(f'Assortativity undefined: {e}')
        r = None

    _, mean_q = detect_communities(graph, runs=modularity_runs, rng_seed=rng_seed)
    components = profile.component_sizes

    report = StatsReport(
        n=graph.n,
        m=m,
        lcc=float(components[0] / graph.n) if graph.n else 0.0,
        mean_degree=2 * m / graph.n if graph.n else 0.0,
        mean_clustering=mean_clustering(graph),
        mean_distance=distances.mean_distance,
        diameter=distances.diameter,
        assortativity=r,
        modularity=mean_q,
        modularity_runs=modularity_runs,
        unreachable_fraction=distances.unreachable_fraction,
    )
    logger.info(f'Statistics computed in {time.time() - start_time:.2f}s')
    return report
