"""
Classical random graph baselines: Erdős-Rényi, Barabási-Albert and
Watts-Strogatz. All return simple graphs.
"""

import logging

import networkx as nx

from graphcore.graph import Multigraph

from .streams import make_rng

logger = logging.getLogger(__name__)


def _nx_seed(spec, rng):
    rng = rng if rng is not None else make_rng(spec.rng_seed)
    return int(rng.integers(2 ** 32))


def generate_er(spec, rng=None) -> Multigraph:
    """G(n, p) with p = <k>/(n-1)"""
    spec.clean()
    p = spec.edge_probability
    nx_graph = nx.fast_gnp_random_graph(spec.n, p, seed=_nx_seed(spec, rng))
    logger.info(f'ER graph: n={spec.n} p={p:.6f} m={nx_graph.number_of_edges()}')
    return Multigraph.from_networkx(nx_graph)


def generate_ba(spec, rng=None) -> Multigraph:
    """Preferential attachment from a clique on a+1 nodes, a = round(<k>/2) edges per arrival"""
    spec.clean()
    attach = spec.attach
    nx_graph = nx.barabasi_albert_graph(
        spec.n, attach, seed=_nx_seed(spec, rng), initial_graph=nx.complete_graph(attach + 1)
    )
    if nx_graph.number_of_edges() != spec.m:
        logger.info(f'BA graph: requested m={spec.m}, achieved m={nx_graph.number_of_edges()} (attach={attach})')
    return Multigraph.from_networkx(nx_graph)


def generate_ws(spec, rng=None) -> Multigraph:
    """Ring lattice of even degree <k> with each edge rewired with probability spec.rewire"""
    spec.clean()
    degree = int(spec.mean_degree)
    nx_graph = nx.watts_strogatz_graph(spec.n, degree, spec.rewire, seed=_nx_seed(spec, rng))
    logger.info(f'WS graph: n={spec.n} k={degree} rewire={spec.rewire} m={nx_graph.number_of_edges()}')
    return Multigraph.from_networkx(nx_graph)
