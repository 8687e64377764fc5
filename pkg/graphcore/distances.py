"""
Breadth-first distances shared by the statistics and comparison apps.

Any positive multiplicity counts as a single hop. Unreachable pairs carry the
UNREACHABLE sentinel and are never mixed into finite distances.
"""

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy.sparse import csgraph

from .graph import connected_components

logger = logging.getLogger(__name__)

UNREACHABLE = -1


def bfs_distances(graph, source):
    """Hop distance from source to every node, aligned with graph.nodes()"""
    nodes = graph.nodes()
    distance = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        step = distance[node] + 1
        for neighbor in graph.neighbors(node):
            if neighbor not in distance:
                distance[neighbor] = step
                queue.append(neighbor)
    return np.array([distance.get(node, UNREACHABLE) for node in nodes], dtype=np.int64)


def iter_distance_rows(graph, chunk_size=None):
    """
    Yield (first_row, rows) blocks of the all-pairs distance matrix.

    rows is an int array of shape (block, n) ordered like graph.nodes(), with
    UNREACHABLE for pairs in different components. Blocks are computed with
    csgraph BFS so the full n x n matrix never has to exist at once.
    """
    chunk_size = chunk_size or settings.WARPACT['BFS_CHUNK']
    matrix, nodes = graph.to_csr()
    n = len(nodes)
    for start in range(0, n, chunk_size):
        indices = np.arange(start, min(start + chunk_size, n))
        block = csgraph.shortest_path(matrix, method='D', directed=False, unweighted=True, indices=indices)
        block = np.atleast_2d(block)
        rows = np.where(np.isinf(block), UNREACHABLE, block).astype(np.int64)
        yield start, rows


def _shell_counts(rows):
    """Per-row histogram of finite distances (self at distance 0 included)"""
    width = int(rows.max()) + 1 if rows.size else 1
    width = max(width, 1)
    block = rows.shape[0]
    reachable = rows >= 0
    offsets = np.arange(block)[:, None] * width
    flat = (rows + offsets)[reachable]
    return np.bincount(flat, minlength=block * width).reshape(block, width)


@dataclass
class DistanceProfile:
    """
    Distance structure of one graph.

    shell_counts[i, d] is the number of nodes at distance exactly d from the
    i-th node (node order of graph.nodes()), d = 0..diameter, self included.
    """
    nodes: list
    shell_counts: np.ndarray
    component_sizes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @classmethod
    def from_graph(cls, graph, chunk_size=None):
        blocks = []
        width = 1
        for _, rows in iter_distance_rows(graph, chunk_size):
            counts = _shell_counts(rows)
            width = max(width, counts.shape[1])
            blocks.append(counts)
        shell_counts = np.zeros((graph.n, width), dtype=np.int64)
        position = 0
        for counts in blocks:
            shell_counts[position:position + counts.shape[0], :counts.shape[1]] = counts
            position += counts.shape[0]
        sizes = np.array([len(component) for component in connected_components(graph)], dtype=np.int64)
        logger.info(f'Distance profile: n={graph.n}, diameter={width - 1}, components={len(sizes)}')
        return cls(nodes=graph.nodes(), shell_counts=shell_counts, component_sizes=sizes)

    @property
    def n(self):
        return self.shell_counts.shape[0]

    @property
    def diameter(self):
        return self.shell_counts.shape[1] - 1

    @property
    def reachable_counts(self):
        """Nodes reachable from each node, itself included"""
        return self.shell_counts.sum(axis=1)

    @property
    def node_distributions(self):
        """D_i: fraction of all n nodes at each distance from node i"""
        return self.shell_counts / self.n

    @property
    def mean_distribution(self):
        return self.node_distributions.mean(axis=0)

    @property
    def pair_distance_counts(self):
        """Ordered node pairs at each distance, the n self-pairs at d = 0 included"""
        return self.shell_counts.sum(axis=0)

    @property
    def unreachable_fraction(self):
        """Fraction of unordered distinct pairs lying in different components"""
        n = self.n
        if n < 2:
            return 0.0
        reachable_pairs = (self.reachable_counts.sum() - n) / 2
        total_pairs = n * (n - 1) / 2
        return float(1.0 - reachable_pairs / total_pairs)

    @property
    def squared_component_sizes(self):
        """Sum over components of n_c squared, i.e. the number of ordered reachable pairs"""
        return int(np.sum(self.component_sizes.astype(np.int64) ** 2))
