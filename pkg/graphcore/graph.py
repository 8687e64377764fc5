"""
Undirected multigraph representation and node merging.

The Multigraph is the evolving state of the war pact model and the input of
every statistic. Parallel edges are kept as per-neighbour multiplicities;
self-edges are never allowed.
"""

import logging

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .exceptions import (
    AdjacentPairError, GraphError, IdentityMergeError, InvariantViolation, SelfEdgeError
)

logger = logging.getLogger(__name__)


class Multigraph:
    """
    Undirected multigraph on dense integer node handles.

    Adjacency maps node -> {neighbour: multiplicity}. The edge count m counts
    multiplicity. Handles of nodes removed by a merge are never handed out
    again by add_node().
    """

    def __init__(self, nodes=0):
        self._adj = {}
        self._degree = {}
        # Live nodes in an indexable list for O(1) uniform sampling
        self._order = []
        self._position = {}
        self._next_handle = 0
        self._edges = 0
        for _ in range(nodes):
            self.add_node()

    @classmethod
    def from_edges(cls, edges, nodes=0):
        """Build a graph on handles 0..nodes-1 (grown as needed) from (u, v) pairs"""
        graph = cls(nodes)
        for u, v in edges:
            graph.add_edge(u, v)
        return graph

    @classmethod
    def from_networkx(cls, nx_graph):
        """Convert a networkx (multi)graph, assigning handles in node iteration order"""
        handles = {node: index for index, node in enumerate(nx_graph.nodes())}
        graph = cls(len(handles))
        for u, v in nx_graph.edges():
            graph.add_edge(handles[u], handles[v])
        return graph

    # Nodes

    @property
    def n(self):
        return len(self._adj)

    @property
    def m(self):
        return self._edges

    def number_of_nodes(self):
        return len(self._adj)

    def number_of_edges(self, simple=False):
        if simple:
            return sum(len(neighbors) for neighbors in self._adj.values()) // 2
        return self._edges

    def __len__(self):
        return len(self._adj)

    def __contains__(self, node):
        return node in self._adj

    def has_node(self, node):
        return node in self._adj

    def nodes(self):
        """Live node handles in ascending order"""
        return sorted(self._adj)

    def add_node(self, node=None):
        if node is None:
            node = self._next_handle
        elif node in self._adj:
            return node
        self._adj[node] = {}
        self._degree[node] = 0
        self._position[node] = len(self._order)
        self._order.append(node)
        self._next_handle = max(self._next_handle, node + 1)
        return node

    def random_node(self, fraction):
        """Live node at position floor(fraction * n) of the sampling order, fraction in [0, 1)"""
        return self._order[int(fraction * len(self._order))]

    def _require(self, node):
        if node not in self._adj:
            raise GraphError(f'Node {node} is not live')

    def _drop_from_order(self, node):
        index = self._position.pop(node)
        last = self._order.pop()
        if last != node:
            self._order[index] = last
            self._position[last] = index

    # Edges

    def add_edge(self, u, v, multiplicity=1):
        if u == v:
            raise SelfEdgeError(f'Self-edge on node {u} is not allowed')
        if multiplicity < 1:
            raise GraphError(f'Edge multiplicity must be positive, got {multiplicity}')
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = self._adj[u].get(v, 0) + multiplicity
        self._adj[v][u] = self._adj[v].get(u, 0) + multiplicity
        self._degree[u] += multiplicity
        self._degree[v] += multiplicity
        self._edges += multiplicity

    def multiplicity(self, u, v):
        return self._adj[u].get(v, 0)

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def neighbors(self, node):
        return self._adj[node].keys()

    def adjacency(self, node):
        """Read-only view is not enforced; callers must not mutate the returned dict"""
        return self._adj[node]

    def degree(self, node, simple=False):
        if simple:
            return len(self._adj[node])
        return self._degree[node]

    def degrees(self, simple=False):
        """Degrees aligned with nodes()"""
        if simple:
            return np.array([len(self._adj[node]) for node in self.nodes()], dtype=np.int64)
        return np.array([self._degree[node] for node in self.nodes()], dtype=np.int64)

    def edges(self, simple=False):
        """Yield (u, v, multiplicity) once per adjacent pair with u < v"""
        for u in self.nodes():
            for v, count in sorted(self._adj[u].items()):
                if u < v:
                    yield u, v, 1 if simple else count

    def is_simple(self):
        return all(count == 1 for neighbors in self._adj.values() for count in neighbors.values())

    # Merging

    def merge_nodes(self, a, b):
        """
        Replace a and b with one node carrying the union of their edges.

        The node with the larger degree keeps its handle (ties keep a); the
        other handle disappears. Returns the surviving handle.
        """
        if a == b:
            raise IdentityMergeError(a)
        self._require(a)
        self._require(b)
        multiplicity = self._adj[a].get(b, 0)
        if multiplicity:
            raise AdjacentPairError(a, b, multiplicity)

        survivor, absorbed = (a, b) if self._degree[a] >= self._degree[b] else (b, a)
        survivor_adj = self._adj[survivor]
        for neighbor, count in self._adj.pop(absorbed).items():
            neighbor_adj = self._adj[neighbor]
            del neighbor_adj[absorbed]
            neighbor_adj[survivor] = neighbor_adj.get(survivor, 0) + count
            survivor_adj[neighbor] = survivor_adj.get(neighbor, 0) + count
        self._degree[survivor] += self._degree.pop(absorbed)
        self._drop_from_order(absorbed)
        return survivor

    # Conversions

    def simple_projection(self):
        """Same node set, every multiplicity clamped to 1"""
        projection = Multigraph()
        for node in self._order:
            projection.add_node(node)
        for u, v, _ in self.edges(simple=True):
            projection.add_edge(u, v)
        projection._next_handle = self._next_handle
        return projection

    def relabeled(self, rng):
        """Isomorphic copy on handles 0..n-1 assigned by a random permutation"""
        nodes = self.nodes()
        permutation = rng.permutation(len(nodes))
        mapping = {node: int(permutation[index]) for index, node in enumerate(nodes)}
        clone = Multigraph(len(nodes))
        for u, v, count in self.edges():
            clone.add_edge(mapping[u], mapping[v], count)
        return clone

    def to_csr(self):
        """Simple 0/1 adjacency as a CSR matrix, rows ordered like nodes()"""
        nodes = self.nodes()
        index = {node: position for position, node in enumerate(nodes)}
        rows, cols = [], []
        for u, v, _ in self.edges(simple=True):
            rows.extend((index[u], index[v]))
            cols.extend((index[v], index[u]))
        data = np.ones(len(rows), dtype=np.int8)
        matrix = sparse.csr_matrix((data, (rows, cols)), shape=(len(nodes), len(nodes)))
        return matrix, nodes

    def to_networkx(self, multigraph=False):
        nx_graph = nx.MultiGraph() if multigraph else nx.Graph()
        nx_graph.add_nodes_from(self.nodes())
        for u, v, count in self.edges(simple=not multigraph):
            for _ in range(count):
                nx_graph.add_edge(u, v)
        return nx_graph

    def check_invariants(self):
        """Raise InvariantViolation unless adjacency is symmetric, loop-free and sums to 2m"""
        total = 0
        for u, neighbors in self._adj.items():
            if u in neighbors:
                raise InvariantViolation(f'Self-edge on node {u}')
            degree = 0
            for v, count in neighbors.items():
                if count < 1 or self._adj.get(v, {}).get(u) != count:
                    raise InvariantViolation(f'Asymmetric multiplicity between {u} and {v}')
                degree += count
            if degree != self._degree[u]:
                raise InvariantViolation(f'Cached degree of {u} is {self._degree[u]}, adjacency says {degree}')
            total += degree
        if total != 2 * self._edges:
            raise InvariantViolation(f'Degree sum {total} differs from 2m = {2 * self._edges}')

    def __repr__(self):
        return f'<Multigraph n={self.n} m={self.m}>'


def merge_nodes(graph, a, b):
    return graph.merge_nodes(a, b)


def simple_projection(graph):
    return graph.simple_projection()


def connected_components(graph):
    """Maximal components as sets of handles, largest first (ties by smallest handle)"""
    if graph.n == 0:
        return []
    matrix, nodes = graph.to_csr()
    count, labels = csgraph.connected_components(matrix, directed=False)
    components = [set() for _ in range(count)]
    for node, label in zip(nodes, labels):
        components[label].add(node)
    components.sort(key=lambda component: (-len(component), min(component)))
    return components
