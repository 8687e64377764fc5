"""
Merge bookkeeping for the war pact model.

Every edge endpoint of the seed graph is a slot; a slot belongs to the node
currently holding that endpoint. A uniformly drawn slot therefore picks a
live node with probability proportional to its degree. Ownership is kept
in a disjoint-set forest over node handles, so a merge is a single union.
"""

from .exceptions import InvariantViolation


class MergeMap:
    """Disjoint-set map from seed slots (0..2m-1) to live node handles"""

    def __init__(self, slot_nodes, node_count):
        self._slot_node = list(slot_nodes)
        self._parent = list(range(node_count))
        self._slots = [0] * node_count
        for node in self._slot_node:
            self._slots[node] += 1

    @classmethod
    def from_graph(cls, graph):
        """One slot per edge endpoint, repeated for every unit of multiplicity"""
        slot_nodes = []
        for u, v, count in graph.edges():
            for _ in range(count):
                slot_nodes.append(u)
                slot_nodes.append(v)
        size = max(graph.nodes(), default=-1) + 1
        return cls(slot_nodes, size)

    def __len__(self):
        return len(self._slot_node)

    def find(self, node):
        parent = self._parent
        while parent[node] != node:
            # path halving
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    def owner(self, slot):
        """Live node holding the given slot"""
        return self.find(self._slot_node[slot])

    def union(self, survivor, absorbed):
        """Record that absorbed was merged into survivor; both must be live roots"""
        self._parent[absorbed] = survivor
        self._slots[survivor] += self._slots[absorbed]
        self._slots[absorbed] = 0

    def slot_count(self, node):
        return self._slots[self.find(node)]

    def verify(self, graph):
        """Slot count equals multigraph degree for every live node; every slot owned by a live node"""
        for slot in range(len(self._slot_node)):
            owner = self.owner(slot)
            if owner not in graph:
                raise InvariantViolation(f'Slot {slot} maps to merged-away node {owner}')
        for node in graph.nodes():
            if self.find(node) != node:
                raise InvariantViolation(f'Live node {node} is not a root of the merge map')
            if self.slot_count(node) != graph.degree(node):
                raise InvariantViolation(
                    f'Node {node} owns {self.slot_count(node)} slots but has degree {graph.degree(node)}'
                )
