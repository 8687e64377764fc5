"""
War Pact Generator Service
Description: Shrinking-network generation by iterative node merging.

The model starts from m edges on at most 2m nodes and merges two non-adjacent nodes
per step until n nodes remain, so the edge count never changes. The pair is
drawn by one of four selection rules; rejected pairs (same node or adjacent
nodes) are redrawn without consuming a step.
"""

import logging
import time

import networkx as nx
from django.conf import settings

from graphcore.exceptions import InvariantViolation, MergeRejected, NonTerminationError
from graphcore.graph import Multigraph
from graphcore.merge_map import MergeMap

from .baselines import generate_ba, generate_er, generate_ws
from .sampling import FenwickSampler, UniformStream
from .specs import ModelKind, SeedKind, SelectionRule
from .streams import make_rng

logger = logging.getLogger(__name__)


class WarPactGenerator:
    """
    Runs one realization of the war pact model for a cleaned ModelSpec.

    With check_invariants=True every accepted merge is followed by a full
    structural check (node count seed nodes - t, fixed m, no self-edges, slot counts
    equal to degrees); it is meant for tests and is slow.
    """

    def __init__(self, spec, rng=None, retry_factor=None, check_invariants=False):
        self.spec = spec.clean()
        self.rng = rng if rng is not None else make_rng(self.spec.rng_seed)
        self.retry_factor = retry_factor or settings.WARPACT['RETRY_FACTOR']
        self.check_invariants = check_invariants

        self.graph = None
        self.seed_nodes = 0
        self.merge_map = None
        self.inverse_degree = None
        self.uniform = None

        self.stats = {
            'merges': 0,
            'rejections': 0,
            'max_consecutive_rejections': 0,
            'execution_time_seconds': 0.0,
        }

    def generate(self) -> Multigraph:
        """Main entry point; returns the graph with exactly n nodes and m edges"""
        spec = self.spec
        start_time = time.time()
        logger.info(
            f'Starting war pact generation: rule={spec.rule} seed={spec.seed_kind} '
            f'n={spec.n} m={spec.m} rng_seed={spec.rng_seed}'
        )

        # Phase 1: seed graph with m edges and at least n nodes
        self.graph = self._seed_graph()
        self.seed_nodes = self.graph.n
        self.merge_map = MergeMap.from_graph(self.graph)
        self.uniform = UniformStream(self.rng)
        if spec.rule == SelectionRule.KI:
            self.inverse_degree = FenwickSampler([
                1.0 / max(self.graph.degree(node), 1) for node in range(self.seed_nodes)
            ])
        if self.check_invariants:
            self._verify(0)

        # Phase 2: merge until n nodes remain
        steps = self.seed_nodes - spec.n
        budget = self.retry_factor * spec.n
        logger.info(f'Merging {steps} times (rejection budget {budget} per step)')
        for step in range(steps):
            self._merge_step(step, budget)
            if self.check_invariants:
                self._verify(step + 1)

        self.stats['execution_time_seconds'] = time.time() - start_time
        logger.info(
            f"War pact generation finished in {self.stats['execution_time_seconds']:.2f}s: "
            f"{self.stats['merges']} merges, {self.stats['rejections']} rejected pairs"
        )
        return self.graph

    def _seed_graph(self) -> Multigraph:
        """
        Seed with m edges. The matching has exactly 2m nodes. The ER and tree
        seeds are drawn on 2m nodes and then lose their isolated nodes, except
        for as many as are needed to keep n nodes available.
        """
        m = self.spec.m
        seed_kind = self.spec.seed_kind
        if seed_kind == SeedKind.MATCHING:
            graph = Multigraph(2 * m)
            for i in range(m):
                graph.add_edge(i, m + i)
        else:
            if seed_kind == SeedKind.ER:
                drawn = Multigraph.from_networkx(
                    nx.gnm_random_graph(2 * m, m, seed=int(self.rng.integers(2 ** 32)))
                )
            else:
                drawn = self._random_forest(2 * m, m)
            graph = _without_isolated(drawn, min_nodes=self.spec.n)
            isolated = sum(1 for node in graph.nodes() if not graph.degree(node))
            if isolated:
                logger.warning(f'{seed_kind} seed kept {isolated} isolated nodes to reach n={self.spec.n}')
        logger.info(f'Seeded {seed_kind} graph: {graph.n} nodes, {graph.m} edges')
        return graph

    def _random_forest(self, nodes, edges):
        """
        Random recursive forest: the first nodes - edges nodes of a random
        order are roots, every later node attaches to a uniformly chosen
        earlier one. Yields exactly `edges` edges on `nodes` nodes.
        """
        order = self.rng.permutation(nodes)
        roots = nodes - edges
        targets = self.rng.random(edges)
        graph = Multigraph(nodes)
        for offset in range(edges):
            position = roots + offset
            earlier = int(targets[offset] * position)
            graph.add_edge(int(order[position]), int(order[earlier]))
        return graph

    def _draw(self, mode):
        if mode == 'degree':
            return self.merge_map.owner(int(self.uniform.next() * len(self.merge_map)))
        if mode == 'uniform':
            return self.graph.random_node(self.uniform.next())
        node = self.inverse_degree.sample(self.uniform.next())
        # float drift in the tree can land on a zero-weight (merged) key
        return node if node in self.graph else None

    def _select_pair(self):
        first, second = _RULE_MODES[str(self.spec.rule)]
        return self._draw(first), self._draw(second)

    def _merge_step(self, step, budget):
        rejected = 0
        while True:
            a, b = self._select_pair()
            try:
                if a is None or b is None:
                    raise MergeRejected(a, b, 'stale inverse-degree draw')
                survivor = self.graph.merge_nodes(a, b)
                break
            except MergeRejected:
                rejected += 1
                self.stats['rejections'] += 1
                if rejected >= budget:
                    logger.error(f'Rejection budget exhausted at step {step} with {self.graph.n} nodes')
                    raise NonTerminationError(step, rejected, self.graph.n)

        absorbed = b if survivor == a else a
        self.merge_map.union(survivor, absorbed)
        if self.inverse_degree is not None:
            self.inverse_degree.update(absorbed, 0.0)
            self.inverse_degree.update(survivor, 1.0 / max(self.graph.degree(survivor), 1))

        self.stats['merges'] += 1
        if rejected > self.stats['max_consecutive_rejections']:
            self.stats['max_consecutive_rejections'] = rejected
            if rejected > 100 * self.spec.n:
                logger.warning(f'Step {step}: {rejected} consecutive rejected pairs')

    def _verify(self, merges):
        expected_nodes = self.seed_nodes - merges
        if self.graph.n != expected_nodes:
            raise InvariantViolation(f'After {merges} merges expected {expected_nodes} nodes, found {self.graph.n}')
        if self.graph.m != self.spec.m:
            raise InvariantViolation(f'Edge count changed to {self.graph.m}, expected {self.spec.m}')
        self.graph.check_invariants()
        self.merge_map.verify(self.graph)


def _without_isolated(graph, min_nodes=0):
    """
    Copy on handles 0..k-1 keeping the nodes with at least one edge, plus the
    first isolated nodes in handle order while fewer than min_nodes are kept
    """
    nodes = graph.nodes()
    connected = [node for node in nodes if graph.degree(node)]
    shortfall = max(0, min_nodes - len(connected))
    kept = connected + [node for node in nodes if not graph.degree(node)][:shortfall]
    handles = {node: index for index, node in enumerate(sorted(kept))}
    compact = Multigraph(len(handles))
    for u, v, count in graph.edges():
        compact.add_edge(handles[u], handles[v], count)
    return compact


_RULE_MODES = {
    SelectionRule.RR.value: ('uniform', 'uniform'),
    SelectionRule.KK.value: ('degree', 'degree'),
    SelectionRule.KR.value: ('degree', 'uniform'),
    SelectionRule.KI.value: ('degree', 'inverse'),
}


def generate_war_pact(spec, rng=None, check_invariants=False):
    return WarPactGenerator(spec, rng=rng, check_invariants=check_invariants).generate()


def generate_graph(spec, rng=None):
    """Dispatch on spec.kind; every generator is deterministic given spec.rng_seed"""
    spec.clean()
    if spec.kind == ModelKind.WAR_PACT:
        return generate_war_pact(spec, rng=rng)
    if spec.kind == ModelKind.ER:
        return generate_er(spec, rng=rng)
    if spec.kind == ModelKind.BA:
        return generate_ba(spec, rng=rng)
    return generate_ws(spec, rng=rng)
