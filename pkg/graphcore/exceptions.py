"""
Error hierarchy shared by every toolkit app.

Everything raised on purpose derives from GraphError, so command entry
points can tell data problems apart from programming errors.
"""


class GraphError(Exception):
    """Base class for toolkit errors"""


class MergeRejected(GraphError):
    """The pair cannot be merged; callers resample instead of aborting"""

    def __init__(self, a, b, reason):
        self.a = a
        self.b = b
        super().__init__(f'Cannot merge {a} and {b}: {reason}')


class IdentityMergeError(MergeRejected):
    def __init__(self, node):
        super().__init__(node, node, 'a node cannot be merged with itself')


class AdjacentPairError(MergeRejected):
    def __init__(self, a, b, multiplicity):
        self.multiplicity = multiplicity
        super().__init__(a, b, f'nodes are adjacent (multiplicity {multiplicity}), merging would create a self-edge')


class SelfEdgeError(GraphError):
    pass


class InvariantViolation(GraphError):
    """A structural invariant of the multigraph or merge map does not hold"""


class DegenerateGraphError(GraphError):
    """The graph is too small or empty for the requested measure"""


class UndefinedCorrelationError(GraphError):
    """Endpoint degrees have zero variance, so Pearson's r is undefined"""


class InsufficientDataError(GraphError):
    pass


class NonTerminationError(GraphError):
    """Rejection sampling exhausted its retry budget within one step"""

    def __init__(self, step, attempts, nodes):
        self.step = step
        self.attempts = attempts
        self.nodes = nodes
        super().__init__(
            f'Step {step}: {attempts} consecutive pairs rejected with {nodes} nodes left; '
            f'the remaining nodes are (nearly) pairwise adjacent'
        )


class EdgeListError(GraphError):
    pass


class EdgeListParseError(EdgeListError):
    def __init__(self, path, line_number, line):
        self.path = path
        self.line_number = line_number
        self.line = line
        super().__init__(f'{path}:{line_number}: expected two node tokens, got {line!r}')


class EmptyGraphError(EdgeListError):
    pass


class DataIOError(GraphError):
    def __init__(self, path, error):
        self.path = path
        super().__init__(f'{path}: {error}')
