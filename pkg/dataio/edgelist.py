"""
Edge list reading and writing.

Format: UTF-8 text, one edge per line as two whitespace-separated node
tokens. Lines starting with '#' are comments. An optional first line
'%multigraph' marks a file whose repeated lines are parallel edges; any
other line starting with '%' is malformed.
"""

import logging
from pathlib import Path

from graphcore.exceptions import DataIOError, EdgeListParseError, EmptyGraphError
from graphcore.graph import Multigraph

logger = logging.getLogger(__name__)

MULTIGRAPH_HEADER = '%multigraph'


def _read_lines(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return handle.read().splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(path, e)


def load_and_clean(path, simple=False):
    """
    Load an undirected graph and return (graph, token -> handle map).

    Self-edges are dropped and nodes left without edges never get a handle.
    Duplicate lines collapse into one edge unless the file carries the
    multigraph header and simple is False. Handles follow the first
    appearance of each token among the kept edges.
    """
    lines = _read_lines(path)
    has_header = bool(lines) and lines[0].strip() == MULTIGRAPH_HEADER
    keep_multiplicity = has_header and not simple

    graph = Multigraph()
    tokens = {}
    self_edges = 0
    duplicates = 0
    for line_number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#') or (line_number == 1 and has_header):
            continue
        if stripped.startswith('%'):
            raise EdgeListParseError(path, line_number, line)
        parts = stripped.split()
        if len(parts) != 2:
            raise EdgeListParseError(path, line_number, line)
        source, target = parts
        if source == target:
            self_edges += 1
            continue
        u = tokens.setdefault(source, len(tokens))
        v = tokens.setdefault(target, len(tokens))
        if not keep_multiplicity and graph.has_edge(u, v):
            duplicates += 1
            continue
        graph.add_edge(u, v)

    if graph.n == 0:
        raise EmptyGraphError(f'{path}: no edges left after removing self-edges')
    if self_edges or duplicates:
        logger.info(f'{path}: dropped {self_edges} self-edges and {duplicates} duplicate edges')
    logger.info(f'Loaded {path}: n={graph.n} m={graph.m}{" (multigraph)" if keep_multiplicity else ""}')
    return graph, tokens


def save_edge_list(graph, path, labels=None):
    """
    Write graph as an edge list, one line per unit of multiplicity.

    labels optionally maps handles to tokens. Isolated nodes are not
    representable and are lost.
    """
    path = Path(path)
    multigraph = not graph.is_simple()
    lines = [MULTIGRAPH_HEADER] if multigraph else []
    for u, v, count in graph.edges():
        a = labels[u] if labels else u
        b = labels[v] if labels else v
        lines.extend([f'{a} {b}'] * count)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    except OSError as e:
        raise DataIOError(path, e)
    logger.info(f'Wrote {path}: n={graph.n} m={graph.m}')
    return path
