"""
Result files: statistics JSON and distribution / table CSVs.
"""

import logging
from pathlib import Path

import pandas as pd
from rest_framework.renderers import JSONRenderer

from graphcore.exceptions import DataIOError
from netstats.powerlaw import DegreeDistribution
from netstats.serializers import StatsReportSerializer

logger = logging.getLogger(__name__)

DEGREE_COLUMNS = ('k', 'p_k')
CLUSTERING_COLUMNS = ('k', 'C_k')
DISTANCE_COLUMNS = ('d', 'p_d')


def _prepare(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(path, e)
    return path


def render_json(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


def save_json(data, path):
    path = _prepare(path)
    try:
        path.write_bytes(render_json(data))
    except OSError as e:
        raise DataIOError(path, e)
    return path


def save_stats_json(report, path):
    """Write a StatsReport (or its dict) with the fixed key set"""
    data = report if isinstance(report, dict) else report.as_dict()
    save_json(StatsReportSerializer(data).data, path)
    logger.info(f'Wrote statistics to {path}')
    return Path(path)


def save_frame_csv(frame, path):
    path = _prepare(path)
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        raise DataIOError(path, e)
    return path


def save_distribution_csv(dist, path, columns=DEGREE_COLUMNS):
    """
    Write a distribution as two columns. dist is a DegreeDistribution (k, p_k)
    or any mapping from support value to probability.
    """
    items = dist.probabilities if isinstance(dist, DegreeDistribution) else dist
    frame = pd.DataFrame(sorted(items.items()), columns=list(columns))
    save_frame_csv(frame, path)
    logger.info(f'Wrote {len(frame)} rows to {path}')
    return Path(path)


def save_portrait_csv(portrait, path):
    """Portrait dump: one row per distance d, one column per count k"""
    return save_frame_csv(portrait.to_frame(), path)
