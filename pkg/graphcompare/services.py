"""
Network Comparison Service
Description: D-measure (without the complement term) and portrait divergence.

Both measures work from a DistanceProfile, so every function accepts either a
Multigraph or a profile computed earlier. Parallel edges count as one hop.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from django.db import models
from scipy.stats import entropy

from graphcore.distances import DistanceProfile
from graphcore.exceptions import DegenerateGraphError

logger = logging.getLogger(__name__)


class MeasureKind(models.TextChoices):
    D_MEASURE = 'd_measure', 'D-measure'
    PORTRAIT_DIVERGENCE = 'portrait_divergence', 'Portrait divergence'


@dataclass
class DissimilarityScore:
    value: float
    measure: str
    details: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


def distance_profile(graph_or_profile):
    if isinstance(graph_or_profile, DistanceProfile):
        return graph_or_profile
    return DistanceProfile.from_graph(graph_or_profile)


def _pad(vectors):
    width = max(len(vector) for vector in vectors)
    padded = np.zeros((len(vectors), width), dtype=np.float64)
    for row, vector in enumerate(vectors):
        padded[row, :len(vector)] = vector
    return padded


def jensen_shannon(distributions, weights=None, base=None):
    """
    Generalized Jensen-Shannon divergence H(sum w_i P_i) - sum w_i H(P_i).

    distributions is a sequence of vectors (or a 2-D array, one per row);
    shorter vectors are zero-padded and every row is renormalized to sum 1.
    Natural log unless base is given.
    """
    if isinstance(distributions, np.ndarray) and distributions.ndim == 2:
        matrix = distributions.astype(np.float64)
    else:
        if len(distributions) == 0:
            raise ValueError('Jensen-Shannon divergence needs at least one distribution')
        matrix = _pad([np.asarray(vector, dtype=np.float64) for vector in distributions])
    if matrix.shape[0] == 0:
        raise ValueError('Jensen-Shannon divergence needs at least one distribution')

    totals = matrix.sum(axis=1)
    if np.any(totals <= 0):
        raise ValueError('Every distribution must carry positive mass')
    matrix = matrix / totals[:, None]
    if np.all(matrix == matrix[0]):
        return 0.0

    if weights is None:
        weights = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    else:
        weights = np.asarray(weights, dtype=np.float64)
        weights = weights / weights.sum()

    mixture = weights @ matrix
    divergence = entropy(mixture, base=base) - weights @ entropy(matrix, base=base, axis=1)
    return max(float(divergence), 0.0)


def node_distance_distributions(graph_or_profile):
    """D_i rows over d = 0..d_max, each the fraction of all n nodes at distance d"""
    return distance_profile(graph_or_profile).node_distributions


def mean_distance_distribution(graph_or_profile):
    """Average of the D_i rows, renormalized over the reachable mass"""
    counts = distance_profile(graph_or_profile).pair_distance_counts
    return counts / counts.sum()


def node_dispersion(graph_or_profile):
    """Jensen-Shannon divergence among all D_i over ln(d_max + 1)"""
    profile = distance_profile(graph_or_profile)
    if profile.n == 0 or profile.diameter == 0:
        raise DegenerateGraphError(
            f'Node dispersion needs at least one pair of adjacent nodes (n={profile.n}, d_max={profile.diameter})'
        )
    divergence = jensen_shannon(profile.shell_counts)
    return float(np.clip(divergence / np.log(profile.diameter + 1), 0.0, 1.0))


def d_measure(g, h):
    """
    Dissimilarity from mean distance distributions and node dispersions.

    Rows of disconnected graphs are renormalized over the nodes they reach;
    each graph's unreachable pair fraction is kept in details.
    """
    first = distance_profile(g)
    second = distance_profile(h)
    dispersion_g = node_dispersion(first)
    dispersion_h = node_dispersion(second)

    divergence = jensen_shannon([mean_distance_distribution(first), mean_distance_distribution(second)])
    value = 0.5 * np.sqrt(divergence / np.log(2)) + 0.5 * abs(np.sqrt(dispersion_g) - np.sqrt(dispersion_h))
    return DissimilarityScore(
        value=float(np.clip(value, 0.0, 1.0)),
        measure=MeasureKind.D_MEASURE.value,
        details={
            'node_dispersion': [dispersion_g, dispersion_h],
            'mean_distribution_divergence': divergence,
            'unreachable_fraction': [first.unreachable_fraction, second.unreachable_fraction],
        },
    )


@dataclass
class Portrait:
    """
    matrix[d, k] is the number of nodes with exactly k nodes at distance d,
    for d = 0..d_max and k = 0..n.
    """
    matrix: np.ndarray
    squared_component_sizes: int

    @classmethod
    def from_profile(cls, profile):
        n = profile.n
        matrix = np.zeros((profile.diameter + 1, n + 1), dtype=np.int64)
        for d in range(profile.diameter + 1):
            matrix[d] = np.bincount(profile.shell_counts[:, d], minlength=n + 1)
        return cls(matrix=matrix, squared_component_sizes=profile.squared_component_sizes)

    @property
    def n(self):
        return self.matrix.shape[1] - 1

    @property
    def diameter(self):
        return self.matrix.shape[0] - 1

    def distance_probabilities(self):
        """Probability that two nodes drawn from the same component are at distance d"""
        k = np.arange(self.matrix.shape[1])
        return (self.matrix @ k) / self.squared_component_sizes

    def joint_probabilities(self):
        """P(k | d) P(d) over the (d, k) grid; sums to 1"""
        return self.matrix / self.n * self.distance_probabilities()[:, None]

    def to_frame(self):
        frame = pd.DataFrame(self.matrix, columns=[str(k) for k in range(self.matrix.shape[1])])
        frame.insert(0, 'd', np.arange(self.matrix.shape[0]))
        return frame


def portrait(graph_or_profile):
    return Portrait.from_profile(distance_profile(graph_or_profile))


def portrait_divergence(g, h):
    """Base-2 Jensen-Shannon divergence between the two joint (k, d) distributions"""
    first = g if isinstance(g, Portrait) else portrait(g)
    second = h if isinstance(h, Portrait) else portrait(h)
    if first.n == 0 or second.n == 0:
        raise DegenerateGraphError('Portrait divergence is undefined for an empty graph')

    a = first.joint_probabilities()
    b = second.joint_probabilities()
    rows = max(a.shape[0], b.shape[0])
    cols = max(a.shape[1], b.shape[1])
    padded_a = np.zeros((rows, cols))
    padded_b = np.zeros((rows, cols))
    padded_a[:a.shape[0], :a.shape[1]] = a
    padded_b[:b.shape[0], :b.shape[1]] = b

    divergence = jensen_shannon(np.vstack((padded_a.ravel(), padded_b.ravel())), base=2)
    return DissimilarityScore(
        value=float(np.clip(divergence, 0.0, 1.0)),
        measure=MeasureKind.PORTRAIT_DIVERGENCE.value,
        details={'diameter': [first.diameter, second.diameter]},
    )


def compare(g, h):
    """Both measures for one pair; each graph's distances are computed once"""
    first = distance_profile(g)
    second = distance_profile(h)
    scores = {
        MeasureKind.D_MEASURE.value: d_measure(first, second),
        MeasureKind.PORTRAIT_DIVERGENCE.value: portrait_divergence(first, second),
    }
    logger.info(
        f"Comparison: D={scores['d_measure'].value:.6f} "
        f"portrait={scores['portrait_divergence'].value:.6f}"
    )
    return scores
