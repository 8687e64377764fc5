"""
Degree distributions and discrete power-law fitting.

The exponent is the discrete maximum-likelihood estimate with the Hurwitz
zeta normalization; k_min is the candidate that minimizes the KS distance
between the empirical and fitted tail CDFs.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from django.conf import settings
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from graphcore.exceptions import InsufficientDataError

logger = logging.getLogger(__name__)

GAMMA_BOUNDS = (1.0 + 1e-6, 20.0)


@dataclass
class DegreeDistribution:
    """Degree histogram; counts[k] nodes have degree k"""
    counts: dict = field(default_factory=dict)
    multiplicity: bool = True

    @classmethod
    def from_degrees(cls, degrees, multiplicity=True):
        counts = Counter(int(k) for k in degrees)
        return cls(counts=dict(sorted(counts.items())), multiplicity=multiplicity)

    @property
    def total(self):
        return sum(self.counts.values())

    @property
    def probabilities(self):
        """k -> p_k over the observed support, ascending k"""
        total = self.total
        if not total:
            return {}
        return {k: count / total for k, count in sorted(self.counts.items())}

    @property
    def mean(self):
        total = self.total
        if not total:
            return 0.0
        return sum(k * count for k, count in self.counts.items()) / total

    def samples(self):
        """All degrees as one array, ascending"""
        keys = sorted(self.counts)
        return np.repeat(np.array(keys, dtype=np.int64), [self.counts[k] for k in keys])


@dataclass
class PowerLawFit:
    gamma: float
    k_min: int
    ks: float
    sigma: Optional[float]
    tail_size: int

    def as_dict(self):
        return {
            'gamma': self.gamma,
            'k_min': self.k_min,
            'ks': self.ks,
            'sigma': self.sigma,
            'tail_size': self.tail_size,
        }


def _log_likelihood_fit(tail, k_min):
    log_sum = np.log(tail).sum()
    size = tail.size

    def negative_log_likelihood(gamma):
        return gamma * log_sum + size * np.log(zeta(gamma, k_min))

    result = minimize_scalar(negative_log_likelihood, bounds=GAMMA_BOUNDS, method='bounded')
    return float(result.x)


def _ks_distance(tail, gamma, k_min):
    values, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / tail.size
    model = 1.0 - zeta(gamma, values + 1) / zeta(gamma, k_min)
    return float(np.max(np.abs(empirical - model)))


def _standard_error(size, gamma, k_min, h=1e-5):
    z = zeta(gamma, k_min)
    first = (zeta(gamma + h, k_min) - zeta(gamma - h, k_min)) / (2 * h)
    second = (zeta(gamma + h, k_min) - 2 * z + zeta(gamma - h, k_min)) / h ** 2
    information = second / z - (first / z) ** 2
    if information <= 0:
        return None
    return float(1.0 / np.sqrt(size * information))


def fit_power_law(dist, k_min=None, min_tail=None):
    """
    Fit p_k ~ k^-gamma to a DegreeDistribution (or any array of degrees).

    With k_min=None every observed degree leaving at least min_tail samples
    in the tail is tried. Raises InsufficientDataError when no candidate
    qualifies or the tail holds a single distinct degree.
    """
    min_tail = min_tail or settings.WARPACT['MIN_POWER_LAW_TAIL']
    samples = dist.samples() if isinstance(dist, DegreeDistribution) else np.sort(np.asarray(dist, dtype=np.int64))
    samples = samples[samples >= 1]

    if k_min is not None:
        candidates = [int(k_min)]
    else:
        values = np.unique(samples)
        candidates = [int(k) for k in values if np.count_nonzero(samples >= k) >= min_tail]

    best = None
    for candidate in candidates:
        tail = samples[samples >= candidate]
        if tail.size < min_tail or np.unique(tail).size < 2:
            continue
        gamma = _log_likelihood_fit(tail, candidate)
        ks = _ks_distance(tail, gamma, candidate)
        if best is None or ks < best[2]:
            best = (gamma, candidate, ks, tail.size)

    if best is None:
        raise InsufficientDataError(
            f'Power-law fit needs at least {min_tail} samples with two or more distinct degrees above k_min'
        )
    gamma, chosen, ks, size = best
    fit = PowerLawFit(gamma=gamma, k_min=chosen, ks=ks, sigma=_standard_error(size, gamma, chosen), tail_size=size)
    logger.info(f'Power-law fit: gamma={fit.gamma:.3f} k_min={fit.k_min} ks={fit.ks:.4f} tail={fit.tail_size}')
    return fit
