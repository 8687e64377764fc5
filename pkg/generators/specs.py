"""
Declarative description of a generation run.
"""

from dataclasses import dataclass, replace
from typing import Optional

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import models


class ModelKind(models.TextChoices):
    WAR_PACT = 'wp', 'War pact'
    ER = 'er', 'Erdős-Rényi'
    BA = 'ba', 'Barabási-Albert'
    WS = 'ws', 'Watts-Strogatz'


class SelectionRule(models.TextChoices):
    RR = 'rr', 'Uniform / uniform'
    KK = 'kk', 'Degree / degree'
    KR = 'kr', 'Degree / uniform'
    KI = 'ki', 'Degree / inverse degree'


class SeedKind(models.TextChoices):
    MATCHING = 'matching', 'Perfect matching'
    ER = 'er', 'Erdős-Rényi G(2m, m)'
    TREE = 'tree', 'Random recursive forest'


@dataclass
class ModelSpec:
    """
    One generation run: model kind, target size and randomness.

    Either m or mean_degree may be given; clean() derives the other one.
    """
    kind: str = ModelKind.WAR_PACT
    n: int = 0
    m: Optional[int] = None
    mean_degree: Optional[float] = None
    rule: str = SelectionRule.KR
    seed_kind: str = SeedKind.MATCHING
    rng_seed: int = 0
    rewire: Optional[float] = None

    @property
    def label(self):
        if self.kind == ModelKind.WAR_PACT:
            return str(self.rule).upper()
        return str(self.kind).upper()

    @property
    def attach(self):
        """Edges per arriving node of the Barabási-Albert model"""
        return int(round(self.mean_degree / 2))

    @property
    def edge_probability(self):
        if self.n <= 1:
            return 0.0
        return self.mean_degree / (self.n - 1)

    def with_seed(self, rng_seed):
        return replace(self, rng_seed=rng_seed)

    def clean(self):
        """
        Validate and fill derived fields. Returns self.

        Raises ValidationError with a field -> message dict, like model
        validation elsewhere in the project.
        """
        errors = {}

        if self.kind not in ModelKind.values:
            errors['kind'] = f'Unknown model kind {self.kind!r}'
        if self.n is None or self.n < 1:
            errors['n'] = 'Number of nodes must be at least 1'
        if self.rng_seed is None or not 0 <= self.rng_seed < 2 ** 64:
            errors['rng_seed'] = 'RNG seed must be a non-negative 64-bit integer'
        if errors:
            raise ValidationError(errors)

        if self.m is None and self.mean_degree is None:
            raise ValidationError({'m': 'Either m or the average degree must be given'})
        if self.m is not None and self.m < 0:
            raise ValidationError({'m': 'Number of edges cannot be negative'})
        if self.mean_degree is not None and self.mean_degree < 0:
            raise ValidationError({'mean_degree': 'Average degree cannot be negative'})

        if self.m is None:
            self.m = int(round(self.n * self.mean_degree / 2))
        elif self.mean_degree is None:
            self.mean_degree = 2 * self.m / self.n
        elif abs(2 * self.m / self.n - self.mean_degree) > 1.0 / self.n:
            raise ValidationError({
                'mean_degree': f'Average degree {self.mean_degree} is inconsistent with 2m/n = {2 * self.m / self.n:.4f}'
            })

        if self.kind == ModelKind.WAR_PACT:
            self._clean_war_pact()
        elif self.kind == ModelKind.ER:
            if not 0.0 <= self.edge_probability <= 1.0:
                raise ValidationError({
                    'mean_degree': f'Edge probability <k>/(n-1) = {self.edge_probability:.4f} must lie in [0, 1]'
                })
        elif self.kind == ModelKind.BA:
            if self.attach < 1:
                raise ValidationError({'mean_degree': 'Attach count round(<k>/2) must be at least 1'})
            if self.n <= self.attach:
                raise ValidationError({'n': f'n must exceed the attach count {self.attach}'})
        elif self.kind == ModelKind.WS:
            self._clean_watts_strogatz()
        return self

    def _clean_war_pact(self):
        errors = {}
        if 2 * self.m < self.n:
            errors['m'] = f'War pact needs 2m >= n, got 2*{self.m} < {self.n}'
        if self.m < 1:
            errors['m'] = 'War pact needs at least one edge'
        if self.rule not in SelectionRule.values:
            errors['rule'] = f'Unknown selection rule {self.rule!r}'
        if self.seed_kind not in SeedKind.values:
            errors['seed_kind'] = f'Unknown seed kind {self.seed_kind!r}'
        if errors:
            raise ValidationError(errors)

    def _clean_watts_strogatz(self):
        if self.rewire is None:
            self.rewire = settings.WARPACT['WS_REWIRE']
        degree = self.mean_degree
        errors = {}
        if degree != int(degree) or int(degree) % 2 or degree < 2:
            errors['mean_degree'] = 'Ring lattice degree must be an even integer >= 2'
        elif self.n <= degree:
            errors['n'] = f'n must exceed the lattice degree {int(degree)}'
        if not 0.0 <= self.rewire <= 1.0:
            errors['rewire'] = 'Rewiring probability must lie in [0, 1]'
        if errors:
            raise ValidationError(errors)
