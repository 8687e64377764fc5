"""
Experiment plans: which models run at which parameter points, how often,
and from which base seed.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

from django.conf import settings
from django.core.exceptions import ValidationError

from dataio.references import REFERENCE_NETWORKS
from generators.specs import ModelKind, ModelSpec, SeedKind, SelectionRule
from generators.streams import derive_seed

from .models import ExperimentKind

# Fixed order; a model's position is part of its realization seeds
MODEL_LABELS = ['rr', 'kk', 'kr', 'ki', 'er', 'ba', 'ws']
WAR_PACT_LABELS = [label for label in MODEL_LABELS if label in SelectionRule.values]
EXPERIMENT_ORDER = [ExperimentKind.DISTRIBUTIONS, ExperimentKind.EVOLUTION, ExperimentKind.COMPARISON,
                    ExperimentKind.BEST_FIT]

DEFAULT_REALIZATIONS = {
    ExperimentKind.DISTRIBUTIONS.value: 1,
    ExperimentKind.EVOLUTION.value: 25,
    ExperimentKind.COMPARISON.value: 100,
    ExperimentKind.BEST_FIT.value: 100,
}


def lattice_degree(mean_degree):
    """Nearest even ring-lattice degree, at least 2"""
    return max(2, 2 * int(round(mean_degree / 2)))


def build_spec(label, n, m=None, mean_degree=None, seed_kind=SeedKind.MATCHING, rng_seed=0, rewire=None):
    """ModelSpec for a model label at a parameter point; baselines match (n, m) as closely as they can"""
    if label in SelectionRule.values:
        return ModelSpec(kind=ModelKind.WAR_PACT.value, n=n, m=m, mean_degree=None if m is not None else mean_degree,
                         rule=label, seed_kind=str(seed_kind), rng_seed=rng_seed)
    if mean_degree is None:
        mean_degree = 2 * m / n
    if label == ModelKind.WS:
        return ModelSpec(kind=label, n=n, mean_degree=float(lattice_degree(mean_degree)), rng_seed=rng_seed,
                         rewire=rewire if rewire is not None else settings.WARPACT['WS_REWIRE'])
    if m is not None:
        return ModelSpec(kind=label, n=n, m=m, rng_seed=rng_seed)
    return ModelSpec(kind=label, n=n, mean_degree=mean_degree, rng_seed=rng_seed)


@dataclass
class ExperimentPlan:
    """
    Declarative experiment description; clean() fills kind-specific defaults.

    For evolution, n is the size of the average-degree sweep and mean_degree
    the average degree of the size sweep. For comparison and best_fit, n and
    m come from the target network.
    """
    kind: str
    realizations: Optional[int] = None
    output_dir: Optional[Path] = None
    rng_seed: int = 0
    models: List[str] = field(default_factory=list)
    seed_kinds: List[str] = field(default_factory=list)
    n: Optional[int] = None
    mean_degree: Optional[float] = None
    degrees: List[float] = field(default_factory=list)
    sizes: List[int] = field(default_factory=list)
    target: Optional[Path] = None
    dataset: Optional[str] = None
    modularity_runs: Optional[int] = None
    workers: Optional[int] = None
    simple_degrees: bool = False
    rewire: Optional[float] = None

    @property
    def experiment_index(self):
        return [str(kind) for kind in EXPERIMENT_ORDER].index(str(self.kind))

    def realization_seed(self, point_index, label, realization):
        return derive_seed(self.rng_seed, self.experiment_index, point_index, MODEL_LABELS.index(label), realization)

    def clean(self):
        errors = {}
        if self.kind not in ExperimentKind.values:
            errors['kind'] = f'Unknown experiment kind {self.kind!r}'
            raise ValidationError(errors)
        self.kind = str(self.kind)

        if self.realizations is None:
            self.realizations = DEFAULT_REALIZATIONS[self.kind]
        if self.realizations < 1:
            errors['realizations'] = 'At least one realization is required'
        if not 0 <= self.rng_seed < 2 ** 64:
            errors['rng_seed'] = 'RNG seed must be a non-negative 64-bit integer'

        comparing = self.kind in (ExperimentKind.COMPARISON, ExperimentKind.BEST_FIT)
        if not self.models:
            self.models = list(MODEL_LABELS) if self.kind == ExperimentKind.COMPARISON else list(WAR_PACT_LABELS)
        unknown = [label for label in self.models if label not in MODEL_LABELS]
        if unknown:
            errors['models'] = f'Unknown models {", ".join(unknown)}; choose from {", ".join(MODEL_LABELS)}'
        elif self.kind == ExperimentKind.DISTRIBUTIONS and set(self.models) - set(WAR_PACT_LABELS):
            errors['models'] = 'Distributions are produced for war pact rules only'
        self.models = [label for label in MODEL_LABELS if label in self.models]

        if not self.seed_kinds:
            self.seed_kinds = list(SeedKind.values) if self.kind == ExperimentKind.DISTRIBUTIONS else [SeedKind.MATCHING.value]
        if set(self.seed_kinds) - set(SeedKind.values):
            errors['seed_kinds'] = f'Seed kinds must be among {", ".join(SeedKind.values)}'

        if self.kind == ExperimentKind.DISTRIBUTIONS:
            self.n = self.n or 10000
            self.mean_degree = self.mean_degree or 10.0
        elif self.kind == ExperimentKind.EVOLUTION:
            self.n = self.n or 2500
            self.mean_degree = self.mean_degree or 10.0
            self.degrees = list(self.degrees or settings.WARPACT['EVOLUTION_DEGREES'])
            self.sizes = list(self.sizes or settings.WARPACT['EVOLUTION_SIZES'])
            if any(k <= 0 for k in self.degrees) or any(size < 2 for size in self.sizes):
                errors['degrees'] = 'Sweep degrees must be positive and sizes at least 2'

        if comparing:
            if not self.target:
                errors['target'] = f'A target edge list is required for {self.kind}'
            elif not Path(self.target).is_file():
                errors['target'] = f'Target edge list {self.target} does not exist'
        if self.dataset and self.dataset not in REFERENCE_NETWORKS:
            errors['dataset'] = f'Unknown dataset {self.dataset!r}; expected one of {", ".join(REFERENCE_NETWORKS)}'

        self.workers = self.workers or settings.WARPACT['WORKERS']
        if self.workers < 1:
            errors['workers'] = 'At least one worker is required'
        self.modularity_runs = self.modularity_runs or settings.WARPACT['MODULARITY_RUNS']
        if self.rewire is None:
            self.rewire = settings.WARPACT['WS_REWIRE']
        self.output_dir = Path(self.output_dir or Path(settings.WARPACT['OUTPUT_DIR']) / self.kind)

        if errors:
            raise ValidationError(errors)

        seeds = {self.realization_seed(0, self.models[0], index) for index in range(self.realizations)}
        if len(seeds) != self.realizations:
            raise ValidationError({'rng_seed': 'Derived realization seeds collide; choose another base seed'})
        return self

    def as_parameters(self):
        parameters = asdict(self)
        parameters['output_dir'] = str(self.output_dir)
        parameters['target'] = str(self.target) if self.target else None
        parameters['rng_seed'] = str(self.rng_seed)
        return parameters
