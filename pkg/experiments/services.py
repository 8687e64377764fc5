"""
Experiment Coordinator
Description: Runs experiment plans realization by realization and writes the
CSV/JSON bundle.

Every realization is an independent task with its own derived seed, so the
tasks can run in a process pool in any order. Results are keyed by
(point, model, realization) and written sorted by that key, which makes
reruns of the same plan byte-identical.
"""

import logging
import multiprocessing
import time
import uuid
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from django.db import connections
from django.utils import timezone

from dataio.edgelist import load_and_clean
from dataio.references import check_reference, get_reference
from dataio.writers import (
    CLUSTERING_COLUMNS, DEGREE_COLUMNS, DISTANCE_COLUMNS, save_distribution_csv, save_frame_csv, save_json
)
from generators.services import generate_graph
from graphcompare.services import Portrait, d_measure, portrait_divergence
from graphcore.distances import DistanceProfile
from graphcore.exceptions import InsufficientDataError, UndefinedCorrelationError
from netstats.powerlaw import DegreeDistribution, fit_power_law
from netstats.serializers import PowerLawFitSerializer
from netstats.services import assortativity, clustering_values, compute_stats, lcc_fraction, mean_clustering

from .models import ExperimentKind, ExperimentRun, RealizationRecord
from .plans import build_spec

logger = logging.getLogger(__name__)


@dataclass
class Task:
    """One realization of one model at one parameter point"""
    experiment: str
    order: tuple
    point_key: str
    point: dict
    label: str
    realization: int
    seed: int
    spec: object
    extra: dict = field(default_factory=dict)


# Realization workers. Module level so the process pool can pickle them.

def _distribution_realization(task):
    graph = generate_graph(task.spec)
    simple = task.extra['simple_degrees']
    profile = DistanceProfile.from_graph(graph)

    clustering = {}
    for node, value in clustering_values(graph).items():
        k = graph.degree(node, simple=True)
        total, count = clustering.get(k, (0.0, 0))
        clustering[k] = (total + value, count + 1)
    degrees = DegreeDistribution.from_degrees(graph.degrees(simple=simple)).counts
    pairs = profile.pair_distance_counts[1:] // 2
    return {
        'n': graph.n,
        'm': graph.m,
        'lcc': float(profile.component_sizes[0] / graph.n),
        'unreachable_fraction': profile.unreachable_fraction,
        'degree_counts': [[int(k), int(c)] for k, c in sorted(degrees.items())],
        'clustering_sums': [[int(k), float(s), int(c)] for k, (s, c) in sorted(clustering.items())],
        'pair_counts': [[d, int(c)] for d, c in enumerate(pairs, start=1)],
    }


def _evolution_realization(task):
    graph = generate_graph(task.spec)
    try:
        r = assortativity(graph, simple=task.extra['simple_degrees'])
    except UndefinedCorrelationError:
        r = None
    return {
        'n': graph.n,
        'm': graph.m,
        'lcc': lcc_fraction(graph),
        'mean_clustering': mean_clustering(graph),
        'assortativity': r,
    }


def _comparison_realization(task):
    graph = generate_graph(task.spec)
    profile = DistanceProfile.from_graph(graph)
    metrics = {
        'n': graph.n,
        'm': graph.m,
        'lcc': float(profile.component_sizes[0] / graph.n),
        'portrait_divergence': portrait_divergence(Portrait.from_profile(profile), task.extra['target_portrait']).value,
    }
    if task.extra.get('d_measure', True):
        metrics['d_measure'] = d_measure(profile, task.extra['target_profile']).value
    return metrics


REALIZATION_HANDLERS = {
    ExperimentKind.DISTRIBUTIONS.value: _distribution_realization,
    ExperimentKind.EVOLUTION.value: _evolution_realization,
    ExperimentKind.COMPARISON.value: _comparison_realization,
    ExperimentKind.BEST_FIT.value: _comparison_realization,
}


def run_realization(task):
    return REALIZATION_HANDLERS[task.experiment](task)


class ExperimentCoordinator:
    """
    Executes a cleaned ExperimentPlan and records it as an ExperimentRun.

    Each completed realization is stored as a RealizationRecord and the raw
    realization CSV is rewritten right away, so an interrupted run keeps
    everything finished so far.
    """

    RAW_FILENAME = 'realizations.csv'

    def __init__(self, plan, stdout=None):
        self.plan = plan.clean()
        self.stdout = stdout
        self.batch_id = uuid.uuid4()
        self.run = None
        self.target = None
        self.target_profile = None
        self.results = {}
        self.tasks = {}
        self.summary = {
            'batch_id': str(self.batch_id),
            'total_realizations': 0,
            'completed_realizations': 0,
            'failed_realizations': 0,
            'files': [],
        }

    def execute(self) -> ExperimentRun:
        plan = self.plan
        start_time = time.time()
        plan.output_dir.mkdir(parents=True, exist_ok=True)
        self.run = ExperimentRun.objects.create(
            batch_id=self.batch_id,
            kind=plan.kind,
            status='running',
            rng_seed=str(plan.rng_seed),
            realizations=plan.realizations,
            parameters=plan.as_parameters(),
            output_dir=str(plan.output_dir),
            target_path=str(plan.target or ''),
        )
        logger.info(f'Starting {plan.kind} experiment (run #{self.run.id}, batch {self.batch_id})')

        try:
            if plan.target:
                self._load_target()
            tasks = self._build_tasks()
            self.tasks = {task.order: task for task in tasks}
            self.summary['total_realizations'] = len(tasks)
            self.run.total_realizations = len(tasks)
            self.run.save(update_fields=['total_realizations'])

            for task, outcome in self._run_tasks(tasks):
                if isinstance(outcome, Exception):
                    self._record_failure(task, outcome)
                else:
                    self._record_success(task, outcome)

            if self.results:
                self._write_outputs()
        except Exception as e:
            logger.error(f'Experiment run #{self.run.id} aborted: {e}', exc_info=True)
            self.run.errors = self.run.errors + [str(e)]
            self._finish(start_time, 'failed')
            raise

        if not self.results:
            status = 'failed'
        elif self.summary['failed_realizations']:
            status = 'partial'
        else:
            status = 'completed'
        self._finish(start_time, status)
        return self.run

    # Setup

    def _load_target(self):
        plan = self.plan
        self.target, _ = load_and_clean(plan.target)
        if plan.dataset:
            reference = get_reference(plan.dataset)
            check_reference(self.target, plan.dataset)
            self.summary['reference'] = reference.as_dict()
        self.target_profile = DistanceProfile.from_graph(self.target)
        logger.info(f'Target {plan.target}: n={self.target.n} m={self.target.m}')

    def _points(self):
        """(point_key, point) pairs in output order"""
        plan = self.plan
        if plan.kind == ExperimentKind.DISTRIBUTIONS:
            return [(f'seed={seed_kind}', {'n': plan.n, 'mean_degree': plan.mean_degree, 'seed_kind': seed_kind})
                    for seed_kind in plan.seed_kinds]
        if plan.kind == ExperimentKind.EVOLUTION:
            points = [(f'sweep=degree,n={plan.n},k={k:g}', {'sweep': 'degree', 'n': plan.n, 'mean_degree': k})
                      for k in plan.degrees]
            points += [(f'sweep=size,n={size},k={plan.mean_degree:g}',
                        {'sweep': 'size', 'n': size, 'mean_degree': plan.mean_degree})
                       for size in plan.sizes]
            return points
        return [('target', {'n': self.target.n, 'm': self.target.m})]

    def _build_tasks(self):
        plan = self.plan
        extra = {'simple_degrees': plan.simple_degrees}
        if self.target is not None:
            extra['target_profile'] = self.target_profile
            extra['target_portrait'] = Portrait.from_profile(self.target_profile)
            extra['d_measure'] = plan.kind == ExperimentKind.COMPARISON

        tasks = []
        for point_index, (point_key, point) in enumerate(self._points()):
            seed_kind = point.get('seed_kind', plan.seed_kinds[0])
            for label in plan.models:
                for realization in range(plan.realizations):
                    seed = plan.realization_seed(point_index, label, realization)
                    spec = build_spec(
                        label, point['n'], m=point.get('m'), mean_degree=point.get('mean_degree'),
                        seed_kind=seed_kind, rng_seed=seed, rewire=plan.rewire,
                    ).clean()
                    tasks.append(Task(
                        experiment=plan.kind,
                        order=(point_index, plan.models.index(label), realization),
                        point_key=point_key,
                        point=point,
                        label=label,
                        realization=realization,
                        seed=seed,
                        spec=spec,
                        extra=extra,
                    ))
        logger.info(f'{len(tasks)} realizations over {point_index + 1} parameter points')
        return tasks

    # Execution

    def _run_tasks(self, tasks):
        """Yield (task, metrics or exception) as realizations complete"""
        workers = self.plan.workers
        if workers == 1:
            for task in tasks:
                try:
                    yield task, run_realization(task)
                except Exception as e:
                    yield task, e
            return

        # Forked workers must not inherit open database connections
        connections.close_all()
        context = multiprocessing.get_context('fork')
        with ProcessPoolExecutor(max_workers=workers, mp_context=context) as pool:
            futures = {pool.submit(run_realization, task): task for task in tasks}
            for future in as_completed(futures):
                task = futures[future]
                try:
                    yield task, future.result()
                except Exception as e:
                    yield task, e

    def _record_success(self, task, metrics):
        self.results[task.order] = metrics
        RealizationRecord.objects.create(
            run=self.run,
            model_label=task.label,
            point_key=task.point_key,
            realization_index=task.realization,
            seed=str(task.seed),
            metrics=metrics,
        )
        self.summary['completed_realizations'] += 1
        self.run.completed_realizations = self.summary['completed_realizations']
        self.run.save(update_fields=['completed_realizations'])
        self._flush_raw()

        if self.stdout is not None:
            done = self.summary['completed_realizations']
            self.stdout.write(f'  [{done}/{self.summary["total_realizations"]}] {task.label} {task.point_key} #{task.realization}')

    def _record_failure(self, task, error):
        logger.error(f'Realization {task.label} {task.point_key} #{task.realization} (seed {task.seed}) failed: {error}',
                     exc_info=error)
        self.summary['failed_realizations'] += 1
        self.run.errors = self.run.errors + [f'{task.label} {task.point_key} #{task.realization}: {error}']
        self.run.save(update_fields=['errors'])

    def _raw_frame(self):
        rows = []
        for order in sorted(self.results):
            task = self.tasks[order]
            row = {'point': task.point_key, 'model': task.label, 'realization': task.realization, 'seed': str(task.seed)}
            row.update({key: value for key, value in self.results[order].items() if not isinstance(value, list)})
            rows.append(row)
        return pd.DataFrame(rows)

    def _flush_raw(self):
        save_frame_csv(self._raw_frame(), self.plan.output_dir / self.RAW_FILENAME)

    # Outputs

    def _write_outputs(self):
        writer = {
            ExperimentKind.DISTRIBUTIONS.value: self._write_distributions,
            ExperimentKind.EVOLUTION.value: self._write_evolution,
            ExperimentKind.COMPARISON.value: self._write_comparison,
            ExperimentKind.BEST_FIT.value: self._write_best_fit,
        }[str(self.plan.kind)]
        writer()
        self.summary['files'].insert(0, self.RAW_FILENAME)

    def _save(self, frame, filename):
        save_frame_csv(frame, self.plan.output_dir / filename)
        self.summary['files'].append(filename)

    def _grouped(self):
        """(point_index, label) -> list of metrics, in output order"""
        groups = {}
        for order in sorted(self.results):
            point_index, model_index, _ = order
            groups.setdefault((point_index, self.plan.models[model_index]), []).append(self.results[order])
        return groups

    def _write_distributions(self):
        points = self._points()
        fits = []
        for (point_index, label), results in self._grouped().items():
            seed_kind = points[point_index][1]['seed_kind']
            suffix = f'{label}_{seed_kind}'

            degree_counts = {}
            clustering = {}
            pair_counts = {}
            for metrics in results:
                for k, count in metrics['degree_counts']:
                    degree_counts[k] = degree_counts.get(k, 0) + count
                for k, total, count in metrics['clustering_sums']:
                    previous = clustering.get(k, (0.0, 0))
                    clustering[k] = (previous[0] + total, previous[1] + count)
                for d, count in metrics['pair_counts']:
                    pair_counts[d] = pair_counts.get(d, 0) + count

            degrees = DegreeDistribution(counts=dict(sorted(degree_counts.items())),
                                         multiplicity=not self.plan.simple_degrees)
            reachable = sum(pair_counts.values())
            distances = {d: count / reachable for d, count in sorted(pair_counts.items()) if count} if reachable else {}
            for filename, data, columns in (
                (f'degree_{suffix}.csv', degrees, DEGREE_COLUMNS),
                (f'clustering_{suffix}.csv', {k: s / c for k, (s, c) in sorted(clustering.items())}, CLUSTERING_COLUMNS),
                (f'distance_{suffix}.csv', distances, DISTANCE_COLUMNS),
            ):
                save_distribution_csv(data, self.plan.output_dir / filename, columns=columns)
                self.summary['files'].append(filename)

            row = {'model': label, 'seed_kind': seed_kind, 'realizations': len(results)}
            try:
                fit = fit_power_law(degrees)
                row.update(PowerLawFitSerializer(fit.as_dict()).data)
            except InsufficientDataError as e:
                logger.warning(f'No power-law fit for {suffix}: {e}')
            fits.append(row)
        self._save(pd.DataFrame(fits), 'powerlaw.csv')

    def _write_evolution(self):
        points = self._points()
        rows = {'degree': [], 'size': []}
        for (point_index, label), results in self._grouped().items():
            point = points[point_index][1]
            row = {'n': point['n'], 'mean_degree': point['mean_degree'], 'model': label, 'realizations': len(results)}
            for metric in ('lcc', 'mean_clustering', 'assortativity'):
                values = [metrics[metric] for metrics in results if metrics[metric] is not None]
                row[metric] = float(np.mean(values)) if values else None
                row[f'{metric}_std'] = float(np.std(values)) if values else None
            rows[point['sweep']].append(row)
        for sweep, sweep_rows in rows.items():
            if sweep_rows:
                self._save(pd.DataFrame(sweep_rows), f'evolution_{sweep}.csv')

    def _write_comparison(self):
        rows = []
        for (_, label), results in self._grouped().items():
            row = {'model': label, 'realizations': len(results),
                   'mean_m': float(np.mean([metrics['m'] for metrics in results]))}
            for measure in ('d_measure', 'portrait_divergence'):
                values = np.array([metrics[measure] for metrics in results])
                row[f'{measure}_median'] = float(np.median(values))
                row[f'{measure}_mean'] = float(values.mean())
                row[f'{measure}_std'] = float(values.std())
            rows.append(row)
        frame = pd.DataFrame(rows)
        self._save(frame, 'comparison_summary.csv')
        best = frame.loc[frame['portrait_divergence_median'].idxmin(), 'model']
        self.summary['best_model'] = best
        logger.info(f'Lowest median portrait divergence: {best}')

    def _write_best_fit(self):
        plan = self.plan
        target_report = compute_stats(self.target, modularity_runs=plan.modularity_runs,
                                      simple_degrees=plan.simple_degrees, rng_seed=plan.rng_seed,
                                      profile=self.target_profile)
        rows = [{'model': 'target', 'seed': '', 'portrait_divergence': 0.0, **target_report.as_dict()}]
        reports = {'target': target_report.as_dict()}

        for (point_index, label), _ in self._grouped().items():
            orders = [order for order in sorted(self.results) if self.tasks[order].label == label]
            best_order = min(orders, key=lambda order: (self.results[order]['portrait_divergence'], order))
            task = self.tasks[best_order]
            graph = generate_graph(task.spec)
            report = compute_stats(graph, modularity_runs=plan.modularity_runs,
                                   simple_degrees=plan.simple_degrees, rng_seed=plan.rng_seed)
            divergence = self.results[best_order]['portrait_divergence']
            rows.append({'model': label, 'seed': str(task.seed), 'portrait_divergence': divergence, **report.as_dict()})
            reports[label] = {'seed': str(task.seed), 'portrait_divergence': divergence, **report.as_dict()}
            logger.info(f'Best {label} realization #{task.realization}: portrait divergence {divergence:.4f}')

        self._save(pd.DataFrame(rows), 'best_fit.csv')
        save_json(reports, plan.output_dir / 'best_fit.json')
        self.summary['files'].append('best_fit.json')

    def _finish(self, start_time, status):
        self.run.status = status
        self.run.completed_at = timezone.now()
        self.run.execution_time_seconds = time.time() - start_time
        self.run.summary = self.summary
        self.run.save()
        logger.info(
            f"Experiment run #{self.run.id} {status}: {self.summary['completed_realizations']}/"
            f"{self.summary['total_realizations']} realizations in {self.run.execution_time_seconds:.1f}s"
        )
