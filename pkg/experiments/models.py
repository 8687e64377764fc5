from django.db import models


class ExperimentKind(models.TextChoices):
    DISTRIBUTIONS = 'distributions', 'Degree, clustering and distance distributions'
    EVOLUTION = 'evolution', 'Evolution with average degree and size'
    COMPARISON = 'comparison', 'Comparison with a target network'
    BEST_FIT = 'best_fit', 'Best-fitting realizations'


class ExperimentRun(models.Model):
    """
    Record of one experiment invocation and its outcome
    """
    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
        ('partial', 'Partial'),
    ]

    batch_id = models.UUIDField(
        null=True,
        blank=True,
        help_text='Identifier shared by the realizations of this run'
    )
    kind = models.CharField(max_length=20, choices=ExperimentKind.choices)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending')

    rng_seed = models.CharField(max_length=20, help_text='Base seed, a 64-bit unsigned integer')
    realizations = models.PositiveIntegerField(default=1)
    parameters = models.JSONField(default=dict, blank=True)
    output_dir = models.CharField(max_length=500)
    target_path = models.CharField(max_length=500, blank=True)

    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    execution_time_seconds = models.FloatField(null=True, blank=True)

    total_realizations = models.PositiveIntegerField(default=0)
    completed_realizations = models.PositiveIntegerField(default=0)
    summary = models.JSONField(default=dict, blank=True)
    errors = models.JSONField(default=list, blank=True)

    class Meta:
        db_table = 'experiment_runs'
        verbose_name = 'Experiment Run'
        verbose_name_plural = 'Experiment Runs'
        ordering = ['-started_at']

    def __str__(self):
        return f"Run #{self.id} - {self.get_kind_display()} ({self.get_status_display()})"

    @property
    def progress(self):
        if self.total_realizations == 0:
            return 0.0
        return self.completed_realizations / self.total_realizations


class RealizationRecord(models.Model):
    """
    One finished realization; written as soon as the realization completes
    """
    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='realization_records'
    )
    model_label = models.CharField(max_length=10)
    point_key = models.CharField(max_length=100, blank=True, help_text='Parameter point, e.g. "n=2500,k=10"')
    realization_index = models.PositiveIntegerField()
    seed = models.CharField(max_length=20)
    metrics = models.JSONField(default=dict, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'experiment_realizations'
        verbose_name = 'Realization'
        verbose_name_plural = 'Realizations'
        ordering = ['run', 'point_key', 'model_label', 'realization_index']
        unique_together = ['run', 'point_key', 'model_label', 'realization_index']

    def __str__(self):
        return f"{self.model_label} {self.point_key} #{self.realization_index}"
