# Generated by Django 5.2.7 on 2026-10-18 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('batch_id', models.UUIDField(blank=True, help_text='Identifier shared by the realizations of this run', null=True)),
                ('kind', models.CharField(choices=[('distributions', 'Degree, clustering and distance distributions'), ('evolution', 'Evolution with average degree and size'), ('comparison', 'Comparison with a target network'), ('best_fit', 'Best-fitting realizations')], max_length=20)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('running', 'Running'), ('completed', 'Completed'), ('failed', 'Failed'), ('partial', 'Partial')], default='pending', max_length=20)),
                ('rng_seed', models.CharField(help_text='Base seed, a 64-bit unsigned integer', max_length=20)),
                ('realizations', models.PositiveIntegerField(default=1)),
                ('parameters', models.JSONField(blank=True, default=dict)),
                ('output_dir', models.CharField(max_length=500)),
                ('target_path', models.CharField(blank=True, max_length=500)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
                ('execution_time_seconds', models.FloatField(blank=True, null=True)),
                ('total_realizations', models.PositiveIntegerField(default=0)),
                ('completed_realizations', models.PositiveIntegerField(default=0)),
                ('summary', models.JSONField(blank=True, default=dict)),
                ('errors', models.JSONField(blank=True, default=list)),
            ],
            options={
                'verbose_name': 'Experiment Run',
                'verbose_name_plural': 'Experiment Runs',
                'db_table': 'experiment_runs',
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='RealizationRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('model_label', models.CharField(max_length=10)),
                ('point_key', models.CharField(blank=True, help_text='Parameter point, e.g. "n=2500,k=10"', max_length=100)),
                ('realization_index', models.PositiveIntegerField()),
                ('seed', models.CharField(max_length=20)),
                ('metrics', models.JSONField(blank=True, default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='realization_records', to='experiments.experimentrun')),
            ],
            options={
                'verbose_name': 'Realization',
                'verbose_name_plural': 'Realizations',
                'db_table': 'experiment_realizations',
                'ordering': ['run', 'point_key', 'model_label', 'realization_index'],
                'unique_together': {('run', 'point_key', 'model_label', 'realization_index')},
            },
        ),
    ]
