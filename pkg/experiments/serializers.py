from rest_framework import serializers

from .models import ExperimentRun, RealizationRecord


class RealizationRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = RealizationRecord
        fields = ['id', 'model_label', 'point_key', 'realization_index', 'seed', 'metrics', 'created_at']


class ExperimentRunListSerializer(serializers.ModelSerializer):
    """
    Compact run listing
    """
    kind_display = serializers.CharField(source='get_kind_display', read_only=True)
    status_display = serializers.CharField(source='get_status_display', read_only=True)
    progress = serializers.FloatField(read_only=True)

    class Meta:
        model = ExperimentRun
        fields = [
            'id', 'batch_id', 'kind', 'kind_display', 'status', 'status_display',
            'realizations', 'total_realizations', 'completed_realizations', 'progress',
            'started_at', 'completed_at', 'execution_time_seconds'
        ]


class ExperimentRunDetailSerializer(ExperimentRunListSerializer):
    """
    Run with parameters, summary and errors; realizations are served by the
    realizations action
    """
    realization_count = serializers.SerializerMethodField()

    class Meta(ExperimentRunListSerializer.Meta):
        fields = ExperimentRunListSerializer.Meta.fields + [
            'rng_seed', 'parameters', 'output_dir', 'target_path', 'summary', 'errors', 'realization_count'
        ]

    def get_realization_count(self, obj):
        return obj.realization_records.count()
