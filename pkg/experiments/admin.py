from django.contrib import admin

from .models import ExperimentRun, RealizationRecord


class RealizationRecordInline(admin.TabularInline):
    model = RealizationRecord
    extra = 0
    fields = ['model_label', 'point_key', 'realization_index', 'seed']
    readonly_fields = ['model_label', 'point_key', 'realization_index', 'seed']
    can_delete = False
    show_change_link = True


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'kind', 'status', 'realizations', 'completed_realizations', 'total_realizations', 'started_at', 'execution_time_seconds']
    list_filter = ['kind', 'status', 'started_at']
    search_fields = ['output_dir', 'target_path', 'batch_id']
    ordering = ['-started_at']
    readonly_fields = ['batch_id', 'started_at', 'completed_at', 'execution_time_seconds', 'summary', 'errors']
    inlines = [RealizationRecordInline]


@admin.register(RealizationRecord)
class RealizationRecordAdmin(admin.ModelAdmin):
    list_display = ['run', 'model_label', 'point_key', 'realization_index', 'seed', 'created_at']
    list_filter = ['model_label', 'run__kind']
    search_fields = ['point_key', 'seed']
    ordering = ['run', 'point_key', 'model_label', 'realization_index']
    raw_id_fields = ['run']
