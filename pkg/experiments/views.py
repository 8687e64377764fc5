"""
Experiment bookkeeping API (read-only)
"""

import logging

from rest_framework import viewsets
from rest_framework.decorators import action
from rest_framework.permissions import IsAuthenticatedOrReadOnly
from rest_framework.response import Response

from .models import ExperimentRun
from .serializers import ExperimentRunDetailSerializer, ExperimentRunListSerializer, RealizationRecordSerializer

logger = logging.getLogger(__name__)


class ExperimentRunViewSet(viewsets.ReadOnlyModelViewSet):
    """API ViewSet for experiment runs and their realizations"""
    queryset = ExperimentRun.objects.all()
    permission_classes = [IsAuthenticatedOrReadOnly]

    def get_serializer_class(self):
        if self.action == 'list':
            return ExperimentRunListSerializer
        return ExperimentRunDetailSerializer

    def get_queryset(self):
        queryset = super().get_queryset()

        kind = self.request.query_params.get('kind')
        if kind:
            queryset = queryset.filter(kind=kind)

        status_filter = self.request.query_params.get('status')
        if status_filter:
            queryset = queryset.filter(status=status_filter)

        return queryset

    @action(detail=True, methods=['get'])
    def realizations(self, request, pk=None):
        """Realization records of a run, optionally filtered by model label"""
        run = self.get_object()
        records = run.realization_records.all()
        model_label = request.query_params.get('model')
        if model_label:
            records = records.filter(model_label=model_label)
        return Response(RealizationRecordSerializer(records, many=True).data)
