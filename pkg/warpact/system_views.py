"""
System information views
"""
import sys
from importlib.metadata import PackageNotFoundError, version

import django
from django.conf import settings
from django.db import connection
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from experiments.models import ExperimentRun, RealizationRecord

NUMERIC_PACKAGES = ['numpy', 'scipy', 'networkx', 'igraph', 'pandas']


def _package_version(name):
    try:
        return version(name)
    except PackageNotFoundError:
        return None


@api_view(['GET'])
@permission_classes([AllowAny])
def system_info(request):
    """
    Returns library versions, toolkit defaults and run counts
    """
    db_engine = settings.DATABASES['default']['ENGINE'].split('.')[-1]

    try:
        with connection.cursor() as cursor:
            cursor.execute("SELECT 1")
        db_status = "connected"
    except Exception:
        db_status = "disconnected"

    runs_by_status = {
        status: ExperimentRun.objects.filter(status=status).count()
        for status, _ in ExperimentRun.STATUS_CHOICES
    }

    return Response({
        "status": "operational",
        "backend": {
            "framework": "Django",
            "version": django.get_version(),
            "python_version": f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
        },
        "libraries": {name: _package_version(name) for name in NUMERIC_PACKAGES},
        "database": {
            "engine": db_engine,
            "status": db_status,
        },
        "defaults": {key: str(value) if key == 'OUTPUT_DIR' else value for key, value in settings.WARPACT.items()},
        "statistics": {
            "total_runs": ExperimentRun.objects.count(),
            "runs_by_status": runs_by_status,
            "total_realizations": RealizationRecord.objects.count(),
        },
    })
