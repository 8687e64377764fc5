"""
URL configuration for experiments app
"""

from django.urls import path, include
from rest_framework.routers import DefaultRouter
from . import views

router = DefaultRouter()
router.register(r'runs', views.ExperimentRunViewSet, basename='experiment-run')

app_name = 'experiments'

urlpatterns = [
    path('', include(router.urls)),
]
