"""
URL configuration for the warpact project.

The command-line tools are management commands; the HTTP surface only exposes
the admin and read-only experiment bookkeeping.
"""
from django.contrib import admin
from django.urls import path, include
from .system_views import system_info

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/experiments/', include('experiments.urls')),
    path('api/system/info/', system_info, name='system-info'),
]
