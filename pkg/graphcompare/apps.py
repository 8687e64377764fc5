from django.apps import AppConfig


class GraphcompareConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'graphcompare'
    verbose_name = 'Network comparison'
