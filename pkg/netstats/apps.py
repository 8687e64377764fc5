from django.apps import AppConfig


class NetstatsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'netstats'
    verbose_name = 'Network statistics'
