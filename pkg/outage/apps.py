from django.apps import AppConfig


class OutageConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'outage'
    verbose_name = 'Analytic Outage'
