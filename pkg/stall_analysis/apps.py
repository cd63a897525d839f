from django.apps import AppConfig


class StallAnalysisConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'stall_analysis'
    verbose_name = 'DDL stall analysis'
