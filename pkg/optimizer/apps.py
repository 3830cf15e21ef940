from django.apps import AppConfig


class OptimizerConfig(AppConfig):
    name = 'optimizer'
    verbose_name = 'Antenna position optimization'
