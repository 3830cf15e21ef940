from django.apps import AppConfig


class RadarConfig(AppConfig):
    name = 'radar'
    verbose_name = 'FH-MIMO waveform and ambiguity function'
