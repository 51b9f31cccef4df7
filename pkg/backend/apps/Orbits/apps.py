from django.apps import AppConfig


class OrbitsConfig(AppConfig):
    name = 'apps.Orbits'
    verbose_name = 'Closed characteristic analysis'
