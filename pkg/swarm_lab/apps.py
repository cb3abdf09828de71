from django.apps import AppConfig


class SwarmLabConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'swarm_lab'
    verbose_name = 'Swarm Lab'
