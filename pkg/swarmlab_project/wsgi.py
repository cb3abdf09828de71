"""
WSGI entry point for serving the swarm_lab results API (e.g. under gunicorn:
``gunicorn swarmlab_project.wsgi``).
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'swarmlab_project.settings')

application = get_wsgi_application()
