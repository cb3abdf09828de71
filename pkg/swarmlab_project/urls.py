"""
URL configuration for swarmlab_project.

    /admin/  -> Django admin (stored experiments)
    /api/... -> swarm_lab read-only results API
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),

    # swarm_lab API endpoints
    path('', include('swarm_lab.urls', namespace='swarm_lab')),
]
