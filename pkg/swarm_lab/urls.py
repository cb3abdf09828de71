from django.urls import path
from . import views

app_name = 'swarm_lab'

urlpatterns = [
    # Experiments endpoints
    path('api/experiments/', views.ExperimentListView.as_view(), name='experiment-list'),
    path('api/experiments/<int:pk>/', views.ExperimentDetailView.as_view(), name='experiment-detail'),
    path('api/experiments/<int:pk>/ranks/', views.experiment_ranks, name='experiment-ranks'),

    # Cells endpoints
    path('api/cells/', views.CellResultListView.as_view(), name='cell-list'),
]
