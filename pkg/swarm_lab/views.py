from django.shortcuts import get_object_or_404
from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import generics, permissions
from rest_framework.decorators import api_view
from rest_framework.response import Response

from .harness import category_ranks, format_rank
from .models import CellResult, Experiment
from .serializers import CellResultSerializer, ExperimentDetailSerializer, ExperimentSerializer


# Experiment views
class ExperimentListView(generics.ListAPIView):
    """List stored experiments, newest first"""
    queryset = Experiment.objects.all()
    serializer_class = ExperimentSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]
    filter_backends = [DjangoFilterBackend]
    filterset_fields = ['source']


class ExperimentDetailView(generics.RetrieveAPIView):
    """One experiment with its cells"""
    queryset = Experiment.objects.prefetch_related('cells')
    serializer_class = ExperimentDetailSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]


# Cell views
class CellResultListView(generics.ListAPIView):
    queryset = CellResult.objects.select_related('experiment')
    serializer_class = CellResultSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]
    filter_backends = [DjangoFilterBackend]
    filterset_fields = ['algorithm', 'problem', 'experiment', 'dimension']


@api_view(['GET'])
def experiment_ranks(request, pk):
    """Average dense ranks of an experiment: unimodal, multimodal and total rows"""
    experiment = get_object_or_404(Experiment, pk=pk)
    table = experiment.load_table()
    if not len(table):
        return Response({'error': 'Experiment has no cells'}, status=400)

    ranks = category_ranks(table)
    return Response({
        'experiment': ExperimentSerializer(experiment).data,
        'algorithms': table.algorithms,
        'ranks': ranks,
        'display': {
            category: {algorithm: format_rank(value) for algorithm, value in row.items()}
            for category, row in ranks.items()
        },
    })
