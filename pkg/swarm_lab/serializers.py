import math

from rest_framework import serializers

from .models import CellResult, Experiment


class FiniteFloatField(serializers.FloatField):
    """Non-finite costs become null so responses stay strict JSON."""

    def to_representation(self, value):
        value = super().to_representation(value)
        return value if math.isfinite(value) else None


class CellResultSerializer(serializers.ModelSerializer):
    """
    Serializer for one table cell - includes the parent experiment name
    """
    experiment_name = serializers.CharField(source='experiment.name', read_only=True)
    mean_cost = FiniteFloatField()
    std_cost = FiniteFloatField()

    class Meta:
        model = CellResult
        fields = (
            'id', 'experiment', 'experiment_name', 'problem', 'algorithm', 'dimension',
            'mean_cost', 'std_cost', 'mean_time_seconds', 'costs',
        )


class ExperimentSerializer(serializers.ModelSerializer):
    """
    Serializer for the experiment list - cell count only
    """
    source_display = serializers.CharField(source='get_source_display', read_only=True)
    cell_count = serializers.IntegerField(source='cells.count', read_only=True)

    class Meta:
        model = Experiment
        fields = (
            'id', 'name', 'source', 'source_display', 'notes', 'repetitions',
            'base_seed', 'iterations', 'population', 'cell_count', 'created_at',
        )


class ExperimentDetailSerializer(ExperimentSerializer):
    """
    Serializer for a single experiment - cells nested in table order
    """
    cells = CellResultSerializer(many=True, read_only=True)

    class Meta(ExperimentSerializer.Meta):
        fields = ExperimentSerializer.Meta.fields + ('cells',)
