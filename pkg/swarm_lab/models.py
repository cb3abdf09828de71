from django.core.validators import MinValueValidator
from django.db import models, transaction

from . import harness


class ExperimentManager(models.Manager):

    @transaction.atomic
    def save_table(self, table: harness.ResultTable, name: str, plan=None, source='run', notes=''):
        """Store every cell of ``table`` under a new experiment."""
        experiment = self.create(
            name=name,
            source=source,
            notes=notes,
            repetitions=plan.repetitions if plan else None,
            base_seed=plan.base_seed if plan else None,
            iterations=plan.iterations if plan else None,
            population=plan.population if plan else None,
        )
        experiment.store_cells(table)
        return experiment


class Experiment(models.Model):
    """
    One stored result table: a benchmark run, an imported export or the
    published reference table.
    """
    name = models.CharField(
        max_length=100,
        unique=True,
        help_text="Experiment name (e.g., 'reference', 'heo-vs-pso-dim10')"
    )
    source = models.CharField(
        max_length=20,
        choices=[
            ('run', 'Benchmark Run'),
            ('reference', 'Published Reference'),
            ('import', 'Imported Table'),
        ],
        default='run'
    )
    notes = models.TextField(blank=True)

    # protocol of a run; empty for reference and imported tables
    repetitions = models.PositiveIntegerField(null=True, blank=True, validators=[MinValueValidator(1)])
    base_seed = models.BigIntegerField(null=True, blank=True)
    iterations = models.PositiveIntegerField(null=True, blank=True, validators=[MinValueValidator(1)])
    population = models.PositiveIntegerField(null=True, blank=True, validators=[MinValueValidator(2)])

    created_at = models.DateTimeField(auto_now_add=True)

    objects = ExperimentManager()

    def __str__(self):
        return f"{self.name} ({self.get_source_display()})"

    def store_cells(self, table: harness.ResultTable):
        CellResult.objects.bulk_create([
            CellResult(
                experiment=self,
                problem=cell.problem,
                algorithm=cell.algorithm,
                dimension=cell.dimension,
                mean_cost=cell.mean_cost,
                std_cost=cell.std_cost,
                mean_time_seconds=cell.mean_time_seconds,
                costs=[harness.json_number(c) for c in cell.costs],
                position=position,
            )
            for position, cell in enumerate(table)
        ])

    def load_table(self) -> harness.ResultTable:
        """Rebuild the harness table, rows and columns in their stored order."""
        table = harness.ResultTable()
        for row in self.cells.all():
            table.add(harness.CellResult(
                problem=row.problem,
                algorithm=row.algorithm,
                mean_cost=row.mean_cost,
                std_cost=row.std_cost,
                mean_time_seconds=row.mean_time_seconds,
                costs=[harness.from_json_number(c) for c in row.costs],
            ))
        return table

    class Meta:
        ordering = ['-created_at', 'name']


class CellResult(models.Model):
    """Statistics of one (problem, algorithm) cell over the repetitions."""
    experiment = models.ForeignKey(
        Experiment,
        on_delete=models.CASCADE,
        related_name='cells'
    )
    problem = models.CharField(max_length=60, db_index=True, help_text="Row label, e.g. 'sphere@30'")
    algorithm = models.CharField(max_length=20, db_index=True)
    dimension = models.PositiveIntegerField(null=True, blank=True)

    mean_cost = models.FloatField()
    std_cost = models.FloatField(default=0.0)
    mean_time_seconds = models.FloatField(default=0.0, help_text="Seconds per 1000 iterations")
    costs = models.JSONField(default=list, blank=True, help_text="Best cost of every repetition")

    position = models.PositiveIntegerField(default=0, help_text="Insertion order inside the table")

    def __str__(self):
        return f"{self.problem} / {self.algorithm}"

    class Meta:
        ordering = ['experiment', 'position']
        constraints = [
            models.UniqueConstraint(fields=['experiment', 'problem', 'algorithm'], name='unique_cell'),
        ]
