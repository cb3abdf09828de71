from django.core.management.base import BaseCommand

from swarm_lab import benchmarks, constrained
from swarm_lab.algorithms import ALGORITHMS, OVERRIDES


class Command(BaseCommand):
    help = 'List registered algorithms, benchmark functions and constrained problems'

    def handle(self, *args, **options):
        self.stdout.write(self.style.SUCCESS('Algorithms'))
        for name in ALGORITHMS:
            parameters = ', '.join(OVERRIDES[name]) or '-'
            self.stdout.write(f"  {name:<6} parameters: {parameters}")

        self.stdout.write(self.style.SUCCESS('Benchmark functions'))
        for info in benchmarks.registry():
            self.stdout.write(f"  {info.label:<4} {info.name:<12} {info.title:<14} {info.modality}")

        self.stdout.write(self.style.SUCCESS('Constrained problems'))
        for name in (*constrained.PROBLEMS, 'pressure_vessel_canonical'):
            problem = constrained.get_problem(name)
            self.stdout.write(
                f"  {name:<26} {problem.space.dim} variables, {len(problem.constraints)} constraints"
            )
