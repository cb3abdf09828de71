from django.core.management.base import BaseCommand
from django.db import transaction

from swarm_lab.harness import table3_fixture
from swarm_lab.models import Experiment


class Command(BaseCommand):
    help = 'Store the published mean-cost and timing table as the "reference" experiment'

    def add_arguments(self, parser):
        parser.add_argument('--name', default='reference')

    @transaction.atomic
    def handle(self, *args, **options):
        experiment, created = Experiment.objects.get_or_create(
            name=options['name'],
            defaults={
                'source': 'reference',
                'notes': 'Published mean costs and seconds per 1000 iterations, dimension 30, '
                         '100 entities, 1000 iterations, 30 runs.',
            },
        )
        if created:
            experiment.store_cells(table3_fixture())
            self.stdout.write(self.style.SUCCESS(f'Created: {experiment.name} ({experiment.cells.count()} cells)'))
        else:
            self.stdout.write(self.style.WARNING(f'Exists: {experiment.name}'))
