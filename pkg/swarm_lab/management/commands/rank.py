from django.core.management.base import BaseCommand

from swarm_lab import harness
from swarm_lab.models import Experiment

from ._options import configuration_errors, format_ranks

FIXTURE = 'table3_fixture'


class Command(BaseCommand):
    help = 'Print average dense ranks (unimodal, multimodal, total) of an exported or stored table'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--input', help=f"exported .csv/.json table, or '{FIXTURE}' for the published table")
        source.add_argument('--experiment', help="name of an experiment stored in the database")
        parser.add_argument('--costs', action='store_true', help="print the mean-cost matrix first")

    def handle(self, *args, **options):
        with configuration_errors():
            if options['experiment']:
                try:
                    table = Experiment.objects.get(name=options['experiment']).load_table()
                except Experiment.DoesNotExist:
                    raise ValueError(f"no experiment named {options['experiment']!r}") from None
            elif options['input'] == FIXTURE:
                table = harness.table3_fixture()
            else:
                table = harness.load_table(options['input'])
            if not len(table):
                raise ValueError("the table has no cells")

            if options['costs']:
                self.stdout.write(harness.cost_table(table).to_string(float_format=lambda v: f"{v:.3e}"))
            for line in format_ranks(harness.category_ranks(table), table.algorithms):
                self.stdout.write(line)
