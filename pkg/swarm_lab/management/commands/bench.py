from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from swarm_lab import benchmarks, harness
from swarm_lab.algorithms import ALGORITHMS
from swarm_lab.models import Experiment

from ._options import (
    CONFIG_ERROR,
    add_heo_arguments,
    configuration_errors,
    defaults,
    flatten,
    format_ranks,
    heo_overrides,
    name_list,
    runtime_errors,
    sci,
)


class Command(BaseCommand):
    help = 'Run algorithms x benchmark functions x repetitions and print mean/std/time per cell'

    def add_arguments(self, parser):
        config = defaults()
        parser.add_argument('--functions', type=name_list, nargs='+',
                            help=f"benchmark names (default: all 14): {', '.join(benchmarks.NAMES)}")
        parser.add_argument('--problems', type=name_list, nargs='+',
                            help="constrained problems to add as rows, e.g. tubular_column")
        parser.add_argument('--algorithms', type=name_list, nargs='+',
                            help=f"algorithm names (default: all): {', '.join(ALGORITHMS)}")
        parser.add_argument('--dim', type=int, default=config['DIM'])
        parser.add_argument('--iters', type=int, default=config['ITERATIONS'])
        parser.add_argument('--pop', type=int, default=config['POPULATION'])
        parser.add_argument('--reps', type=int, default=config['REPETITIONS'])
        parser.add_argument('--seed', type=int, default=config['SEED'], help="base seed; run r uses seed + r")
        parser.add_argument('--jobs', type=int, default=1, help="concurrent runs (default 1)")
        parser.add_argument('--out', help="write the table here (.csv or .json)")
        parser.add_argument('--history-out', help="write long-form convergence curves here (CSV)")
        parser.add_argument('--save', metavar='NAME', help="store the table in the database as NAME")
        add_heo_arguments(parser, config['HEO']['C_MAX'])

    def handle(self, *args, **options):
        with configuration_errors():
            plan, out_format = self.build_plan(options)
            if options['jobs'] < 1:
                raise ValueError(f"--jobs must be at least 1, got {options['jobs']}")
            if options['save'] and Experiment.objects.filter(name=options['save']).exists():
                raise CommandError(f"experiment {options['save']!r} already exists", returncode=CONFIG_ERROR)

        with runtime_errors():
            table = harness.run_experiment(plan, jobs=options['jobs'])

            for cell in table:
                self.stdout.write(
                    f"{cell.problem:<24} {cell.algorithm:<5} mean={sci(cell.mean_cost)} "
                    f"std={sci(cell.std_cost)} time={cell.mean_time_seconds:.6f}s/1000 iters"
                )
            if len(table.algorithms) > 1:
                for line in format_ranks(harness.category_ranks(table), table.algorithms):
                    self.stdout.write(line)

            if options['out']:
                harness.export(table, out_format, options['out'])
                self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}"))
            if options['history_out']:
                harness.export_histories(table, options['history_out'])
                self.stdout.write(self.style.SUCCESS(f"Wrote {options['history_out']}"))
            if options['save']:
                experiment = Experiment.objects.save_table(table, options['save'], plan)
                self.stdout.write(self.style.SUCCESS(f"Saved experiment {experiment.name} (id {experiment.pk})"))

    def build_plan(self, options):
        functions = flatten(options['functions'])
        problems = flatten(options['problems'])
        if not functions and not problems:
            functions = list(benchmarks.NAMES)
        algorithms = flatten(options['algorithms']) or list(ALGORITHMS)

        out_format = None
        if options['out']:
            out_format = Path(options['out']).suffix.lstrip('.').lower()
            if out_format not in ('csv', 'json'):
                raise ValueError(f"--out must end in .csv or .json, got {options['out']!r}")

        overrides = {'heo': heo_overrides(options)} if 'heo' in algorithms else {}
        plan = harness.ExperimentPlan(
            algorithms=tuple(algorithms),
            problems=tuple((name, options['dim']) for name in functions + problems),
            repetitions=options['reps'],
            base_seed=options['seed'],
            population=options['pop'],
            iterations=options['iters'],
            overrides=overrides,
            record_history=bool(options['history_out']),
        )
        return plan, out_format
