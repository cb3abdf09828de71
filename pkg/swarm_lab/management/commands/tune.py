import json
from pathlib import Path

from django.core.management.base import BaseCommand

from swarm_lab import modelopt

from ._options import (
    configuration_errors,
    defaults,
    flatten,
    name_list,
    runtime_errors,
    sci,
)


class Command(BaseCommand):
    help = 'Tune logistic regression (C, max_iter) on a CSV dataset and report test-set metrics'

    def add_arguments(self, parser):
        tuning = defaults()['TUNING']
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--data', help="CSV file: header row, numeric features, class label last")
        source.add_argument('--synthetic', type=int, metavar='M',
                            help="use M rows of seeded two-blob data instead of a file")
        parser.add_argument('--features', type=int, default=7, help="feature count of --synthetic data")
        parser.add_argument('--algorithms', type=name_list, nargs='+',
                            help=f"tuners (default: heo grid): {', '.join(modelopt.TUNERS)}")
        parser.add_argument('--iters', type=int, default=tuning['ITERATIONS'])
        parser.add_argument('--pop', type=int, default=tuning['POPULATION'])
        parser.add_argument('--grid', type=int, nargs=2, default=list(tuning['GRID']), metavar=('NC', 'NITER'))
        parser.add_argument('--seed', type=int, default=defaults()['SEED'])
        parser.add_argument('--test-fraction', type=float, default=tuning['TEST_FRACTION'])
        parser.add_argument('--validation-fraction', type=float, default=tuning['VALIDATION_FRACTION'])
        parser.add_argument('--learning-rate', type=float, default=tuning['LEARNING_RATE'])
        parser.add_argument('--out', help="write the tuning reports here (JSON)")

    def handle(self, *args, **options):
        with configuration_errors():
            if options['data']:
                data = modelopt.load_csv(options['data'])
            else:
                data = modelopt.make_blobs(options['synthetic'], options['features'], options['seed'])
            algorithms = flatten(options['algorithms']) or ['heo', 'grid']
            for name in algorithms:
                modelopt.check_tuning_options(
                    data,
                    algorithm=name,
                    population=options['pop'],
                    iterations=options['iters'],
                    test_fraction=options['test_fraction'],
                    validation_fraction=options['validation_fraction'],
                    learning_rate=options['learning_rate'],
                    grid_sizes=tuple(options['grid']),
                )
            self.stdout.write(f"{data.m} rows, {data.d} features, classes {data.class_counts}")

        with runtime_errors():
            reports = []
            for algorithm in algorithms:
                report = modelopt.run_tuning(
                    data,
                    algorithm=algorithm,
                    seed=options['seed'],
                    population=options['pop'],
                    iterations=options['iters'],
                    test_fraction=options['test_fraction'],
                    validation_fraction=options['validation_fraction'],
                    learning_rate=options['learning_rate'],
                    grid_sizes=tuple(options['grid']),
                )
                reports.append(report)
                scores = report.test_metrics
                self.stdout.write(
                    f"{algorithm:<5} C={sci(report.best_C)} max_iter={report.best_max_iter} "
                    f"mse={sci(report.validation_mse)} accuracy={scores.accuracy:.4f} "
                    f"sensitivity={scores.sensitivity:.4f} specificity={scores.specificity:.4f} "
                    f"precision={scores.precision:.4f} recall={scores.recall:.4f} f1={scores.f1:.4f} "
                    f"time={report.search_time_seconds:.3f}s"
                )

            if options['out']:
                Path(options['out']).write_text(json.dumps([r.to_dict() for r in reports], indent=2) + '\n')
                self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}"))
