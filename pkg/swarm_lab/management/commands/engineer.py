import json
from pathlib import Path

from django.core.management.base import BaseCommand

from swarm_lab import constrained
from swarm_lab.algorithms import algorithm_params
from swarm_lab.core import ConfigurationError, RunConfig

from ._options import (
    add_heo_arguments,
    configuration_errors,
    defaults,
    flatten,
    heo_overrides,
    name_list,
    runtime_errors,
    sci,
)

PROBLEMS = ('pressure_vessel', 'tubular_column', 'pressure_vessel_canonical')


class Command(BaseCommand):
    help = 'Solve a constrained design problem over repeated runs and print the best design per algorithm'

    def add_arguments(self, parser):
        config = defaults()
        parser.add_argument('--problem', required=True, help=f"one of: {', '.join(PROBLEMS)}")
        parser.add_argument('--algorithms', type=name_list, nargs='+', help="default: heo")
        parser.add_argument('--iters', type=int, default=config['ITERATIONS'])
        parser.add_argument('--pop', type=int, default=config['POPULATION'])
        parser.add_argument('--reps', type=int, default=config['REPETITIONS'])
        parser.add_argument('--seed', type=int, default=config['SEED'])
        parser.add_argument('--penalty', type=float, default=config['PENALTY'], help="quadratic penalty rho")
        parser.add_argument('--tolerance', type=float, default=config['FEASIBILITY_TOLERANCE'])
        parser.add_argument('--out', help="write every solution record here (JSON)")
        add_heo_arguments(parser, config['ENGINEERING_C_MAX'])

    def handle(self, *args, **options):
        with configuration_errors():
            if options['problem'] not in PROBLEMS:
                raise ConfigurationError(
                    f"unknown problem {options['problem']!r}; valid names: {', '.join(PROBLEMS)}"
                )
            problem = constrained.get_problem(options['problem'], options['penalty'])
            algorithms = flatten(options['algorithms']) or ['heo']
            if options['reps'] < 1:
                raise ValueError(f"--reps must be at least 1, got {options['reps']}")
            configs = [
                RunConfig(options['pop'], options['iters'], options['seed'] + r, record_history=False)
                for r in range(options['reps'])
            ]
            overrides = {name: heo_overrides(options) if name == 'heo' else None for name in algorithms}
            for name in algorithms:
                algorithm_params(name, configs[0], overrides[name])

        with runtime_errors():
            summaries = []
            for algorithm in algorithms:
                solutions = [
                    constrained.solve(problem, algorithm, config, overrides[algorithm], options['tolerance'])
                    for config in configs
                ]
                summary = constrained.summarize(solutions)
                summaries.append(summary)
                self.write_summary(problem, summary)

            if options['out']:
                Path(options['out']).write_text(json.dumps([s.to_dict() for s in summaries], indent=2) + '\n')
                self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}"))

    def write_summary(self, problem, summary):
        best = summary.best
        self.stdout.write(f"{problem.name} / {summary.algorithm} ({summary.runs} runs)")
        for name, value in zip(problem.variables, best.x):
            self.stdout.write(f"  {name:<4} {value:.6f}")
        self.stdout.write(f"  best {sci(best.cost)}")
        self.stdout.write(f"  mean {sci(summary.mean_cost)}")
        self.stdout.write(f"  std  {sci(summary.std_cost)}")
        style = self.style.SUCCESS if summary.feasible_runs == summary.runs else self.style.WARNING
        self.stdout.write(style(f"  feasible runs {summary.feasible_runs}/{summary.runs}"))
