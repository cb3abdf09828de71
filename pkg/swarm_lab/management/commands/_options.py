"""Argument helpers shared by the swarm_lab management commands."""
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import CommandError

from swarm_lab.harness import format_rank

CONFIG_ERROR = 2
RUNTIME_ERROR = 1


def defaults():
    return settings.SWARM_LAB


def name_list(value: str):
    """``heo,pso`` and ``heo pso`` both work; argparse handles the spaces."""
    return [part.strip() for part in value.split(',') if part.strip()]


def flatten(groups):
    return [name for group in groups or [] for name in group]


def sci(value: float) -> str:
    return f"{value:.5e}"


def add_heo_arguments(parser, c_max):
    heo = defaults()['HEO']
    parser.add_argument('--cmax', type=int, default=c_max, help=f"HEO skip trigger c_max (default {c_max})")
    parser.add_argument('--amax', type=int, default=heo['A_MAX'], help="HEO energy ceiling a_max")
    parser.add_argument('--escape-spread', type=float, default=heo['ESCAPE_SPREAD'],
                        help="HEO escape spread R, r1 ~ U(1-R, 1+R)")
    parser.add_argument('--energy-guard', choices=['pseudocode', 'equation'], default='pseudocode')
    parser.add_argument('--skip-symmetric', action='store_true',
                        help="draw random-skip vectors over the whole box")


def heo_overrides(options):
    return {
        'c_max': options['cmax'],
        'a_max': options['amax'],
        'escape_spread': options['escape_spread'],
        'energy_guard': options['energy_guard'],
        'skip_symmetric': options['skip_symmetric'],
    }


@contextmanager
def configuration_errors():
    """Bad names, flags or input files exit with status 2."""
    try:
        yield
    except CommandError:
        raise
    except (ValueError, OSError) as exc:
        raise CommandError(str(exc), returncode=CONFIG_ERROR) from exc


@contextmanager
def runtime_errors():
    """Anything failing once the work has started exits with status 1."""
    try:
        yield
    except CommandError:
        raise
    except Exception as exc:
        raise CommandError(f"run failed: {exc}", returncode=RUNTIME_ERROR) from exc


def format_ranks(ranks, algorithms):
    """Aligned text rows of average ranks, one per category."""
    lines = ['average rank ' + ' '.join(f"{name:>7}" for name in algorithms)]
    for category, row in ranks.items():
        lines.append(f"{category:<12} " + ' '.join(f"{format_rank(row[name]):>7}" for name in algorithms))
    return lines
