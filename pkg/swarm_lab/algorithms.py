"""
Name -> optimizer dispatch shared by the harness, the engineering solver and
the tuning pipeline. Names are the command-line contract.
"""
from typing import Mapping, Optional

from . import baselines, heo
from .core import ConfigurationError, ObjectiveSpec, Observer, RunConfig, RunResult

ALGORITHMS = ('pso', 'gwo', 'heo', 'ga', 'qpso')

# keyword overrides accepted per algorithm
OVERRIDES = {
    'heo': ('a_max', 'c_max', 'escape_spread', 'energy_guard', 'skip_symmetric'),
    'pso': ('inertia', 'cognitive', 'social', 'velocity_clamp'),
    'gwo': (),
    'ga': ('tournament_size', 'crossover_rate', 'mutation_rate', 'mutation_scale', 'mutation_decay'),
    'qpso': ('beta_start', 'beta_end'),
}


def check_algorithm(name: str) -> str:
    if name not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {name!r}; valid names: {', '.join(ALGORITHMS)}")
    return name


def algorithm_params(name: str, config: RunConfig, overrides: Optional[Mapping] = None):
    """
    Parameter object of one algorithm with ``overrides`` applied (None for gwo).

    Unknown names raise ConfigurationError, out-of-range values ValueError,
    so callers can validate flags before any run starts.
    """
    check_algorithm(name)
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(OVERRIDES[name])
    if unknown:
        raise ConfigurationError(
            f"unknown {name} parameter(s) {', '.join(sorted(unknown))}; "
            f"valid: {', '.join(OVERRIDES[name]) or 'none'}"
        )
    if name == 'heo':
        return heo.HeoParams(k=config.population, i_max=config.iterations, **overrides)
    if name == 'pso':
        return baselines.PsoParams(**overrides)
    if name == 'ga':
        return baselines.GaParams(**overrides)
    if name == 'qpso':
        return baselines.QpsoParams(**overrides)
    return None


def run_algorithm(name: str, objective: ObjectiveSpec, config: RunConfig,
                  overrides: Optional[Mapping] = None, observer: Optional[Observer] = None) -> RunResult:
    params = algorithm_params(name, config, overrides)
    if name == 'heo':
        return heo.run(objective, params, objective.space, config.seed,
                       record_history=config.record_history, observer=observer)
    if name == 'pso':
        return baselines.pso_run(objective, config, params, observer=observer)
    if name == 'gwo':
        return baselines.gwo_run(objective, config, observer=observer)
    if name == 'ga':
        return baselines.ga_run(objective, config, params, observer=observer)
    return baselines.qpso_run(objective, config, params, observer=observer)
