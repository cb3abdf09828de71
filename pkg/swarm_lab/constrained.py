"""
Inequality-constrained design problems solved through a static quadratic
penalty:

    penalized(x) = f(x) + rho * sum_k max(0, g_k(x))^2,    feasible iff g_k(x) <= 0

The search is driven by the penalized cost, but the reported answer is the
best *feasible* point evaluated during the run (feasibility first).

Objectives and constraints index the last axis (``x[..., 0]``), so they take
one point or a whole grid of points.

The pressure vessel is implemented exactly as published, including the
g2 = -x3 + 0.000954 x3 term and the thickness range given to x1 and x2;
``pressure_vessel(canonical=True)`` gives the usual literature formulation.
Thicknesses are continuous (no 0.0625 rounding).
"""
import logging
import math
from dataclasses import dataclass, field
from functools import partial, wraps
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algorithms import run_algorithm
from .core import ObjectiveSpec, RunConfig, SearchSpace, as_vector

logger = logging.getLogger(__name__)

DEFAULT_PENALTY = 1e7
FEASIBILITY_TOLERANCE = 1e-9


def _on_arrays(function: Callable) -> Callable:
    """Let ``function`` take lists as well as arrays; applying it twice is harmless."""
    if getattr(function, 'takes_arrays', False):
        return function

    @wraps(function)
    def wrapper(x):
        return function(np.asarray(x, dtype=np.float64))

    wrapper.takes_arrays = True
    return wrapper


@dataclass(frozen=True)
class ConstrainedProblem:
    name: str
    objective: Callable
    constraints: Tuple[Callable, ...]
    space: SearchSpace
    penalty_coefficient: float = DEFAULT_PENALTY
    variables: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.penalty_coefficient <= 0:
            raise ValueError(f"penalty coefficient must be positive, got {self.penalty_coefficient}")
        object.__setattr__(self, 'objective', _on_arrays(self.objective))
        object.__setattr__(self, 'constraints', tuple(_on_arrays(g) for g in self.constraints))


def constraint_values(problem: ConstrainedProblem, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.stack([np.asarray(g(x), dtype=np.float64) for g in problem.constraints], axis=-1)


def penalized(problem: ConstrainedProblem, x):
    x = np.asarray(x, dtype=np.float64)
    violation = np.maximum(0.0, constraint_values(problem, x))
    return problem.objective(x) + problem.penalty_coefficient * np.sum(violation ** 2, axis=-1)


def feasible(problem: ConstrainedProblem, x, tolerance: float = FEASIBILITY_TOLERANCE):
    return np.all(constraint_values(problem, x) <= tolerance, axis=-1)


# Pressure vessel, printed form

def _vessel_cost(x):
    x1, x2, x3, x4 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    return 0.6224 * x1 * x2 * x3 + 1.7781 * x1 ** 2 * x3 + 3.1161 * x2 * x4 ** 2 + 19.84 * x4 * x1 ** 2


def _vessel_g1(x):
    return -x[..., 0] + 0.0193 * x[..., 2]


def _vessel_g2(x):
    return -x[..., 2] + 0.000954 * x[..., 2]


def _vessel_g3(x):
    x3, x4 = x[..., 2], x[..., 3]
    return -math.pi * x3 ** 2 * x4 + 4.0 / 3.0 * math.pi * x3 ** 3 + 1296000.0


def _vessel_g4(x):
    return x[..., 3] - 240.0


# Pressure vessel, literature form: x = (Ts, Th, R, L)

def _canonical_vessel_cost(x):
    x1, x2, x3, x4 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    return 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 ** 2 + 3.1661 * x1 ** 2 * x4 + 19.84 * x1 ** 2 * x3


def _canonical_vessel_g2(x):
    return -x[..., 1] + 0.00954 * x[..., 2]


def _canonical_vessel_g3(x):
    x3, x4 = x[..., 2], x[..., 3]
    return -math.pi * x3 ** 2 * x4 - 4.0 / 3.0 * math.pi * x3 ** 3 + 1296000.0


def pressure_vessel(canonical: bool = False, penalty_coefficient: float = DEFAULT_PENALTY) -> ConstrainedProblem:
    if canonical:
        return ConstrainedProblem(
            name='pressure_vessel_canonical',
            objective=_canonical_vessel_cost,
            constraints=(_vessel_g1, _canonical_vessel_g2, _canonical_vessel_g3, _vessel_g4),
            space=SearchSpace([0.0625, 0.0625, 10.0, 10.0], [6.1875, 6.1875, 200.0, 200.0]),
            penalty_coefficient=penalty_coefficient,
            variables=('Ts', 'Th', 'R', 'L'),
        )
    return ConstrainedProblem(
        name='pressure_vessel',
        objective=_vessel_cost,
        constraints=(_vessel_g1, _vessel_g2, _vessel_g3, _vessel_g4),
        space=SearchSpace([0.00625, 0.00625, 40.0, 40.0], [1.25, 1.25, 200.0, 200.0]),
        penalty_coefficient=penalty_coefficient,
        variables=('x1', 'x2', 'x3', 'x4'),
    )


@dataclass(frozen=True)
class TubularColumnParams:
    load: float = 2300.0  # P, kg_f
    yield_stress: float = 450.0  # kg_f / cm^2
    elasticity: float = 0.65e6  # E, kg_f / cm^2
    length: float = 300.0  # L, cm

    def __post_init__(self):
        if min(self.load, self.yield_stress, self.elasticity, self.length) <= 0:
            raise ValueError("tubular column constants must all be positive")


def _column_cost(x):
    d, t = x[..., 0], x[..., 1]
    return 9.8 * d * t + 2.0 * d


def _column_stress(params, x):
    d, t = x[..., 0], x[..., 1]
    return params.load / (math.pi * d * t * params.yield_stress) - 1.0


def _column_buckling(params, x):
    d, t = x[..., 0], x[..., 1]
    critical = math.pi ** 3 * params.elasticity * d * t * (d ** 2 + t ** 2)
    return 8.0 * params.load * params.length ** 2 / critical - 1.0


def _column_g3(x):
    return 2.0 / x[..., 0] - 1.0


def _column_g4(x):
    return x[..., 0] / 14.0 - 1.0


def _column_g5(x):
    return 0.2 / x[..., 1] - 1.0


def _column_g6(x):
    return x[..., 1] / 8.0 - 1.0


def tubular_column(params: Optional[TubularColumnParams] = None,
                   penalty_coefficient: float = DEFAULT_PENALTY) -> ConstrainedProblem:
    params = params or TubularColumnParams()
    return ConstrainedProblem(
        name='tubular_column',
        objective=_column_cost,
        constraints=(
            partial(_column_stress, params),
            partial(_column_buckling, params),
            _column_g3, _column_g4, _column_g5, _column_g6,
        ),
        space=SearchSpace([2.0, 0.2], [14.0, 0.8]),
        penalty_coefficient=penalty_coefficient,
        variables=('d', 't'),
    )


PROBLEMS = {
    'pressure_vessel': pressure_vessel,
    'tubular_column': tubular_column,
}


def get_problem(name: str, penalty_coefficient: float = DEFAULT_PENALTY) -> ConstrainedProblem:
    if name == 'pressure_vessel_canonical':
        return pressure_vessel(canonical=True, penalty_coefficient=penalty_coefficient)
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; valid names: {', '.join(PROBLEMS)}") from None
    return factory(penalty_coefficient=penalty_coefficient)


class PenalizedObjective(ObjectiveSpec):
    """Penalized cost that remembers the best feasible point it has evaluated."""

    def __init__(self, problem: ConstrainedProblem, tolerance: float = FEASIBILITY_TOLERANCE):
        super().__init__(partial(penalized, problem), problem.space, problem.name)
        self.problem = problem
        self.tolerance = tolerance
        self.best_feasible_position = None
        self.best_feasible_cost = math.inf

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        cost = super().__call__(x)
        if bool(feasible(self.problem, x, self.tolerance)):
            raw = float(self.problem.objective(x))
            if raw < self.best_feasible_cost:
                self.best_feasible_cost = raw
                self.best_feasible_position = x.copy()
        return cost


@dataclass
class Solution:
    problem: str
    algorithm: str
    seed: int
    x: np.ndarray
    cost: float
    penalized_cost: float
    feasible: bool
    constraint_values: np.ndarray
    evaluations: int = 0
    wall_time_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            'problem': self.problem,
            'algorithm': self.algorithm,
            'seed': self.seed,
            'x': [float(v) for v in self.x],
            'cost': float(self.cost),
            'penalized_cost': float(self.penalized_cost),
            'feasible': bool(self.feasible),
            'constraint_values': [float(v) for v in self.constraint_values],
            'evaluations': self.evaluations,
            'wall_time_seconds': self.wall_time_seconds,
        }


def solve(problem: ConstrainedProblem, algorithm: str, config: RunConfig,
          overrides: Optional[Mapping] = None, tolerance: float = FEASIBILITY_TOLERANCE) -> Solution:
    objective = PenalizedObjective(problem, tolerance)
    result = run_algorithm(algorithm, objective, config, overrides)

    if objective.best_feasible_position is not None:
        x = objective.best_feasible_position
    else:
        logger.warning("%s found no feasible point for %s (seed %s)", algorithm, problem.name, config.seed)
        x = result.best_position
    x = as_vector(x)
    return Solution(
        problem=problem.name,
        algorithm=algorithm,
        seed=config.seed,
        x=x,
        cost=float(problem.objective(x)),
        penalized_cost=float(penalized(problem, x)),
        feasible=bool(feasible(problem, x, tolerance)),
        constraint_values=constraint_values(problem, x),
        evaluations=result.evaluations,
        wall_time_seconds=result.wall_time_seconds,
    )


@dataclass
class EngineeringSummary:
    """Mean/std of the reported costs over repeated runs and the best solution."""

    problem: str
    algorithm: str
    mean_cost: float
    std_cost: float
    feasible_runs: int
    runs: int
    best: Solution
    solutions: List[Solution] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'problem': self.problem,
            'algorithm': self.algorithm,
            'mean_cost': self.mean_cost,
            'std_cost': self.std_cost,
            'feasible_runs': self.feasible_runs,
            'runs': self.runs,
            'best': self.best.to_dict(),
            'solutions': [s.to_dict() for s in self.solutions],
        }


def summarize(solutions: Sequence[Solution]) -> EngineeringSummary:
    if not solutions:
        raise ValueError("summarize needs at least one solution")
    costs = np.array([s.cost for s in solutions])
    # feasible answers beat infeasible ones regardless of cost
    best = min(solutions, key=lambda s: (not s.feasible, s.cost))
    return EngineeringSummary(
        problem=solutions[0].problem,
        algorithm=solutions[0].algorithm,
        mean_cost=float(np.mean(costs)),
        std_cost=float(np.std(costs)),
        feasible_runs=sum(s.feasible for s in solutions),
        runs=len(solutions),
        best=best,
        solutions=list(solutions),
    )
