"""
Reference optimizers used in the comparison tables: global-best PSO, Grey Wolf
Optimizer, a real-coded elitist GA and QPSO.

They are textbook variants with textbook defaults, not replications of any
particular published run. All four share the RunResult contract of the HEO
runner, draw every random number from one RandomStream seeded by
``config.seed``, and clamp positions into the search space after each update.
"""
import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    HistoryRecorder,
    ObjectiveSpec,
    Observer,
    RandomStream,
    RunConfig,
    RunResult,
    SearchSpace,
    clamp,
    sample_population,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoParams:
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    velocity_clamp: float = 0.5  # fraction of the box span

    def __post_init__(self):
        if not 0.0 <= self.inertia <= 1.0:
            raise ValueError(f"inertia must lie in [0, 1], got {self.inertia}")
        if not 0.0 < self.velocity_clamp <= 1.0:
            raise ValueError(f"velocity_clamp must lie in (0, 1], got {self.velocity_clamp}")
        if self.cognitive < 0 or self.social < 0:
            raise ValueError("acceleration coefficients must be nonnegative")


@dataclass(frozen=True)
class GaParams:
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate: Optional[float] = None  # None: 1 / dim
    mutation_scale: float = 0.1  # fraction of the box span
    mutation_decay: bool = True

    def __post_init__(self):
        if self.tournament_size < 1:
            raise ValueError(f"tournament_size must be positive, got {self.tournament_size}")
        for label, rate in (('crossover_rate', self.crossover_rate),
                            ('mutation_rate', self.mutation_rate),
                            ('mutation_scale', self.mutation_scale)):
            if rate is not None and not 0.0 <= rate <= 1.0:
                raise ValueError(f"{label} must lie in [0, 1], got {rate}")


@dataclass(frozen=True)
class QpsoParams:
    beta_start: float = 1.0
    beta_end: float = 0.5

    def __post_init__(self):
        if self.beta_start <= 0 or self.beta_end <= 0:
            raise ValueError("contraction-expansion coefficients must be positive")


def _costs(objective: ObjectiveSpec, positions: np.ndarray) -> np.ndarray:
    costs = objective.evaluate_many(positions)
    return np.where(np.isnan(costs), np.inf, costs)


def _linear(start: float, end: float, t: int, iterations: int) -> float:
    if iterations <= 1:
        return end
    return start + (end - start) * t / (iterations - 1)


def _result(name, objective, config, best_position, best_cost, history, started, evaluations_before):
    elapsed = time.perf_counter() - started
    evaluations = objective.eval_count - evaluations_before
    logger.debug(
        "%s on %s seed=%s: best=%.6e evaluations=%d time=%.3fs",
        name, objective.name, config.seed, best_cost, evaluations, elapsed,
    )
    return RunResult(
        best_position=np.array(best_position, dtype=np.float64),
        best_cost=float(best_cost),
        evaluations=evaluations,
        wall_time_seconds=elapsed,
        iterations=config.iterations,
        history=history.as_array(),
        algorithm=name,
        seed=config.seed,
    )


def pso_run(objective: ObjectiveSpec, config: RunConfig, params: Optional[PsoParams] = None,
            space: Optional[SearchSpace] = None, observer: Optional[Observer] = None) -> RunResult:
    """Global-best PSO: v <- w v + c1 u1 (pbest - x) + c2 u2 (gbest - x)."""
    params = params or PsoParams()
    space = space or objective.space
    rng = RandomStream(config.seed)
    history = HistoryRecorder(config.record_history)
    started, evaluations_before = time.perf_counter(), objective.eval_count
    k, d = config.population, space.dim
    v_max = params.velocity_clamp * space.span

    x = sample_population(space, rng, k)
    v = np.zeros((k, d))
    pbest, pbest_cost = x.copy(), _costs(objective, x)
    g = int(np.argmin(pbest_cost))
    gbest, gbest_cost = pbest[g].copy(), pbest_cost[g]

    for t in range(config.iterations):
        u1 = rng.uniform(0.0, 1.0, (k, d))
        u2 = rng.uniform(0.0, 1.0, (k, d))
        v = params.inertia * v + params.cognitive * u1 * (pbest - x) + params.social * u2 * (gbest - x)
        v = np.clip(v, -v_max, v_max)
        x = clamp(x + v, space)
        cost = _costs(objective, x)

        improved = cost < pbest_cost
        pbest[improved] = x[improved]
        pbest_cost[improved] = cost[improved]
        g = int(np.argmin(pbest_cost))
        if pbest_cost[g] < gbest_cost:
            gbest, gbest_cost = pbest[g].copy(), pbest_cost[g]

        history.record(gbest_cost)
        if observer is not None:
            observer(t + 1, x, gbest_cost)

    return _result('pso', objective, config, gbest, gbest_cost, history, started, evaluations_before)


def select_leaders(positions: np.ndarray, costs: np.ndarray):
    """Alpha, beta and delta: the three lowest costs (stable order), padded if fewer rows."""
    order = np.argsort(costs, kind='stable')
    picks = [order[min(i, len(order) - 1)] for i in range(3)]
    return positions[picks].copy(), costs[picks].copy()


def gwo_run(objective: ObjectiveSpec, config: RunConfig, space: Optional[SearchSpace] = None,
            observer: Optional[Observer] = None) -> RunResult:
    """Grey Wolf Optimizer with the control scalar a falling linearly from 2 to 0."""
    space = space or objective.space
    rng = RandomStream(config.seed)
    history = HistoryRecorder(config.record_history)
    started, evaluations_before = time.perf_counter(), objective.eval_count
    k, d = config.population, space.dim

    wolves = sample_population(space, rng, k)
    leaders, leader_costs = select_leaders(wolves, _costs(objective, wolves))

    for t in range(config.iterations):
        a = 2.0 - 2.0 * t / config.iterations
        guided = np.zeros((k, d))
        for leader in leaders:
            r1 = rng.uniform(0.0, 1.0, (k, d))
            r2 = rng.uniform(0.0, 1.0, (k, d))
            big_a = 2.0 * a * r1 - a
            big_c = 2.0 * r2
            distance = np.abs(big_c * leader - wolves)
            guided += leader - big_a * distance
        wolves = clamp(guided / 3.0, space)
        cost = _costs(objective, wolves)

        leaders, leader_costs = select_leaders(
            np.vstack([leaders, wolves]), np.concatenate([leader_costs, cost])
        )
        history.record(leader_costs[0])
        if observer is not None:
            observer(t + 1, wolves, leader_costs[0])

    return _result('gwo', objective, config, leaders[0], leader_costs[0], history, started, evaluations_before)


def _tournament(rng: RandomStream, costs: np.ndarray, count: int, size: int) -> np.ndarray:
    entrants = rng.integers(0, costs.size, (count, size))
    winners = np.argmin(costs[entrants], axis=1)
    return entrants[np.arange(count), winners]


def ga_run(objective: ObjectiveSpec, config: RunConfig, params: Optional[GaParams] = None,
           space: Optional[SearchSpace] = None, observer: Optional[Observer] = None) -> RunResult:
    """
    Real-coded GA: tournament selection, uniform crossover, Gaussian mutation
    scaled to the box span, one elite carried over unevaluated.

    With ``mutation_decay`` the mutation scale shrinks linearly over the run.
    """
    params = params or GaParams()
    space = space or objective.space
    rng = RandomStream(config.seed)
    history = HistoryRecorder(config.record_history)
    started, evaluations_before = time.perf_counter(), objective.eval_count
    k, d = config.population, space.dim
    mutation_rate = params.mutation_rate if params.mutation_rate is not None else 1.0 / d
    offspring = k - 1

    population = sample_population(space, rng, k)
    cost = _costs(objective, population)

    for t in range(config.iterations):
        elite = int(np.argmin(cost))
        first = population[_tournament(rng, cost, offspring, params.tournament_size)]
        second = population[_tournament(rng, cost, offspring, params.tournament_size)]

        crossing = rng.uniform(0.0, 1.0, offspring) < params.crossover_rate
        genes = rng.uniform(0.0, 1.0, (offspring, d)) < 0.5
        children = np.where(crossing[:, None] & genes, second, first)

        scale = params.mutation_scale * space.span
        if params.mutation_decay:
            scale = scale * (1.0 - t / config.iterations)
        mutating = rng.uniform(0.0, 1.0, (offspring, d)) < mutation_rate
        children = children + mutating * rng.normal(0.0, 1.0, (offspring, d)) * scale
        children = clamp(children, space)

        population = np.vstack([population[elite][None, :], children])
        cost = np.concatenate([[cost[elite]], _costs(objective, children)])

        best = int(np.argmin(cost))
        history.record(cost[best])
        if observer is not None:
            observer(t + 1, population, cost[best])

    best = int(np.argmin(cost))
    return _result('ga', objective, config, population[best], cost[best], history, started, evaluations_before)


def qpso_run(objective: ObjectiveSpec, config: RunConfig, params: Optional[QpsoParams] = None,
             space: Optional[SearchSpace] = None, observer: Optional[Observer] = None) -> RunResult:
    """QPSO: x <- p +/- beta |mbest - x| ln(1/u), beta linear from beta_start to beta_end."""
    params = params or QpsoParams()
    space = space or objective.space
    rng = RandomStream(config.seed)
    history = HistoryRecorder(config.record_history)
    started, evaluations_before = time.perf_counter(), objective.eval_count
    k, d = config.population, space.dim

    x = sample_population(space, rng, k)
    pbest, pbest_cost = x.copy(), _costs(objective, x)
    g = int(np.argmin(pbest_cost))
    gbest, gbest_cost = pbest[g].copy(), pbest_cost[g]

    for t in range(config.iterations):
        beta = _linear(params.beta_start, params.beta_end, t, config.iterations)
        mbest = pbest.mean(axis=0)
        phi = rng.uniform(0.0, 1.0, (k, d))
        attractor = phi * pbest + (1.0 - phi) * gbest
        u = 1.0 - rng.uniform(0.0, 1.0, (k, d))  # (0, 1]
        sign = np.where(rng.uniform(0.0, 1.0, (k, d)) < 0.5, -1.0, 1.0)
        x = clamp(attractor + sign * beta * np.abs(mbest - x) * np.log(1.0 / u), space)
        cost = _costs(objective, x)

        improved = cost < pbest_cost
        pbest[improved] = x[improved]
        pbest_cost[improved] = cost[improved]
        g = int(np.argmin(pbest_cost))
        if pbest_cost[g] < gbest_cost:
            gbest, gbest_cost = pbest[g].copy(), pbest_cost[g]

        history.record(gbest_cost)
        if observer is not None:
            observer(t + 1, x, gbest_cost)

    return _result('qpso', objective, config, gbest, gbest_cost, history, started, evaluations_before)
