"""
Halfway Escape Optimization.

Each quantum moves to a random point "halfway" between the global and its
local optimum. While the swarm stalls, the escape counter grows and the same
update reflects quanta past the optima instead. Non-improving quanta vibrate
with a Gaussian step damped by their energy level, every position is clipped
into a box around the global best, and when the counter exceeds ``c_max`` the
whole swarm skips to a new random region.

One iteration, per quantum in order:

    1. position update           x <- x + v_g + v_l
    2. evaluate                  f_q = f(x)
    3. f_q < f_best              -> new global best, c <- c // 2
       f_q < f_local             -> new local best,  a <- a // 2
       otherwise                 -> vibrate (not re-evaluated)
    4. center clipping

then energy ticks for every quantum, a random skip if ``c > c_max``, and
``c += 1``.
"""
import logging
import time
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.special import expit

from .core import (
    HistoryRecorder,
    ObjectiveSpec,
    Observer,
    RandomStream,
    RunResult,
    SearchSpace,
    clamp,
    finite_cost,
    repair_position,
    sample_uniform,
)

logger = logging.getLogger(__name__)

ENERGY_GUARDS = ('pseudocode', 'equation')


@dataclass(frozen=True)
class HeoParams:
    """
    k             population size
    i_max         iterations
    a_max         energy ceiling parameter
    c_max         escape counter value above which the swarm skips
    escape_spread R, the half width of the r1 ~ U(1-R, 1+R) draw
    energy_guard  "pseudocode": a*r4 < (a_max-1)/2, "equation": a*r4 < a_max
    skip_symmetric draw skip vectors over the whole box instead of U(0, b)
    """

    k: int = 100
    i_max: int = 1000
    a_max: int = 10
    c_max: int = 5
    escape_spread: float = 0.5
    energy_guard: str = 'pseudocode'
    skip_symmetric: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.i_max < 1:
            raise ValueError(f"i_max must be at least 1, got {self.i_max}")
        if self.a_max < 1:
            raise ValueError(f"a_max must be at least 1, got {self.a_max}")
        if self.c_max < 1:
            raise ValueError(f"c_max must be at least 1, got {self.c_max}")
        if not 0.0 < self.escape_spread <= 1.0:
            raise ValueError(f"escape_spread must lie in (0, 1], got {self.escape_spread}")
        if self.energy_guard not in ENERGY_GUARDS:
            raise ValueError(f"energy_guard must be one of {ENERGY_GUARDS}, got {self.energy_guard!r}")

    @property
    def energy_threshold(self) -> float:
        if self.energy_guard == 'equation':
            return float(self.a_max)
        return (self.a_max - 1) / 2.0


@dataclass
class Quantum:
    position: np.ndarray
    energy: int
    local_best_position: np.ndarray
    local_best_cost: float


@dataclass
class SwarmState:
    quantums: List[Quantum]
    global_best_position: np.ndarray
    global_best_cost: float
    escape_counter: int = 0
    iteration: int = 0
    skips: int = 0

    def positions(self) -> np.ndarray:
        return np.array([q.position for q in self.quantums])


def init_swarm(params: HeoParams, space: SearchSpace, objective: ObjectiveSpec,
               rng: RandomStream, positions: Optional[np.ndarray] = None) -> SwarmState:
    """
    Spread ``params.k`` quanta uniformly over ``space`` (or place them at
    ``positions``), evaluate them once and take the best as global best.
    """
    if positions is None:
        positions = [sample_uniform(space, rng) for _ in range(params.k)]
    quantums = []
    for position in positions:
        position = np.array(position, dtype=np.float64)
        cost = finite_cost(objective(position))
        quantums.append(Quantum(position, 0, position.copy(), cost))

    best = min(range(len(quantums)), key=lambda i: quantums[i].local_best_cost)
    return SwarmState(
        quantums=quantums,
        global_best_position=quantums[best].position.copy(),
        global_best_cost=quantums[best].local_best_cost,
    )


def position_update(q: Quantum, state: SwarmState, params: HeoParams, rng: RandomStream) -> np.ndarray:
    """x + v_g + v_l, with scalar r1, r2, r3 drawn once per call."""
    r1 = rng.uniform(1.0 - params.escape_spread, 1.0 + params.escape_spread)
    r2 = rng.uniform(0.5, 1.5)
    r3 = rng.uniform(0.0, 1.0)
    x = q.position
    reflected = x * (state.escape_counter + 1) * r1
    v_g = (state.global_best_position - reflected) * r2 * r3
    v_l = (q.local_best_position - reflected) * r2 * (1.0 - r3)
    return x + v_g + v_l


def vibrate(q: Quantum, rng: RandomStream) -> np.ndarray:
    """
    Gaussian step with the spread of the quantum's own coordinates,
    scaled by 1 / (1 + e^a).
    """
    sigma = float(np.std(q.position))
    noise = rng.normal(0.0, sigma, q.position.size)
    return q.position + noise * expit(-q.energy)


def center_clip(x: np.ndarray, state: SwarmState, space: SearchSpace, rng: RandomStream) -> np.ndarray:
    """Clamp into the box of half side ``|x - x_g| * r5`` around x_g, then into the space."""
    r5 = rng.uniform(0.0, 2.0)
    x_g = state.global_best_position
    b_g = float(np.linalg.norm(x - x_g)) * r5
    return clamp(np.clip(x, x_g - b_g, x_g + b_g), space)


def random_skip(state: SwarmState, space: SearchSpace, rng: RandomStream, symmetric: bool = False):
    """
    Move every quantum halfway towards a fresh random vector r, then reset
    the escape counter. Bests are kept.

    r_j ~ U(0, b_j) with b the half side of the box, or U(lower_j, upper_j)
    when ``symmetric``. Results are clamped into the space.
    """
    for q in state.quantums:
        if symmetric:
            r = rng.uniform(space.lower, space.upper)
        else:
            r = rng.uniform(np.zeros(space.dim), space.half_side)
        q.position = clamp((q.position + r) / 2.0, space)
    state.escape_counter = 0
    state.skips += 1


def energy_tick(q: Quantum, params: HeoParams, rng: RandomStream):
    r4 = rng.uniform(0.0, 1.0)
    if q.energy * r4 < params.energy_threshold:
        q.energy += 1


def step(state: SwarmState, objective: ObjectiveSpec, params: HeoParams,
         space: SearchSpace, rng: RandomStream):
    """One iteration; quanta are processed sequentially and see each other's global best."""
    for q in state.quantums:
        # clamped before evaluation, not only when non-finite; the update alone can leave the box
        q.position = clamp(repair_position(position_update(q, state, params, rng), space), space)
        cost = finite_cost(objective(q.position))

        if cost < state.global_best_cost:
            state.global_best_position = q.position.copy()
            state.global_best_cost = cost
            state.escape_counter //= 2
            q.local_best_position = q.position.copy()
            q.local_best_cost = cost
        elif cost < q.local_best_cost:
            q.local_best_position = q.position.copy()
            q.local_best_cost = cost
            q.energy //= 2
        else:
            q.position = vibrate(q, rng)

        q.position = center_clip(q.position, state, space, rng)

    for q in state.quantums:
        energy_tick(q, params, rng)

    if state.escape_counter > params.c_max:
        random_skip(state, space, rng, symmetric=params.skip_symmetric)

    state.escape_counter += 1
    state.iteration += 1


def run(objective: ObjectiveSpec, params: HeoParams, space: SearchSpace, seed: int,
        record_history: bool = True, observer: Optional[Observer] = None) -> RunResult:
    rng = RandomStream(seed)
    history = HistoryRecorder(record_history)
    started_evaluations = objective.eval_count
    started = time.perf_counter()

    state = init_swarm(params, space, objective, rng)
    for _ in range(params.i_max):
        step(state, objective, params, space, rng)
        history.record(state.global_best_cost)
        if observer is not None:
            observer(state.iteration, state.positions(), state.global_best_cost)

    elapsed = time.perf_counter() - started
    logger.debug(
        "heo on %s seed=%s: best=%.6e evaluations=%d skips=%d time=%.3fs",
        objective.name, seed, state.global_best_cost,
        objective.eval_count - started_evaluations, state.skips, elapsed,
    )
    return RunResult(
        best_position=state.global_best_position.copy(),
        best_cost=state.global_best_cost,
        evaluations=objective.eval_count - started_evaluations,
        wall_time_seconds=elapsed,
        iterations=params.i_max,
        history=history.as_array(),
        algorithm='heo',
        seed=seed,
    )
