"""
Shared building blocks for every optimizer in swarm_lab.

SearchSpace     box bounds of the decision vector
RandomStream    seeded random draws (numpy PCG64)
ObjectiveSpec   a named cost function with an evaluation counter
RunConfig       population / iterations / seed of a single run
RunResult       best point, best cost, convergence history and timing
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# observer(iteration, positions, best_cost), called after every iteration
Observer = Callable[[int, np.ndarray, float], None]


class ConfigurationError(ValueError):
    """Unknown algorithm, problem or parameter name."""


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box ``lower <= x <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=np.float64).ravel()
        upper = np.asarray(self.upper, dtype=np.float64).ravel()
        if lower.size == 0 or lower.shape != upper.shape:
            raise ValueError(
                f"lower and upper bounds must be non-empty and of equal length "
                f"(got {lower.size} and {upper.size})"
            )
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def cube(cls, low: float, high: float, dim: int) -> "SearchSpace":
        """Same ``[low, high]`` interval in every one of ``dim`` coordinates."""
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def half_side(self) -> np.ndarray:
        return (self.upper - self.lower) / 2.0

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def center(self) -> np.ndarray:
        return (self.upper + self.lower) / 2.0

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


class RandomStream:
    """
    Deterministic source of random draws for one run.

    Backed by numpy's ``Generator`` over the PCG64 bit generator, which is
    stable across platforms and numpy releases for a given seed. Normal
    variates come from numpy's ziggurat transform of the same uniform stream,
    so a seed reproduces every draw exactly.

    A stream has a single owner: never share one between concurrent runs.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, low=0.0, high=1.0, size=None):
        """Draw(s) in ``[low, high)``."""
        return self._generator.uniform(low, high, size)

    def normal(self, mu=0.0, sigma=1.0, size=None):
        """Gaussian draw(s); ``sigma == 0`` returns ``mu`` exactly."""
        return self._generator.normal(mu, sigma, size)

    def integers(self, low, high=None, size=None):
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def __repr__(self):
        return f"RandomStream(seed={self.seed})"


class ObjectiveSpec:
    """
    A cost function over a search space.

    Calling it evaluates ``evaluate(x)`` and increments ``eval_count``
    by exactly one, whatever the outcome.
    """

    def __init__(self, evaluate: Callable[[np.ndarray], float], space: SearchSpace, name: str):
        self.evaluate = evaluate
        self.space = space
        self.name = name
        self.eval_count = 0

    def __call__(self, x) -> float:
        self.eval_count += 1
        return float(self.evaluate(np.asarray(x, dtype=np.float64)))

    def evaluate_many(self, positions: np.ndarray) -> np.ndarray:
        """Evaluate each row of ``positions``, counting every call."""
        return np.array([self(row) for row in positions], dtype=np.float64)

    def fresh(self) -> "ObjectiveSpec":
        """Same function and space with the counter reset."""
        return ObjectiveSpec(self.evaluate, self.space, self.name)

    def __repr__(self):
        return f"ObjectiveSpec(name={self.name!r}, dim={self.space.dim}, eval_count={self.eval_count})"


@dataclass(frozen=True)
class RunConfig:
    population: int = 100
    iterations: int = 1000
    seed: int = 0
    record_history: bool = True

    def __post_init__(self):
        if self.population < 2:
            raise ValueError(f"population must be at least 2, got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be at least 1, got {self.iterations}")


@dataclass
class RunResult:
    best_position: np.ndarray
    best_cost: float
    evaluations: int
    wall_time_seconds: float
    iterations: int
    history: Optional[np.ndarray] = None
    algorithm: str = ''
    seed: Optional[int] = None

    @property
    def seconds_per_1000_iterations(self) -> float:
        return self.wall_time_seconds * 1000.0 / max(self.iterations, 1)


@dataclass
class HistoryRecorder:
    """Best-so-far cost after each iteration (nonincreasing by construction)."""

    enabled: bool = True
    values: list = field(default_factory=list)

    def record(self, best_cost: float):
        if self.enabled:
            if self.values and best_cost > self.values[-1]:
                best_cost = self.values[-1]
            self.values.append(best_cost)

    def as_array(self) -> Optional[np.ndarray]:
        return np.asarray(self.values, dtype=np.float64) if self.enabled else None


def clamp(x, space: SearchSpace) -> np.ndarray:
    """Componentwise clamp of ``x`` into ``space``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != space.dim:
        raise ValueError(f"expected a vector of length {space.dim}, got {x.shape[-1]}")
    return np.minimum(np.maximum(x, space.lower), space.upper)


def sample_uniform(space: SearchSpace, rng: RandomStream) -> np.ndarray:
    """One point drawn uniformly from ``[lower, upper)`` coordinate by coordinate."""
    return np.asarray(rng.uniform(space.lower, space.upper), dtype=np.float64)


def sample_population(space: SearchSpace, rng: RandomStream, count: int) -> np.ndarray:
    return np.asarray(rng.uniform(space.lower, space.upper, size=(count, space.dim)), dtype=np.float64)


def finite_cost(value: float) -> float:
    """NaN costs compare as +inf."""
    return math.inf if math.isnan(value) else value


def repair_position(x: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Clamp a position that may hold inf/NaN; NaN coordinates go to the box centre."""
    if np.all(np.isfinite(x)):
        return x
    logger.warning("non-finite position repaired into the search space")
    x = np.where(np.isnan(x), space.center, x)
    return clamp(x, space)


def as_vector(values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).ravel()
