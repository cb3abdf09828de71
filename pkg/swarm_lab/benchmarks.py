"""
The fourteen benchmark functions (F1-F7 unimodal, F8-F14 multimodal), all with
f_min = 0 on [-100, 100]^p.

Formulas are written as published, including the (x + 0.5)^2 Step variant,
Rosenbrock without the usual factor 100, and the i * x_i^2 weighting of
Sum Squares. Every function accepts either one point or an array of points
along the last axis, so ``sphere(np.zeros(30))`` and ``sphere(points)`` with
``points.shape == (n, 30)`` both work.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .core import ObjectiveSpec, SearchSpace

UNIMODAL = 'unimodal'
MULTIMODAL = 'multimodal'

BOUND = 100.0


def sphere(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sum(x ** 2, axis=-1)


def step(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sum((x + 0.5) ** 2, axis=-1)


def schwefel221(x):
    x = np.asarray(x, dtype=np.float64)
    return np.max(np.abs(x), axis=-1)


def schwefel222(x):
    x = np.abs(np.asarray(x, dtype=np.float64))
    return np.sum(x, axis=-1) + np.prod(x, axis=-1)


def rosenbrock(x):
    x = np.asarray(x, dtype=np.float64)
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum((tail - head ** 2) ** 2 + (head - 1.0) ** 2, axis=-1)


def bent_cigar(x):
    x = np.asarray(x, dtype=np.float64)
    return x[..., 0] ** 2 + 1e6 * np.sum(x[..., 1:] ** 2, axis=-1)


def sum_squares(x):
    x = np.asarray(x, dtype=np.float64)
    weights = np.arange(1, x.shape[-1] + 1)
    return np.sum(weights * x ** 2, axis=-1)


def alpine(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=-1)


def griewank(x):
    x = np.asarray(x, dtype=np.float64)
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(x ** 2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=-1) + 1.0


def rastrigin(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=-1)


def ackley(x):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    root_mean_square = np.sqrt(np.sum(x ** 2, axis=-1) / n)
    mean_cos = np.sum(np.cos(2.0 * np.pi * x), axis=-1) / n
    return 20.0 + np.e - 20.0 * np.exp(-0.2 * root_mean_square) - np.exp(mean_cos)


def levy(x):
    x = np.asarray(x, dtype=np.float64)
    w = 1.0 + (x - 1.0) / 4.0
    head, last = w[..., :-1], w[..., -1]
    first = np.sin(np.pi * w[..., 0]) ** 2
    middle = np.sum((head - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * head + 1.0) ** 2), axis=-1)
    tail = (last - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * last) ** 2)
    return first + middle + tail


def salomon(x):
    x = np.asarray(x, dtype=np.float64)
    radius = np.sqrt(np.sum(x ** 2, axis=-1))
    return 1.0 - np.cos(2.0 * np.pi * radius) + 0.1 * radius


def schaffer(x):
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    pairs = np.sqrt(x[..., :-1] ** 2 + x[..., 1:] ** 2)
    return 0.5 + np.sum(np.sin(pairs) ** 2 - 0.5, axis=-1) / (d - 1)


@dataclass(frozen=True)
class BenchmarkInfo:
    name: str
    label: str
    title: str
    modality: str
    function: Callable
    minimizer_value: float = 0.0
    f_min: float = 0.0
    min_dim: int = 1

    def default_space(self, dim: int) -> SearchSpace:
        return SearchSpace.cube(-BOUND, BOUND, dim)

    def minimizer(self, dim: int) -> np.ndarray:
        return np.full(dim, self.minimizer_value)

    @property
    def unimodal(self) -> bool:
        return self.modality == UNIMODAL

    def __call__(self, x):
        return evaluate(self.name, x)


_BENCHMARKS: List[BenchmarkInfo] = [
    BenchmarkInfo('sphere', 'F1', 'Sphere', UNIMODAL, sphere),
    BenchmarkInfo('step', 'F2', 'Step', UNIMODAL, step, minimizer_value=-0.5),
    BenchmarkInfo('schwefel221', 'F3', 'Schwefel 2.21', UNIMODAL, schwefel221),
    BenchmarkInfo('schwefel222', 'F4', 'Schwefel 2.22', UNIMODAL, schwefel222),
    BenchmarkInfo('rosenbrock', 'F5', 'Rosenbrock', UNIMODAL, rosenbrock, minimizer_value=1.0, min_dim=2),
    BenchmarkInfo('bentcigar', 'F6', 'Bent Cigar', UNIMODAL, bent_cigar),
    BenchmarkInfo('sumsquares2', 'F7', 'Sum Squares 2', UNIMODAL, sum_squares),
    BenchmarkInfo('alpine', 'F8', 'Alpine', MULTIMODAL, alpine),
    BenchmarkInfo('griewank', 'F9', 'Griewank', MULTIMODAL, griewank),
    BenchmarkInfo('rastrigin', 'F10', 'Rastrigin', MULTIMODAL, rastrigin),
    BenchmarkInfo('ackley', 'F11', 'Ackley', MULTIMODAL, ackley),
    BenchmarkInfo('levy', 'F12', 'Levy', MULTIMODAL, levy, minimizer_value=1.0),
    BenchmarkInfo('salomon', 'F13', 'Salomon', MULTIMODAL, salomon),
    BenchmarkInfo('schaffer', 'F14', 'Schaffer', MULTIMODAL, schaffer, min_dim=2),
]

BENCHMARKS: Dict[str, BenchmarkInfo] = {info.name: info for info in _BENCHMARKS}
NAMES = tuple(BENCHMARKS)


def registry() -> List[BenchmarkInfo]:
    """All fourteen benchmarks in F1..F14 order."""
    return list(_BENCHMARKS)


def get(name: str) -> BenchmarkInfo:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise ValueError(f"unknown benchmark {name!r}; valid names: {', '.join(NAMES)}") from None


def evaluate(name: str, x) -> float:
    info = get(name)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] < info.min_dim:
        raise ValueError(f"{name} needs at least {info.min_dim} coordinates, got {x.shape[-1]}")
    return info.function(x)


def objective(name: str, dim: int) -> ObjectiveSpec:
    """Counting objective over the default [-100, 100]^dim box."""
    info = get(name)
    if dim < info.min_dim:
        raise ValueError(f"{name} needs dimension >= {info.min_dim}, got {dim}")
    return ObjectiveSpec(info.function, info.default_space(dim), name)
