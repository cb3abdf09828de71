"""
Model-based optimization: tune a logistic regression's (C, max_iter) with any
registered optimizer, or exhaustively over a grid.

Training is full-batch gradient descent on standardized features with an L2
penalty (1 / (2 C m)) ||theta[1:]||^2 on every weight except the bias. The
penalty is applied as a proximal shrink after each data step,
theta_j <- theta_j / (1 + lr / (C m)), so even C = 1e-16 cannot diverge.

The tuning cost is the mean squared error of predicted probabilities on a
fixed validation split of the training data. Training has no randomness, so
the cost is a deterministic function of (C, max_iter) for a given seed.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit

from .algorithms import ALGORITHMS, algorithm_params, run_algorithm
from .core import (
    ConfigurationError,
    HistoryRecorder,
    ObjectiveSpec,
    RandomStream,
    RunConfig,
    RunResult,
    SearchSpace,
)

logger = logging.getLogger(__name__)

PROBABILITY_EPS = 1e-12
TUNERS = ALGORITHMS + ('grid',)


class DatasetError(ValueError):
    """Malformed CSV input. ``line`` is the 1-based file line (header = 1) when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...] = ()
    class_names: Tuple[str, str] = ('0', '1')

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError(f"features must be a matrix, got shape {self.features.shape}")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError(
                f"{self.features.shape[0]} feature rows but {self.labels.size} labels"
            )
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite values")
        if not np.all((self.labels == 0) | (self.labels == 1)):
            raise ValueError("labels must be 0 or 1")
        if not self.feature_names:
            self.feature_names = tuple(f"x{j + 1}" for j in range(self.features.shape[1]))

    @property
    def m(self) -> int:
        return int(self.labels.size)

    @property
    def d(self) -> int:
        return int(self.features.shape[1])

    @property
    def class_counts(self) -> Dict[str, int]:
        ones = int(self.labels.sum())
        return {self.class_names[0]: self.m - ones, self.class_names[1]: ones}

    def subset(self, rows) -> "Dataset":
        return Dataset(self.features[rows], self.labels[rows], self.feature_names, self.class_names)


def load_csv(path) -> Dataset:
    """
    Read a header + rows CSV whose last column is the class label.

    The first class seen maps to 0, the second to 1. Every other column must
    be numeric and finite.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DatasetError(f"{path} is empty") from None
    except pd.errors.ParserError as exc:
        raise DatasetError(f"cannot parse {path}: {exc}") from None

    if frame.shape[1] < 2:
        raise DatasetError("need at least one feature column and a label column", line=1)
    if frame.empty:
        raise DatasetError(f"{path} has a header but no rows")

    feature_columns, label_column = list(frame.columns[:-1]), frame.columns[-1]
    features = np.empty((len(frame), len(feature_columns)))
    for j, column in enumerate(feature_columns):
        values = pd.to_numeric(frame[column].fillna('').str.strip(), errors='coerce').to_numpy(dtype=np.float64)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            row = int(bad[0])
            raise DatasetError(
                f"column {column!r} holds non-numeric value {frame[column].iloc[row]!r}",
                line=row + 2,
            )
        features[:, j] = values

    labels_text = frame[label_column].fillna('').str.strip()
    empty = np.flatnonzero(labels_text.to_numpy() == '')
    if empty.size:
        raise DatasetError("missing class label", line=int(empty[0]) + 2)
    classes = list(pd.unique(labels_text))
    if len(classes) < 2:
        raise DatasetError(f"only one class ({classes[0]!r}) present; need two")
    if len(classes) > 2:
        third = int(np.flatnonzero(labels_text.to_numpy() == classes[2])[0])
        raise DatasetError(f"more than two classes (found {classes[2]!r})", line=third + 2)

    data = Dataset(
        features,
        (labels_text == classes[1]).to_numpy().astype(np.int64),
        tuple(str(c) for c in feature_columns),
        (str(classes[0]), str(classes[1])),
    )
    logger.info("loaded %s: %d rows, class counts %s", path, data.m, data.class_counts)
    return data


def make_blobs(m: int = 1000, d: int = 7, seed: int = 0, separation: float = 2.0) -> Dataset:
    """Two unit-variance Gaussian blobs centred at -separation/2 and +separation/2 in every coordinate."""
    if m < 2 or d < 1:
        raise ValueError(f"need m >= 2 and d >= 1, got m={m}, d={d}")
    rng = RandomStream(seed)
    labels = np.zeros(m, dtype=np.int64)
    labels[m // 2:] = 1
    labels = labels[rng.permutation(m)]
    centres = np.where(labels[:, None] == 1, separation / 2.0, -separation / 2.0)
    features = centres + rng.normal(0.0, 1.0, (m, d))
    return Dataset(features, labels, class_names=('blob_a', 'blob_b'))


def _split_size(m: int, fraction: float) -> int:
    # rounding guards 100 * 0.3 = 30.000000000000004 against the ceiling
    return math.ceil(round(m * fraction, 9))


def train_test_split(data: Dataset, test_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Seeded shuffle; the test part gets ceil(m * test_fraction) rows."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n_test = _split_size(data.m, test_fraction)
    if n_test >= data.m:
        raise ValueError(f"a {test_fraction} split of {data.m} rows leaves no training rows")
    order = RandomStream(seed).permutation(data.m)
    return data.subset(np.sort(order[n_test:])), data.subset(np.sort(order[:n_test]))


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "Standardizer":
        scale = features.std(axis=0)
        return cls(features.mean(axis=0), np.where(scale > 0, scale, 1.0))

    def transform(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=np.float64) - self.mean) / self.scale


def design_matrix(features: np.ndarray) -> np.ndarray:
    """Prepend the bias column."""
    return np.hstack([np.ones((features.shape[0], 1)), features])


def loss(theta: np.ndarray, X: np.ndarray, y: np.ndarray, C: float) -> float:
    """Mean cross-entropy plus (1 / (2 C m)) ||theta[1:]||^2."""
    m = y.size
    z = X @ theta
    # -log h(z) = log(1 + e^-z), -log(1 - h(z)) = log(1 + e^z)
    data_term = np.mean(y * np.logaddexp(0.0, -z) + (1 - y) * np.logaddexp(0.0, z))
    return float(data_term + np.sum(theta[1:] ** 2) / (2.0 * C * m))


def gradient(theta: np.ndarray, X: np.ndarray, y: np.ndarray, C: float) -> np.ndarray:
    m = y.size
    grad = X.T @ (expit(X @ theta) - y) / m
    grad[1:] += theta[1:] / (C * m)
    return grad


@dataclass
class LogisticModel:
    theta: np.ndarray
    standardizer: Standardizer
    C: float
    max_iter: int
    loss_history: list = field(default_factory=list)

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        X = design_matrix(self.standardizer.transform(features))
        return np.clip(expit(X @ self.theta), PROBABILITY_EPS, 1.0 - PROBABILITY_EPS)

    def predict(self, features: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(features) >= threshold).astype(np.int64)


def train(data: Dataset, C: float, max_iter: int, learning_rate: float = 0.1,
          record_loss: bool = False) -> LogisticModel:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    if learning_rate <= 0:
        raise ValueError(f"learning_rate must be positive, got {learning_rate}")

    standardizer = Standardizer.fit(data.features)
    X = design_matrix(standardizer.transform(data.features))
    y = data.labels.astype(np.float64)
    m = data.m
    theta = np.zeros(X.shape[1])
    shrink = 1.0 + learning_rate / (C * m)
    history = [loss(theta, X, y, C)] if record_loss else []

    for _ in range(int(max_iter)):
        theta -= learning_rate * (X.T @ (expit(X @ theta) - y) / m)
        theta[1:] /= shrink
        if record_loss:
            history.append(loss(theta, X, y, C))

    return LogisticModel(theta, standardizer, float(C), int(max_iter), history)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @classmethod
    def from_predictions(cls, truth, predicted) -> "ConfusionMatrix":
        truth = np.asarray(truth, dtype=bool)
        predicted = np.asarray(predicted, dtype=bool)
        return cls(
            tp=int(np.sum(truth & predicted)),
            tn=int(np.sum(~truth & ~predicted)),
            fp=int(np.sum(~truth & predicted)),
            fn=int(np.sum(truth & ~predicted)),
        )

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    sensitivity: float
    specificity: float
    precision: float
    recall: float
    f1: float
    undefined: Tuple[str, ...] = ()  # metrics reported as 0 because of a zero denominator

    def to_dict(self) -> dict:
        return {
            'accuracy': self.accuracy,
            'sensitivity': self.sensitivity,
            'specificity': self.specificity,
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
            'undefined': list(self.undefined),
        }


def _ratio(numerator, denominator, name, undefined):
    if denominator == 0:
        undefined.append(name)
        return 0.0
    return numerator / denominator


def metrics_from_confusion(cm: ConfusionMatrix) -> Metrics:
    if cm.total == 0:
        raise ValueError("metrics need a nonempty test set")
    undefined = []
    accuracy = (cm.tp + cm.tn) / cm.total
    sensitivity = _ratio(cm.tp, cm.tp + cm.fn, 'sensitivity', undefined)
    specificity = _ratio(cm.tn, cm.tn + cm.fp, 'specificity', undefined)
    precision = _ratio(cm.tp, cm.tp + cm.fp, 'precision', undefined)
    recall = sensitivity
    if 'sensitivity' in undefined:
        undefined.append('recall')
    f1 = _ratio(2.0 * precision * recall, precision + recall, 'f1', undefined)
    if undefined:
        logger.warning("zero denominator for %s, reported as 0", ', '.join(undefined))
    return Metrics(accuracy, sensitivity, specificity, precision, recall, f1, tuple(undefined))


def metrics(model: LogisticModel, test: Dataset, threshold: float = 0.5) -> Metrics:
    predicted = model.predict(test.features, threshold)
    return metrics_from_confusion(ConfusionMatrix.from_predictions(test.labels, predicted))


@dataclass(frozen=True)
class TuneBounds:
    c_min: float = 1e-16
    c_max: float = 100.0
    iter_min: int = 1
    iter_max: int = 100

    @property
    def space(self) -> SearchSpace:
        return SearchSpace([self.c_min, float(self.iter_min)], [self.c_max, float(self.iter_max)])

    def decode(self, x) -> Tuple[float, int]:
        """(C, max_iter) for a decision vector; max_iter rounded to the nearest integer."""
        c = float(np.clip(x[0], self.c_min, self.c_max))
        iterations = int(np.clip(round(float(x[1])), self.iter_min, self.iter_max))
        return c, iterations


def _validation_mse(fit: Dataset, validation: Dataset, bounds: TuneBounds, learning_rate: float, x) -> float:
    C, max_iter = bounds.decode(x)
    model = train(fit, C, max_iter, learning_rate)
    probabilities = model.predict_proba(validation.features)
    return float(np.mean((probabilities - validation.labels) ** 2))


def tune_objective(data: Dataset, seed: int, validation_fraction: float = 0.25,
                   learning_rate: float = 0.1, bounds: Optional[TuneBounds] = None) -> ObjectiveSpec:
    """Validation MSE over (x1 = C, x2 = max_iter); the fit/validation split is fixed by ``seed``."""
    bounds = bounds or TuneBounds()
    fit, validation = train_test_split(data, validation_fraction, seed)
    evaluate = partial(_validation_mse, fit, validation, bounds, learning_rate)
    return ObjectiveSpec(evaluate, bounds.space, 'logistic_regression')


def grid_search(objective: ObjectiveSpec, grid_sizes: Sequence[int] = (50, 50)) -> RunResult:
    """
    Evaluate every lattice point (endpoints included, a size of 1 means the
    lower bound only) and return the best. History is best-so-far per point.
    """
    space = objective.space
    if len(grid_sizes) != space.dim:
        raise ValueError(f"need {space.dim} grid sizes, got {len(grid_sizes)}")
    if any(int(n) < 1 for n in grid_sizes):
        raise ValueError(f"grid sizes must be positive, got {tuple(grid_sizes)}")

    axes = [
        np.linspace(lo, hi, int(n)) if int(n) > 1 else np.array([lo])
        for lo, hi, n in zip(space.lower, space.upper, grid_sizes)
    ]
    history = HistoryRecorder(True)
    started, evaluations_before = time.perf_counter(), objective.eval_count
    best_position, best_cost = None, math.inf

    for point in itertools.product(*axes):
        point = np.array(point)
        cost = objective(point)
        if best_position is None or cost < best_cost:
            best_position, best_cost = point, cost
        history.record(best_cost)

    evaluations = objective.eval_count - evaluations_before
    return RunResult(
        best_position=best_position,
        best_cost=float(best_cost),
        evaluations=evaluations,
        wall_time_seconds=time.perf_counter() - started,
        iterations=evaluations,
        history=history.as_array(),
        algorithm='grid',
    )


@dataclass
class TuningReport:
    algorithm: str
    seed: int
    best_C: float
    best_max_iter: int
    validation_mse: float
    test_metrics: Metrics
    search_time_seconds: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            'algorithm': self.algorithm,
            'seed': self.seed,
            'best_C': self.best_C,
            'best_max_iter': self.best_max_iter,
            'validation_mse': self.validation_mse,
            'test_metrics': self.test_metrics.to_dict(),
            'search_time_seconds': self.search_time_seconds,
            'evaluations': self.evaluations,
        }


def check_tuning_options(data: Dataset, algorithm: str = 'heo', population: int = 50, iterations: int = 50,
                         test_fraction: float = 0.25, validation_fraction: float = 0.25,
                         learning_rate: float = 0.1, grid_sizes: Sequence[int] = (50, 50),
                         overrides: Optional[dict] = None):
    """Raise before any training if a tuning run could not start or would run out of rows."""
    if algorithm not in TUNERS:
        raise ConfigurationError(f"unknown tuner {algorithm!r}; valid names: {', '.join(TUNERS)}")
    for name, fraction in (('test_fraction', test_fraction), ('validation_fraction', validation_fraction)):
        if not 0.0 < fraction < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {fraction}")
    if learning_rate <= 0:
        raise ValueError(f"learning_rate must be positive, got {learning_rate}")
    if algorithm == 'grid':
        if len(grid_sizes) != 2 or any(int(n) < 1 for n in grid_sizes):
            raise ValueError(f"need two positive grid sizes, got {tuple(grid_sizes)}")
    else:
        algorithm_params(algorithm, RunConfig(population, iterations), overrides)

    training_rows = data.m - _split_size(data.m, test_fraction)
    fit_rows = training_rows - _split_size(training_rows, validation_fraction)
    if training_rows < 1 or fit_rows < 1:
        raise ValueError(
            f"{data.m} rows leave no rows to fit after test_fraction={test_fraction} "
            f"and validation_fraction={validation_fraction}"
        )


def run_tuning(data: Dataset, algorithm: str = 'heo', seed: int = 0, population: int = 50,
               iterations: int = 50, test_fraction: float = 0.25, validation_fraction: float = 0.25,
               learning_rate: float = 0.1, grid_sizes: Sequence[int] = (50, 50),
               overrides: Optional[dict] = None, bounds: Optional[TuneBounds] = None) -> TuningReport:
    """
    Split off a test set, tune (C, max_iter) on the rest, retrain on the whole
    training split with the tuned values and score the test set.
    """
    check_tuning_options(data, algorithm, population, iterations, test_fraction, validation_fraction,
                         learning_rate, grid_sizes, overrides)
    bounds = bounds or TuneBounds()
    training, test = train_test_split(data, test_fraction, seed)
    objective = tune_objective(training, seed, validation_fraction, learning_rate, bounds)

    if algorithm == 'grid':
        result = grid_search(objective, grid_sizes)
    else:
        config = RunConfig(population=population, iterations=iterations, seed=seed, record_history=False)
        result = run_algorithm(algorithm, objective, config, overrides)

    C, max_iter = bounds.decode(result.best_position)
    model = train(training, C, max_iter, learning_rate)
    report = TuningReport(
        algorithm=algorithm,
        seed=seed,
        best_C=C,
        best_max_iter=max_iter,
        validation_mse=result.best_cost,
        test_metrics=metrics(model, test),
        search_time_seconds=result.wall_time_seconds,
        evaluations=result.evaluations,
    )
    logger.info(
        "%s tuning: C=%.6e max_iter=%d validation_mse=%.6e test accuracy=%.4f",
        algorithm, C, max_iter, report.validation_mse, report.test_metrics.accuracy,
    )
    return report
