"""
Full-protocol checks. Minutes of CPU each; excluded from the quick run with
``python manage.py test swarm_lab --exclude-tag slow``.
"""
import numpy as np
from django.test import SimpleTestCase, tag

from swarm_lab import benchmarks, constrained, heo, modelopt
from swarm_lab.algorithms import ALGORITHMS, run_algorithm
from swarm_lab.core import ObjectiveSpec, RunConfig, SearchSpace

SEEDS = (1, 2, 3, 4, 5)


def heo_costs(name, dim=30):
    costs = []
    for seed in SEEDS:
        objective = benchmarks.objective(name, dim)
        costs.append(heo.run(objective, heo.HeoParams(), objective.space, seed, record_history=False).best_cost)
    return np.array(costs)


@tag('slow')
class BenchmarkAcceptanceTests(SimpleTestCase):

    def test_sphere(self):
        self.assertGreaterEqual(np.sum(heo_costs('sphere') <= 1e-10), 4)

    def test_rastrigin(self):
        self.assertGreaterEqual(np.sum(heo_costs('rastrigin') <= 1e-8), 3)

    def test_schwefel221(self):
        self.assertGreaterEqual(np.sum(heo_costs('schwefel221') <= 1e-20), 3)


@tag('slow')
class EngineeringAcceptanceTests(SimpleTestCase):
    config = RunConfig(population=100, iterations=1000, seed=1, record_history=False)

    def best_on_samples(self, problem, points):
        ok = constrained.feasible(problem, points)
        return float(np.min(problem.objective(points[ok])))

    def test_tubular_column_against_grid(self):
        problem = constrained.tubular_column()
        d, t = np.meshgrid(np.linspace(2.0, 14.0, 1000), np.linspace(0.2, 0.8, 1000))
        oracle = self.best_on_samples(problem, np.stack([d.ravel(), t.ravel()], axis=-1))

        solution = constrained.solve(problem, 'heo', self.config, {'c_max': 1})
        self.assertTrue(solution.feasible)
        self.assertLessEqual(solution.cost, oracle * 1.01)

    def test_pressure_vessel_against_random_samples(self):
        problem = constrained.pressure_vessel()
        rng = np.random.default_rng(0)
        oracle = np.inf
        for _ in range(10):
            points = rng.uniform(problem.space.lower, problem.space.upper, (100_000, 4))
            if np.any(constrained.feasible(problem, points)):
                oracle = min(oracle, self.best_on_samples(problem, points))

        solution = constrained.solve(problem, 'heo', self.config, {'c_max': 1})
        self.assertTrue(solution.feasible)
        self.assertLessEqual(solution.cost, oracle)


@tag('slow')
class BoundsFuzzTests(SimpleTestCase):

    def test_positions_stay_inside_random_boxes(self):
        rng = np.random.default_rng(42)
        registry = benchmarks.registry()
        for case in range(50):
            info = registry[int(rng.integers(len(registry)))]
            seed = int(rng.integers(2 ** 31))
            dim = int(rng.integers(max(info.min_dim, 1), 6))
            lower = rng.uniform(-1e3, 1e3, dim)
            upper = lower + rng.uniform(1e-3, 1e3, dim)
            space = SearchSpace(lower, upper)

            for algorithm in ALGORITHMS:
                def observer(iteration, positions, best_cost):
                    self.assertTrue(np.all(positions >= space.lower) and np.all(positions <= space.upper),
                                    f"{algorithm} left the box on {info.name} at iteration {iteration}")

                with self.subTest(case=case, function=info.name, algorithm=algorithm):
                    objective = ObjectiveSpec(info.function, space, info.name)
                    result = run_algorithm(algorithm, objective, RunConfig(8, 200, seed), observer=observer)
                    self.assertTrue(space.contains(result.best_position))


@tag('slow')
class TuningAcceptanceTests(SimpleTestCase):

    def setUp(self):
        self.data = modelopt.make_blobs(1000, 7, seed=0)

    def test_heo_accuracy(self):
        report = modelopt.run_tuning(self.data, 'heo', seed=0)
        self.assertGreaterEqual(report.test_metrics.accuracy, 0.95)

    def test_full_grid(self):
        report = modelopt.run_tuning(self.data, 'grid', seed=0)
        self.assertEqual(report.evaluations, 2500)
        self.assertGreaterEqual(report.test_metrics.accuracy, 0.95)
