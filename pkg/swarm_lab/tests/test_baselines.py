import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal

from swarm_lab import baselines, benchmarks
from swarm_lab.algorithms import ALGORITHMS, algorithm_params, check_algorithm, run_algorithm
from swarm_lab.core import ConfigurationError, ObjectiveSpec, RunConfig, SearchSpace

from .streams import CountingFunction

RUNNERS = {
    'pso': baselines.pso_run,
    'gwo': baselines.gwo_run,
    'ga': baselines.ga_run,
    'qpso': baselines.qpso_run,
}


class SphereConvergenceTests(SimpleTestCase):
    config = RunConfig(population=30, iterations=300, seed=0)

    def best(self, name):
        return RUNNERS[name](benchmarks.objective('sphere', 2), self.config).best_cost

    def test_pso(self):
        self.assertLessEqual(self.best('pso'), 1e-4)

    def test_gwo(self):
        self.assertLessEqual(self.best('gwo'), 1e-6)

    def test_ga(self):
        self.assertLessEqual(self.best('ga'), 1e-2)

    def test_qpso(self):
        self.assertLessEqual(self.best('qpso'), 1e-6)


class ContractTests(SimpleTestCase):
    config = RunConfig(population=12, iterations=40, seed=3)

    def test_deterministic(self):
        for name, runner in RUNNERS.items():
            with self.subTest(algorithm=name):
                first = runner(benchmarks.objective('griewank', 4), self.config)
                second = runner(benchmarks.objective('griewank', 4), self.config)
                self.assertEqual(first.best_cost, second.best_cost)
                assert_array_equal(first.best_position, second.best_position)

    def test_history(self):
        for name, runner in RUNNERS.items():
            with self.subTest(algorithm=name):
                result = runner(benchmarks.objective('rastrigin', 3), self.config)
                self.assertEqual(result.history.size, self.config.iterations)
                self.assertTrue(np.all(np.diff(result.history) <= 0))
                self.assertEqual(result.history[-1], result.best_cost)
                self.assertEqual(result.algorithm, name)

    def test_positions_stay_in_bounds(self):
        space = SearchSpace([-5, 0, 10], [5, 1, 20])
        objective = ObjectiveSpec(benchmarks.sphere, space, 'shifted')
        for name, runner in RUNNERS.items():
            def observer(iteration, positions, best_cost):
                self.assertTrue(np.all(positions >= space.lower) and np.all(positions <= space.upper))

            with self.subTest(algorithm=name):
                runner(objective.fresh(), self.config, observer=observer)

    def test_evaluation_counts(self):
        k, iterations = self.config.population, self.config.iterations
        expected = {
            'pso': k * (iterations + 1),
            'gwo': k * (iterations + 1),
            'ga': k + (k - 1) * iterations,
            'qpso': k * (iterations + 1),
        }
        for name, runner in RUNNERS.items():
            with self.subTest(algorithm=name):
                function = CountingFunction(benchmarks.sphere)
                objective = ObjectiveSpec(function, SearchSpace.cube(-10, 10, 2), 'sphere')
                result = runner(objective, self.config)
                self.assertEqual(result.evaluations, expected[name])
                self.assertEqual(function.calls, expected[name])

    def test_ga_elitism(self):
        bests = []
        baselines.ga_run(benchmarks.objective('ackley', 5), self.config,
                         observer=lambda iteration, positions, best: bests.append(best))
        self.assertTrue(np.all(np.diff(bests) <= 0))

    def test_parameter_validation(self):
        with self.assertRaises(ValueError):
            baselines.PsoParams(inertia=1.5)
        with self.assertRaises(ValueError):
            baselines.PsoParams(velocity_clamp=0)
        with self.assertRaises(ValueError):
            baselines.GaParams(crossover_rate=1.2)
        with self.assertRaises(ValueError):
            baselines.GaParams(tournament_size=0)
        with self.assertRaises(ValueError):
            baselines.QpsoParams(beta_start=0)


class LeaderTests(SimpleTestCase):

    def test_three_lowest_in_order(self):
        positions = np.arange(8.0).reshape(4, 2)
        leaders, costs = baselines.select_leaders(positions, np.array([3.0, 1.0, 2.0, 0.0]))
        assert_array_equal(costs, [0.0, 1.0, 2.0])
        assert_array_equal(leaders[0], [6, 7])

    def test_padded_for_small_packs(self):
        leaders, costs = baselines.select_leaders(np.array([[1.0], [2.0]]), np.array([5.0, 4.0]))
        assert_array_equal(costs, [4.0, 5.0, 5.0])

    def test_leaders_never_worsen(self):
        alphas = []
        baselines.gwo_run(benchmarks.objective('levy', 3), RunConfig(10, 50, 1),
                          observer=lambda iteration, positions, best: alphas.append(best))
        self.assertTrue(np.all(np.diff(alphas) <= 0))


class DispatchTests(SimpleTestCase):

    def test_names(self):
        self.assertEqual(set(ALGORITHMS), {'pso', 'gwo', 'heo', 'ga', 'qpso'})
        with self.assertRaisesMessage(ConfigurationError, 'valid names'):
            check_algorithm('afsa')

    def test_every_algorithm_runs(self):
        for name in ALGORITHMS:
            with self.subTest(algorithm=name):
                result = run_algorithm(name, benchmarks.objective('sphere', 2), RunConfig(5, 5, 0))
                self.assertEqual(result.algorithm, name)
                self.assertEqual(result.iterations, 5)

    def test_overrides(self):
        result = run_algorithm('heo', benchmarks.objective('sphere', 2), RunConfig(5, 5, 0), {'c_max': 1})
        self.assertEqual(result.algorithm, 'heo')
        with self.assertRaisesMessage(ConfigurationError, 'inertia'):
            run_algorithm('heo', benchmarks.objective('sphere', 2), RunConfig(5, 5, 0), {'inertia': 0.5})
        with self.assertRaises(ConfigurationError):
            run_algorithm('gwo', benchmarks.objective('sphere', 2), RunConfig(5, 5, 0), {'a': 2})

    def test_params_are_built_before_running(self):
        config = RunConfig(7, 11, 0)
        params = algorithm_params('heo', config, {'c_max': 2})
        self.assertEqual((params.k, params.i_max, params.c_max), (7, 11, 2))
        self.assertIsNone(algorithm_params('gwo', config))
        self.assertEqual(algorithm_params('qpso', config, {'beta_end': 0.4}).beta_end, 0.4)
        with self.assertRaisesMessage(ValueError, 'escape_spread'):
            algorithm_params('heo', config, {'escape_spread': 2.0})
        with self.assertRaises(ValueError):
            algorithm_params('ga', config, {'crossover_rate': -1.0})
