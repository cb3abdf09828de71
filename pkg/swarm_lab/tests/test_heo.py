import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from swarm_lab import benchmarks, heo
from swarm_lab.core import ObjectiveSpec, RandomStream, SearchSpace

from .streams import CountingFunction, ScriptedStream

SQUARE = SearchSpace.cube(-100, 100, 2)


def quantum(position, local_best=None, energy=0, local_cost=math.inf):
    position = np.array(position, dtype=np.float64)
    local_best = position if local_best is None else np.array(local_best, dtype=np.float64)
    return heo.Quantum(position, energy, local_best.copy(), local_cost)


def swarm(quantums, global_best, global_cost=math.inf, escape_counter=0):
    return heo.SwarmState(quantums, np.array(global_best, dtype=np.float64), global_cost, escape_counter)


class HeoParamsTests(SimpleTestCase):

    def test_defaults(self):
        params = heo.HeoParams()
        self.assertEqual((params.a_max, params.c_max, params.escape_spread), (10, 5, 0.5))
        self.assertEqual(params.energy_threshold, 4.5)

    def test_equation_guard(self):
        self.assertEqual(heo.HeoParams(energy_guard='equation').energy_threshold, 10.0)

    def test_validation(self):
        for bad in ({'k': 1}, {'a_max': 0}, {'c_max': 0}, {'escape_spread': 0.0},
                    {'escape_spread': 1.5}, {'energy_guard': 'other'}):
            with self.subTest(bad=bad), self.assertRaises(ValueError):
                heo.HeoParams(**bad)


class InitSwarmTests(SimpleTestCase):

    def test_injected_positions(self):
        objective = benchmarks.objective('sphere', 2)
        state = heo.init_swarm(heo.HeoParams(k=2), SQUARE, objective, RandomStream(0),
                               positions=[[0, 0], [3, 4]])
        self.assertEqual(state.global_best_cost, 0.0)
        assert_array_equal(state.global_best_position, [0, 0])
        self.assertEqual(state.quantums[1].local_best_cost, 25.0)
        self.assertEqual([q.energy for q in state.quantums], [0, 0])
        self.assertEqual(state.escape_counter, 0)

    def test_same_seed_same_swarm(self):
        params = heo.HeoParams(k=10)
        first = heo.init_swarm(params, SQUARE, benchmarks.objective('sphere', 2), RandomStream(9))
        second = heo.init_swarm(params, SQUARE, benchmarks.objective('sphere', 2), RandomStream(9))
        assert_array_equal(first.positions(), second.positions())
        self.assertEqual(first.global_best_cost, second.global_best_cost)
        self.assertTrue(all(SQUARE.contains(x) for x in first.positions()))


class PositionUpdateTests(SimpleTestCase):

    def test_halfway_between_optima(self):
        q = quantum([0, 0], local_best=[0, 2])
        state = swarm([q], global_best=[2, 0])
        x = heo.position_update(q, state, heo.HeoParams(), ScriptedStream([1.0, 1.0, 0.5]))
        assert_allclose(x, [1, 1])

    def test_fixed_point(self):
        q = quantum([5, 5])
        state = swarm([q], global_best=[5, 5])
        for r3 in (0.0, 0.3, 0.9):
            x = heo.position_update(q, state, heo.HeoParams(), ScriptedStream([1.0, 1.0, r3]))
            assert_array_equal(x, [5, 5])

    def test_reflection_past_the_optimum(self):
        q = quantum([1, 1], local_best=[0, 0])
        state = swarm([q], global_best=[0, 0], escape_counter=1)
        x = heo.position_update(q, state, heo.HeoParams(), ScriptedStream([1.0, 1.0, 1.0]))
        assert_allclose(x, [-1, -1])

    def test_does_not_mutate_state(self):
        q = quantum([1, 1], local_best=[0, 0])
        state = swarm([q], global_best=[0, 0])
        heo.position_update(q, state, heo.HeoParams(), RandomStream(0))
        assert_array_equal(q.position, [1, 1])
        self.assertEqual(state.escape_counter, 0)


class VibrateTests(SimpleTestCase):

    def test_zero_spread_does_not_move(self):
        assert_array_equal(heo.vibrate(quantum([3, 3, 3]), RandomStream(0)), [3, 3, 3])

    def test_zero_energy_halves_the_step(self):
        # std([1, 3]) = 1
        x = heo.vibrate(quantum([1, 3], energy=0), ScriptedStream(normals=[[1.0, -1.0]]))
        assert_allclose(x, [1.5, 2.5])

    def test_energy_damping(self):
        x = heo.vibrate(quantum([1, 3], energy=2), ScriptedStream(normals=[[1.0, 0.0]]))
        self.assertAlmostEqual(x[0] - 1.0, 0.1192029220, places=9)
        self.assertEqual(x[1], 3.0)

    def test_displacement_spread(self):
        q = quantum(np.arange(10.0))
        sigma = float(np.std(q.position))
        rng = RandomStream(5)
        steps = np.concatenate([heo.vibrate(q, rng) - q.position for _ in range(10_000)])
        self.assertAlmostEqual(np.std(steps) / sigma, 0.5, delta=0.01)


class CenterClipTests(SimpleTestCase):

    def test_inside_the_group_box(self):
        state = swarm([], global_best=[0, 0])
        assert_allclose(heo.center_clip(np.array([10.0, 0.0]), state, SQUARE, ScriptedStream([1.0])), [10, 0])

    def test_clipped_to_the_group_box(self):
        state = swarm([], global_best=[0, 0])
        x = heo.center_clip(np.array([150.0, 50.0]), state, SQUARE, ScriptedStream([0.5]))
        assert_allclose(x, [79.0569415042, 50.0])

    def test_at_the_global_best(self):
        state = swarm([], global_best=[4, -2])
        assert_array_equal(heo.center_clip(np.array([4.0, -2.0]), state, SQUARE, RandomStream(1)), [4, -2])


class RandomSkipTests(SimpleTestCase):

    def test_midpoints(self):
        state = swarm([quantum([100, 100]), quantum([-100, -100])], global_best=[0, 0], escape_counter=9)
        heo.random_skip(state, SQUARE, ScriptedStream([[0.0, 0.0], [100.0, 100.0]]))
        assert_array_equal(state.quantums[0].position, [50, 50])
        assert_array_equal(state.quantums[1].position, [0, 0])
        self.assertEqual(state.escape_counter, 0)
        self.assertEqual(state.skips, 1)

    def test_bests_are_kept(self):
        q = quantum([10, 10], local_best=[1, 1], local_cost=2.0)
        state = swarm([q], global_best=[1, 1], global_cost=2.0)
        heo.random_skip(state, SQUARE, RandomStream(0))
        assert_array_equal(q.local_best_position, [1, 1])
        self.assertEqual((q.local_best_cost, state.global_best_cost), (2.0, 2.0))

    def test_containment(self):
        space = SearchSpace([-10, 0], [10, 4])
        rng = RandomStream(2)
        state = swarm([quantum(x) for x in [[-10, 0], [10, 4], [0, 2]]], global_best=[0, 2])
        for _ in range(50):
            heo.random_skip(state, space, rng)
            for q in state.quantums:
                self.assertTrue(np.all(q.position >= space.lower / 2))
                self.assertTrue(np.all(q.position <= (space.upper + space.half_side) / 2))

    def test_symmetric_skip_stays_inside_positive_box(self):
        space = SearchSpace([2, 0.2], [14, 0.8])
        state = swarm([quantum([14, 0.8])], global_best=[2, 0.2])
        for seed in range(20):
            heo.random_skip(state, space, RandomStream(seed), symmetric=True)
            self.assertTrue(space.contains(state.quantums[0].position))


class EnergyTickTests(SimpleTestCase):

    def test_zero_energy_increments(self):
        q = quantum([0, 0], energy=0)
        heo.energy_tick(q, heo.HeoParams(a_max=2), ScriptedStream([0.99]))
        self.assertEqual(q.energy, 1)

    def test_degenerate_ceiling(self):
        q = quantum([0, 0], energy=0)
        rng = RandomStream(0)
        for _ in range(20):
            heo.energy_tick(q, heo.HeoParams(a_max=1), rng)
        self.assertEqual(q.energy, 0)

    def test_guard_blocks(self):
        q = quantum([0, 0], energy=10)
        heo.energy_tick(q, heo.HeoParams(a_max=10), ScriptedStream([0.5]))
        self.assertEqual(q.energy, 10)

    def test_equation_guard_allows(self):
        q = quantum([0, 0], energy=10)
        heo.energy_tick(q, heo.HeoParams(a_max=10, energy_guard='equation'), ScriptedStream([0.5]))
        self.assertEqual(q.energy, 11)


class StepTests(SimpleTestCase):

    def test_single_quantum_at_the_optimum(self):
        objective = benchmarks.objective('sphere', 2)
        params = heo.HeoParams(k=2)
        rng = RandomStream(3)
        state = heo.init_swarm(params, SQUARE, objective, rng, positions=[[0, 0]])
        heo.step(state, objective, params, SQUARE, rng)
        self.assertEqual(state.global_best_cost, 0.0)
        self.assertEqual(state.escape_counter, 1)
        self.assertEqual(state.iteration, 1)

    def test_counter_without_improvement(self):
        objective = ObjectiveSpec(lambda x: 1.0, SQUARE, 'flat')
        params = heo.HeoParams(k=3, c_max=1)
        rng = RandomStream(4)
        state = heo.init_swarm(params, SQUARE, objective, rng)
        counters = []
        for _ in range(5):
            heo.step(state, objective, params, SQUARE, rng)
            counters.append(state.escape_counter)
        self.assertEqual(counters, [1, 2, 1, 2, 1])
        self.assertEqual(state.skips, 2)

    def test_counter_halves_on_improvement(self):
        objective = benchmarks.objective('sphere', 2)
        params = heo.HeoParams(k=2)
        rng = RandomStream(8)
        state = heo.init_swarm(params, SQUARE, objective, rng, positions=[[10, 10]])
        state.global_best_cost = math.inf
        state.escape_counter = 7
        heo.step(state, objective, params, SQUARE, rng)
        self.assertEqual(state.escape_counter, 4)

    def test_global_improvement_is_also_a_local_best(self):
        objective = benchmarks.objective('sphere', 2)
        params = heo.HeoParams(k=2)
        rng = RandomStream(8)
        state = heo.init_swarm(params, SQUARE, objective, rng, positions=[[10, 10]])
        state.global_best_cost = math.inf
        heo.step(state, objective, params, SQUARE, rng)
        q = state.quantums[0]
        self.assertEqual(q.local_best_cost, state.global_best_cost)
        assert_array_equal(q.local_best_position, state.global_best_position)

    def test_invariants_over_many_steps(self):
        objective = benchmarks.objective('rastrigin', 3)
        space = objective.space
        params = heo.HeoParams(k=15, c_max=2)
        rng = RandomStream(12)
        state = heo.init_swarm(params, space, objective, rng)
        previous_global = state.global_best_cost
        previous_local = [q.local_best_cost for q in state.quantums]
        previous_energy = [q.energy for q in state.quantums]
        for _ in range(60):
            counter, skips, best = state.escape_counter, state.skips, state.global_best_cost
            heo.step(state, objective, params, space, rng)
            self.assertLessEqual(state.global_best_cost, previous_global)
            for i, q in enumerate(state.quantums):
                self.assertTrue(space.contains(q.position))
                self.assertGreaterEqual(q.energy, 0)
                self.assertLessEqual(q.local_best_cost, previous_local[i])
                if q.local_best_cost == previous_local[i]:
                    # no local improvement: energy can only grow
                    self.assertGreaterEqual(q.energy, previous_energy[i])
            if state.skips > skips:
                self.assertEqual(state.escape_counter, 1)
            elif state.global_best_cost == best:
                self.assertEqual(state.escape_counter, counter + 1)
            previous_global = state.global_best_cost
            previous_local = [q.local_best_cost for q in state.quantums]
            previous_energy = [q.energy for q in state.quantums]

    def test_objective_errors_propagate(self):
        def broken(x):
            raise ZeroDivisionError('boom')

        objective = ObjectiveSpec(broken, SQUARE, 'broken')
        with self.assertRaises(ZeroDivisionError):
            heo.run(objective, heo.HeoParams(k=2, i_max=1), SQUARE, seed=0)


class RunTests(SimpleTestCase):

    def run_sphere(self, seed):
        objective = benchmarks.objective('sphere', 2)
        return heo.run(objective, heo.HeoParams(k=20, i_max=200), objective.space, seed)

    def test_sphere_converges(self):
        for seed in (0, 1, 2):
            with self.subTest(seed=seed):
                self.assertLessEqual(self.run_sphere(seed).best_cost, 1e-8)

    def test_history(self):
        result = self.run_sphere(5)
        self.assertEqual(result.history.size, 200)
        self.assertTrue(np.all(np.diff(result.history) <= 0))
        self.assertEqual(result.history[-1], result.best_cost)

    def test_deterministic(self):
        first, second = self.run_sphere(6), self.run_sphere(6)
        self.assertEqual(first.best_cost, second.best_cost)
        assert_array_equal(first.best_position, second.best_position)

    def test_evaluation_count(self):
        function = CountingFunction(benchmarks.sphere)
        objective = ObjectiveSpec(function, SQUARE, 'sphere')
        result = heo.run(objective, heo.HeoParams(k=7, i_max=11), SQUARE, seed=0)
        self.assertEqual(result.evaluations, 7 * 12)
        self.assertEqual(function.calls, objective.eval_count)
        self.assertEqual(result.evaluations, function.calls)

    def test_observer_sees_every_iteration(self):
        seen = []
        objective = benchmarks.objective('ackley', 4)

        def observer(iteration, positions, best_cost):
            seen.append(iteration)
            self.assertEqual(positions.shape, (5, 4))
            self.assertTrue(all(objective.space.contains(x) for x in positions))

        heo.run(objective, heo.HeoParams(k=5, i_max=30), objective.space, seed=1, observer=observer)
        self.assertEqual(seen, list(range(1, 31)))
