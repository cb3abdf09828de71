import math

from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from swarm_lab import harness
from swarm_lab.models import CellResult, Experiment


class StoreTests(APITestCase):

    def test_save_and_load_round_trip(self):
        plan = harness.ExperimentPlan(('heo', 'gwo'), (('sphere', 2), ('levy', 3)), repetitions=2,
                                      population=4, iterations=3)
        table = harness.run_experiment(plan)
        experiment = Experiment.objects.save_table(table, 'small', plan)
        self.assertEqual(experiment.cells.count(), 4)
        self.assertEqual(experiment.base_seed, 0)

        loaded = experiment.load_table()
        self.assertEqual(loaded.problems, ['sphere@2', 'levy@3'])
        self.assertEqual(loaded.algorithms, ['heo', 'gwo'])
        for original, stored in zip(table, loaded):
            self.assertEqual(original.mean_cost, stored.mean_cost)
            self.assertEqual(original.costs, stored.costs)

    def test_dimension_is_stored(self):
        experiment = Experiment.objects.save_table(harness.table3_fixture(), 'dims', source='reference')
        self.assertEqual(set(experiment.cells.values_list('dimension', flat=True)), {30})
        self.assertIsNone(experiment.repetitions)

    def test_non_finite_costs(self):
        table = harness.ResultTable()
        table.add(harness.CellResult('sphere@2', 'heo', math.inf, 0.0, 1.0, [math.inf, 1.0]))
        experiment = Experiment.objects.save_table(table, 'infinite')
        self.assertEqual(experiment.cells.get().costs, [None, 1.0])
        self.assertEqual(experiment.load_table().cell('sphere@2', 'heo').costs, [math.inf, 1.0])


class ExperimentApiTests(APITestCase):

    @classmethod
    def setUpTestData(cls):
        cls.reference = Experiment.objects.save_table(
            harness.table3_fixture(), 'reference', source='reference'
        )
        cls.empty = Experiment.objects.create(name='empty', source='import')

    def test_list(self):
        response = self.client.get(reverse('swarm_lab:experiment-list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual({row['name'] for row in response.data}, {'reference', 'empty'})

    def test_list_filtered_by_source(self):
        response = self.client.get(reverse('swarm_lab:experiment-list'), {'source': 'reference'})
        self.assertEqual(len(response.data), 1)
        self.assertEqual(response.data[0]['cell_count'], 84)
        self.assertEqual(response.data[0]['source_display'], 'Published Reference')

    def test_detail(self):
        response = self.client.get(reverse('swarm_lab:experiment-detail', args=[self.reference.pk]))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        cells = response.data['cells']
        self.assertEqual(len(cells), 84)
        self.assertEqual((cells[0]['problem'], cells[0]['algorithm']), ('sphere@30', 'pso'))
        self.assertEqual(cells[0]['experiment_name'], 'reference')

    def test_detail_not_found(self):
        response = self.client.get(reverse('swarm_lab:experiment-detail', args=[9999]))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)

    def test_ranks(self):
        response = self.client.get(reverse('swarm_lab:experiment-ranks', args=[self.reference.pk]))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['algorithms'], ['pso', 'afsa', 'gwo', 'heo', 'ga', 'qpso'])
        self.assertEqual(response.data['display']['total']['heo'], '1.5714')
        self.assertEqual(response.data['display']['multimodal']['gwo'], '1.5714')
        self.assertAlmostEqual(response.data['ranks']['unimodal']['pso'], 40 / 7)

    def test_ranks_of_empty_experiment(self):
        response = self.client.get(reverse('swarm_lab:experiment-ranks', args=[self.empty.pk]))
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_read_only(self):
        response = self.client.post(reverse('swarm_lab:experiment-list'), {'name': 'new'})
        self.assertIn(response.status_code, (401, 403, 405))
        self.assertFalse(Experiment.objects.filter(name='new').exists())


class CellApiTests(APITestCase):

    @classmethod
    def setUpTestData(cls):
        cls.reference = Experiment.objects.save_table(
            harness.table3_fixture(), 'reference', source='reference'
        )
        cls.other = Experiment.objects.save_table(harness.table3_fixture(dim=10), 'other', source='import')

    def test_filter_by_algorithm_and_experiment(self):
        response = self.client.get(
            reverse('swarm_lab:cell-list'), {'algorithm': 'heo', 'experiment': self.reference.pk}
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data), 14)
        self.assertTrue(all(row['algorithm'] == 'heo' for row in response.data))

    def test_filter_by_dimension(self):
        response = self.client.get(reverse('swarm_lab:cell-list'), {'dimension': 10, 'problem': 'levy@10'})
        self.assertEqual(len(response.data), 6)
        self.assertEqual({row['experiment_name'] for row in response.data}, {'other'})

    def test_infinite_mean_serializes_as_null(self):
        CellResult.objects.create(experiment=self.other, problem='sphere@2', algorithm='heo', mean_cost=math.inf)
        response = self.client.get(reverse('swarm_lab:cell-list'), {'problem': 'sphere@2'})
        self.assertEqual(len(response.data), 1)
        self.assertIsNone(response.data[0]['mean_cost'])
        self.assertIn(b'"mean_cost":null', response.content)
