from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from stall_analysis.domain import Catalog, ClusterConfig, DataConfig
from stall_analysis.services import (
    AdvisorService, CatalogService, DnnModelService, ScalingService, SimulationService,
)
from stall_analysis.utils.error_handler import DomainError

from .helpers import brute_force, fixture, make_instance, random_instance, simulate_every_pair


class TrainingCostTest(SimpleTestCase):
    def setUp(self):
        self.inst = CatalogService().load_catalog().get('p3.16xlarge')

    def test_per_second_billing(self):
        self.assertEqual(AdvisorService.training_cost(ClusterConfig.single_node(self.inst), 3600.0, 1), 24.48)
        self.assertEqual(AdvisorService.training_cost(ClusterConfig.homogeneous(self.inst, 2), 3600.0, 1), 48.96)
        self.assertAlmostEqual(AdvisorService.training_cost(ClusterConfig.single_node(self.inst), 60.0, 90),
                               36.72)

    def test_invalid_inputs(self):
        with self.assertRaises(DomainError):
            AdvisorService.training_cost(ClusterConfig.single_node(self.inst), 0.0, 1)
        with self.assertRaises(DomainError):
            AdvisorService.training_cost(ClusterConfig.single_node(self.inst), 10.0, 0)


class RecommendationTest(SimpleTestCase):
    def setUp(self):
        self.simulation = SimulationService()
        self.scaling = ScalingService()
        self.models = DnnModelService()
        self.advisor = AdvisorService(self.simulation, self.scaling, self.models)

    def test_matches_brute_force_on_random_catalogs(self):
        rng = np.random.default_rng(99)
        for round_index in range(100):
            instances = [random_instance(rng, f'c{round_index}.t{i}') for i in range(int(rng.integers(1, 6)))]
            if len(instances) > 1 and rng.uniform() < 0.3:
                instances.append(replace(instances[0], name=f'c{round_index}.twin'))
            catalog = Catalog(tuple(instances))
            model = self.models.make_synthetic(int(rng.integers(5, 60)), float(rng.uniform(1e6, 3e8)),
                                               float(rng.uniform(1e-6, 5e-5)))
            data = DataConfig(int(rng.integers(2_000, 20_000)), int(rng.integers(8, 65)))
            epochs = int(rng.integers(1, 6))
            budget = float(10 ** rng.uniform(-1, 3))
            n_max = int(rng.integers(1, 9))

            best, considered = brute_force(self.simulation, self.scaling, catalog, model, data,
                                           epochs, budget, n_max)
            recommendation = self.advisor.recommend(catalog, model, data, epochs, budget, n_max)

            index, inst, count, total, cost, feasible = best
            self.assertEqual(recommendation.config, ClusterConfig.homogeneous(inst, count))
            self.assertEqual(recommendation.predicted_cost, cost)
            self.assertEqual(recommendation.predicted_training_time, total)
            self.assertEqual(recommendation.feasible, feasible)
            self.assertEqual(recommendation.candidates_considered, considered)

    def test_full_simulation_matches_direct_enumeration(self):
        rng = np.random.default_rng(60)
        for round_index in range(60):
            instances = [random_instance(rng, f'f{round_index}.t{i}') for i in range(int(rng.integers(1, 4)))]
            if rng.uniform() < 0.3:
                instances.append(replace(instances[0], name=f'f{round_index}.twin'))
            catalog = Catalog(tuple(instances))
            model = self.models.make_synthetic(int(rng.integers(5, 40)), float(rng.uniform(1e6, 3e8)),
                                               float(rng.uniform(1e-6, 5e-5)))
            data = DataConfig(int(rng.integers(2_000, 8_000)), int(rng.integers(8, 65)))
            epochs = int(rng.integers(1, 6))
            budget = float(10 ** rng.uniform(-1, 3))
            n_max = int(rng.integers(1, 6))

            best, considered = simulate_every_pair(self.simulation, catalog, model, data, epochs, budget, n_max)
            recommendation = self.advisor.recommend(catalog, model, data, epochs, budget, n_max,
                                                    full_simulation=True)

            index, inst, count, total, cost, feasible = best
            self.assertEqual(recommendation.config, ClusterConfig.homogeneous(inst, count))
            self.assertEqual(recommendation.config.nodes[0][0].name, catalog.instances[index].name)
            self.assertEqual(recommendation.predicted_cost, cost)
            self.assertEqual(recommendation.predicted_training_time, total)
            self.assertEqual(recommendation.feasible, feasible)
            self.assertEqual(recommendation.candidates_considered, considered)

    def test_full_simulation_ties_go_to_catalog_order(self):
        first = make_instance(name='first', gpu_count=2)
        twin = replace(first, name='second')
        catalog = Catalog((first, twin))
        model = self.models.make_synthetic(10, 1e7, 1e-5)
        recommendation = self.advisor.recommend(catalog, model, DataConfig(4_096, 16), 1, 1e9, 2,
                                                full_simulation=True)
        self.assertEqual(recommendation.config.nodes[0][0].name, 'first')
        self.assertEqual(recommendation.config.instance_count, 1)

    def test_parallel_enumeration_is_deterministic(self):
        catalog = CatalogService().load_catalog()
        model = self.models.get_preset('resnet50')
        data = DataConfig(128_000, 32)
        serial = self.advisor.recommend(catalog, model, data, 10, 3_000.0, 8, workers=1)
        parallel = self.advisor.recommend(catalog, model, data, 10, 3_000.0, 8, workers=4)
        self.assertEqual(serial, parallel)
        self.assertEqual(serial.to_dict(), parallel.to_dict())

    def test_huge_budget_picks_cheapest_single_instance(self):
        catalog = CatalogService().load_catalog()
        model = self.models.get_preset('resnet50')
        data = DataConfig(128_000, 32)
        recommendation = self.advisor.recommend(catalog, model, data, 1, 1e12, 8)
        self.assertEqual(recommendation.config.instance_count, 1)
        candidates = self.advisor.evaluate_candidates(catalog, model, data, 1, 1e12, 8)
        singles = [c for c in candidates if c.count == 1]
        self.assertEqual(recommendation.predicted_cost, min(c.cost for c in singles))

    def test_tiny_budget_returns_fastest_infeasible(self):
        catalog = CatalogService().load_catalog()
        model = self.models.get_preset('resnet50')
        data = DataConfig(128_000, 32)
        recommendation = self.advisor.recommend(catalog, model, data, 1, 1e-6, 8)
        self.assertFalse(recommendation.feasible)
        candidates = self.advisor.evaluate_candidates(catalog, model, data, 1, 1e-6, 8)
        self.assertEqual(recommendation.predicted_training_time, min(c.training_time for c in candidates))

    def test_relaxing_budget_never_costs_more(self):
        catalog = CatalogService().load_catalog(fixture('toy_catalog.json'))
        model = self.models.get_preset('resnet18')
        data = DataConfig(64_000, 32)
        costs = []
        for budget in (5.0, 20.0, 60.0, 200.0, 1_000.0, 1e6):
            recommendation = self.advisor.recommend(catalog, model, data, 2, budget, 8)
            if recommendation.feasible:
                costs.append(recommendation.predicted_cost)
        self.assertTrue(costs)
        self.assertEqual(costs, sorted(costs, reverse=True))

    def test_cost_grows_with_instance_count(self):
        catalog = CatalogService().load_catalog(fixture('toy_catalog.json'))
        candidates = self.advisor.evaluate_candidates(catalog, self.models.get_preset('vgg16'),
                                                      DataConfig(64_000, 32), 1, 1e6, 8)
        for name in catalog.names():
            costs = [c.cost for c in candidates if c.instance.name == name]
            self.assertEqual(costs, sorted(costs))

    def test_skips_counts_without_a_full_step(self):
        catalog = CatalogService().load_catalog(fixture('toy_catalog.json'))
        candidates = self.advisor.evaluate_candidates(catalog, self.models.get_preset('resnet18'),
                                                      DataConfig(256, 32), 1, 1e6, 8)
        counts = {}
        for candidate in candidates:
            counts.setdefault(candidate.instance.name, []).append(candidate.count)
        self.assertEqual(counts, {'toy.small': list(range(1, 9)), 'toy.medium': [1, 2], 'toy.large': [1]})

    def test_invalid_requests(self):
        catalog = CatalogService().load_catalog(fixture('toy_catalog.json'))
        model = self.models.get_preset('resnet18')
        with self.assertRaises(DomainError):
            self.advisor.recommend(catalog, model, DataConfig(6_400, 32), 1, 0.0, 8)
        with self.assertRaises(DomainError):
            self.advisor.recommend(catalog, model, DataConfig(6_400, 32), 1, 100.0, 0)
        with self.assertRaises(DomainError):
            self.advisor.recommend(catalog, model, DataConfig(16, 32), 1, 100.0, 8)


class SweepTest(SimpleTestCase):
    def setUp(self):
        self.advisor = AdvisorService(SimulationService(), ScalingService(), DnnModelService())
        self.model = DnnModelService.make_synthetic(1, 4, 1e-4)
        self.data = DataConfig(32_000, 32)

    def test_optimum_at_square_root(self):
        inst = make_instance(gpu_count=1)
        t1 = self.advisor.single_instance_params(inst, self.model, self.data).t1
        catalog = Catalog((replace(inst, network_latency=t1 / 16),))
        rows = self.advisor.sweep(catalog, self.model, self.data, range(1, 9))
        self.assertEqual([row.n for row in rows if row.optimal], [4])
        self.assertEqual(rows[0].network_stall_pct, 0.0)
        self.assertEqual(rows[0].epoch_time_s, t1)
        stalls = [row.network_stall_s for row in rows]
        self.assertEqual(stalls, sorted(stalls))
        self.assertEqual(rows[3].to_dict()['optimal'], '*')
        self.assertEqual(rows[2].to_dict()['optimal'], '')

    def test_full_simulation_rows(self):
        catalog = Catalog((make_instance(gpu_count=2),))
        rows = self.advisor.sweep(catalog, self.model, self.data, [1, 2, 4], full_simulation=True, epochs=3)
        self.assertEqual([row.n for row in rows], [1, 2, 4])
        self.assertEqual(sum(row.optimal for row in rows), 1)
        for row in rows:
            self.assertEqual(row.total_time_s, 3 * row.epoch_time_s)

    def test_range_limits(self):
        catalog = Catalog((make_instance(gpu_count=1),))
        for bad in (range(0, 3), range(60, 70), []):
            with self.assertRaises(DomainError):
                self.advisor.sweep(catalog, self.model, self.data, bad)
