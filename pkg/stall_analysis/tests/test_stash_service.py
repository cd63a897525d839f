import numpy as np
from django.test import SimpleTestCase

from stall_analysis.domain import DataConfig, MultiNodeSplit
from stall_analysis.services import CatalogService, DnnModelService, PRESETS, SimulationService, StashService
from stall_analysis.utils.error_handler import ConfigError, DomainError, InfeasibleConfigurationError

from .helpers import make_instance, random_instance


class StashAttributionTest(SimpleTestCase):
    def setUp(self):
        self.catalog = CatalogService().load_catalog()
        self.models = DnnModelService()
        self.service = StashService(SimulationService(), self.models)

    def assert_differences_exact(self, report):
        timings = report.timings
        self.assertEqual(report.interconnect_stall, timings['single_instance'].comm_interconnect_exposed)
        self.assertEqual(report.interconnect_stall,
                         timings['single_instance'].total - timings['single_gpu'].total)
        self.assertEqual(report.prep_stall, timings['warm_cache'].prep)
        self.assertEqual(report.fetch_stall, timings['cold_cache'].fetch - timings['warm_cache'].fetch)
        self.assertGreaterEqual(report.interconnect_stall, 0.0)
        self.assertGreaterEqual(report.prep_stall, 0.0)
        self.assertGreaterEqual(report.fetch_stall, 0.0)
        self.assertEqual(report.interconnect_stall_pct, report.interconnect_stall / report.single_gpu_time * 100)
        if report.multi_node_time is not None:
            self.assertEqual(report.network_stall, report.multi_node_time - report.single_instance_time)

    def test_randomized_configurations(self):
        rng = np.random.default_rng(2024)
        for index in range(200):
            inst = random_instance(rng, f'rand{index}')
            model = self.models.make_synthetic(
                int(rng.integers(1, 61)), float(rng.uniform(0, 5e8)), float(rng.uniform(1e-6, 1e-4)),
                sample_bytes=int(rng.integers(1_000, 500_000)),
            )
            batch = int(rng.integers(1, 65))
            per_gpu = batch * int(rng.integers(1, 21)) + int(rng.integers(0, batch))
            data = DataConfig(inst.gpu_count * per_gpu, batch)
            split = self.service.default_split(inst)

            report = self.service.run_stash(inst, model, data, split)

            self.assert_differences_exact(report)
            single_gpu = report.timings['single_gpu']
            self.assertEqual(single_gpu.iterations, report.timings['single_instance'].iterations)
            self.assertEqual(single_gpu.compute, report.timings['single_instance'].compute)
            if split is None:
                self.assertIsNone(report.network_stall)
                self.assertIsNone(report.network_stall_pct)
            else:
                self.assertEqual(report.multi_node_split, str(split))

    def test_network_stall_non_negative_when_network_is_slower(self):
        inst = self.catalog.get('p3.16xlarge')
        report = self.service.run_stash(inst, self.models.get_preset('resnet50'), DataConfig(25_600, 32), '2x4')
        self.assertGreater(report.network_stall, 0.0)
        self.assertAlmostEqual(report.network_stall_pct, report.network_stall / report.single_instance_time * 100)
        self.assert_differences_exact(report)

    def test_interconnect_percentage_uses_single_gpu_baseline(self):
        self.assertAlmostEqual(StashService.stall_percentage(45, 50), 90.0)
        report = self.service.run_stash(self.catalog.get('p2.8xlarge'), self.models.get_preset('vgg16'),
                                        DataConfig(2_560, 32))
        self.assertGreater(report.interconnect_stall, 0.0)
        self.assertEqual(report.interconnect_stall_pct, report.interconnect_stall / report.single_gpu_time * 100)
        self.assertNotAlmostEqual(report.interconnect_stall_pct,
                                  report.interconnect_stall / report.single_instance_time * 100)
        with self.assertRaises(DomainError):
            StashService.stall_percentage(1.0, 0.0)

    def test_model_without_compute_reports_null_interconnect_percentage(self):
        inst = make_instance(gpu_count=4)
        model = self.models.make_synthetic(4, 1e6, 0.0)
        report = self.service.run_stash(inst, model, DataConfig(128, 8), multi_node='2x2')
        self.assertEqual(report.single_gpu_time, 0.0)
        self.assertGreater(report.interconnect_stall, 0.0)
        self.assertIsNone(report.interconnect_stall_pct)
        self.assertIsNotNone(report.network_stall_pct)
        self.assertIsNone(report.to_dict()['interconnect_stall_pct'])

    def test_instant_interconnect_has_no_stall(self):
        inst = make_instance(gpu_count=8, ic_bandwidth=1e30, ic_latency=0.0)
        report = self.service.run_stash(inst, self.models.get_preset('vgg16'), DataConfig(2_560, 32))
        self.assertEqual(report.interconnect_stall, 0.0)
        self.assertEqual(report.interconnect_stall_pct, 0.0)

    def test_more_gpus_on_a_shared_bus_stall_more(self):
        p2_8 = self.catalog.get('p2.8xlarge')
        p2_16 = self.catalog.get('p2.16xlarge')
        self.assertLess(CatalogService.effective_per_gpu_bandwidth(p2_16, 16),
                        CatalogService.effective_per_gpu_bandwidth(p2_8, 8))
        for name in PRESETS:
            model = self.models.get_preset(name)
            eight = self.service.run_stash(p2_8, model, DataConfig(320, 2))
            sixteen = self.service.run_stash(p2_16, model, DataConfig(320, 2))
            self.assertGreater(eight.interconnect_stall_pct, 0.0, name)
            self.assertGreater(sixteen.interconnect_stall_pct, eight.interconnect_stall_pct, name)

    def test_epoch_cost_bills_the_warm_cache_run(self):
        inst = self.catalog.get('p3.8xlarge')
        report = self.service.run_stash(inst, self.models.get_preset('resnet18'), DataConfig(12_800, 32))
        self.assertEqual(report.epoch_cost, report.warm_cache_time * 12.24 / 3600)

    def test_run_batches_keeps_order(self):
        inst = self.catalog.get('p3.8xlarge')
        reports = self.service.run_batches(inst, self.models.get_preset('resnet18'), 12_800, [64, 16, 32])
        self.assertEqual([report.batch for report in reports], [64, 16, 32])
        self.assertEqual(reports[0].to_row()['batch'], 64)

    def test_default_split(self):
        self.assertEqual(self.service.default_split(self.catalog.get('p3.16xlarge')), MultiNodeSplit(2, 4))
        self.assertIsNone(self.service.default_split(self.catalog.get('p3.2xlarge')))


class StashConfigurationTest(SimpleTestCase):
    def setUp(self):
        self.models = DnnModelService()
        self.service = StashService(SimulationService(), self.models)
        self.inst = make_instance(gpu_count=4)
        self.model = self.models.get_preset('resnet50')

    def test_samples_must_divide_across_gpus(self):
        with self.assertRaises(ConfigError):
            self.service.run_stash(self.inst, self.model, DataConfig(1_001, 8))

    def test_split_must_match_gpu_count(self):
        with self.assertRaises(ConfigError):
            self.service.run_stash(self.inst, self.model, DataConfig(1_024, 8), '3x2')
        with self.assertRaises(DomainError):
            self.service.run_stash(self.inst, self.model, DataConfig(1_024, 8), 'four')
        with self.assertRaises(DomainError):
            MultiNodeSplit.parse('1x4')

    def test_memory_feasibility(self):
        self.service.check_memory_feasibility(self.inst, self.model, 32)
        with self.assertRaises(InfeasibleConfigurationError):
            self.service.check_memory_feasibility(self.inst, self.model, 200_000)
